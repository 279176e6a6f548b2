// Copyright 2026 The qil Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <cmath>

#include "qil/fock.hpp"
#include "qil/interferometer.hpp"

namespace {

void BM_BeamsplitterTwinFock(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  qil::DualModeState in = qil::make_state(qil::spec::TwinFock{n});
  for (auto _ : state) {
    benchmark::DoNotOptimize(qil::apply_beamsplitter(in));
  }
}
BENCHMARK(BM_BeamsplitterTwinFock)->Arg(10)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_BeamsplitterCoherent(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  qil::DualModeState in = qil::make_state(qil::spec::Coherent{std::sqrt(double(n)), 0});
  for (auto _ : state) {
    benchmark::DoNotOptimize(qil::apply_beamsplitter(in));
  }
}
BENCHMARK(BM_BeamsplitterCoherent)->Arg(10)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_EtaTwinFock(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(qil::eta(n, 1.2 / n));
  }
}
BENCHMARK(BM_EtaTwinFock)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_EtaLoss(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(qil::eta_loss(n, 1.2 / n));
  }
}
BENCHMARK(BM_EtaLoss)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_EpsilonSimulated(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(qil::epsilon_simulated(n, std::sqrt(2.0 / n)));
  }
}
BENCHMARK(BM_EpsilonSimulated)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
