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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qil/interferometer.hpp"
#include "qil/protocols.hpp"

namespace qil {
namespace {

QubitAmplitudes random_qubit(std::mt19937_64& rng, bool real) {
  std::normal_distribution<double> g;
  Complex a(g(rng), real ? 0.0 : g(rng));
  Complex b(g(rng), real ? 0.0 : g(rng));
  double n = std::sqrt(std::norm(a) + std::norm(b));
  return {a / n, b / n};
}

ProtocolConfig config(Scheme s, int n) {
  ProtocolConfig c;
  c.scheme = s;
  c.photons = n;
  return c;
}

TEST(Gates, PiAndHalfPiPulses) {
  QubitState zero = QubitState::product({{1.0, 0.0}});
  EXPECT_NEAR(std::abs(pi_pulse(zero, 0)[1]), 1.0, 1e-15);
  QubitState h = half_pi_pulse(zero, 0);
  EXPECT_NEAR(h[0].real(), std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(h[1].imag(), -std::sqrt(0.5), 1e-15);
  QubitState hh = half_pi_pulse(h, 0);
  EXPECT_NEAR(std::abs(hh[1]), 1.0, 1e-15);
  QubitState p = phase_imprint(h, 0, 1, std::numbers::pi / 2);
  EXPECT_NEAR(p[1].real(), std::sqrt(0.5), 1e-15);
}

TEST(Gates, PulsesAreUnitary) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 20; ++t) {
    QubitState s = QubitState::product({random_qubit(rng, false), random_qubit(rng, false)});
    EXPECT_NEAR(half_pi_pulse(s, 1).norm_squared(), 1.0, 1e-14);
    EXPECT_NEAR(pi_pulse(s, 0).norm_squared(), 1.0, 1e-14);
  }
}

TEST(Measure, ExhaustiveAndSampled) {
  QubitState s = QubitState::product({{std::sqrt(0.3), std::sqrt(0.7)}, {1.0, 0.0}});
  auto both = measure_qubit(pure_ensemble(s), 0);
  ASSERT_EQ(both.size(), 2u);
  EXPECT_NEAR(both[0].probability, 0.3, 1e-15);
  std::mt19937_64 rng(9);
  int ones = 0;
  for (int i = 0; i < 2000; ++i) ones += measure_qubit(pure_ensemble(s), 0, rng).bit;
  EXPECT_NEAR(ones / 2000.0, 0.7, 0.05);
}

TEST(Rng, UniformUnitRange) {
  std::mt19937_64 rng(0);
  for (int i = 0; i < 1000; ++i) {
    double u = uniform_unit(rng);
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

TEST(Theta, DefaultsAndInjectedError) {
  EXPECT_NEAR(default_theta(Scheme::kNoon, 10), std::numbers::pi / 20, 1e-15);
  EXPECT_NEAR(default_theta(Scheme::kCoherent, 100), std::sqrt(std::log(100.0) / 100), 1e-15);
  for (Scheme s : {Scheme::kCoherent, Scheme::kTwinFock, Scheme::kNoon}) {
    for (double err : {0.3, 0.01}) {
      double theta = theta_for_error(s, 40, err);
      EXPECT_NEAR(false_null_rate(s, 40, theta), err, 1e-9) << scheme_name(s);
    }
  }
  ProtocolConfig c = config(Scheme::kNoon, 10);
  c.injected_error = 0.25;
  EXPECT_NEAR(resolve_theta(c), std::acos(0.5) / 10, 1e-15);
}

// Property: exhaustive f_avg over outcome branches equals 1 - (1 - Lambda) err.
TEST(FidelityProperty, AverageOverBranches) {
  std::mt19937_64 rng(21);
  struct Case {
    Scheme s;
    int n;
    double theta;
  };
  for (Case c : {Case{Scheme::kCoherent, 30, 0.25}, Case{Scheme::kTwinFock, 6, 0.1},
                 Case{Scheme::kNoon, 7, 0.15}}) {
    double err = false_null_rate(c.s, c.n, c.theta);
    for (int t = 0; t < 5; ++t) {
      QubitAmplitudes x = random_qubit(rng, false);
      QubitAmplitudes y = random_qubit(rng, false);
      ProtocolConfig pc = config(c.s, c.n);
      pc.theta = c.theta;
      auto out = entangle_pair(pure_ensemble(QubitState::product({x, y})), {0, 1}, pc);
      double lambda = balanced_weight(x, y);
      double favg = 0.0;
      for (const auto& o : out) {
        QubitState ideal(2);
        if (o.subspace == Subspace::kBalanced) {
          ideal[1] = x.zero * y.one;
          ideal[2] = x.one * y.zero;
        } else {
          ideal[0] = x.zero * y.zero;
          ideal[3] = double(imbalanced_sign(c.s, o.value)) * x.one * y.one;
        }
        ideal.normalize();
        favg += o.probability * qubit_fidelity(o.posterior, ideal);
      }
      EXPECT_NEAR(favg, 1.0 - (1.0 - lambda) * err, 1e-9) << scheme_name(c.s);
      Fidelities f = fidelities(lambda, err);
      EXPECT_NEAR(f.f_avg, 1.0 - (1.0 - lambda) * err, 1e-15);
    }
  }
}

TEST(Teleport, ExactNoonIsPerfect) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 10; ++t) {
    ProtocolResult r = teleport(random_qubit(rng, false), config(Scheme::kNoon, 6));
    EXPECT_GE(r.minimum_fidelity, 1.0 - 1e-12);
    double total = 0.0;
    for (const auto& b : r.branches) total += b.probability;
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
}

TEST(Teleport, SignFixOnEitherQubit) {
  QubitAmplitudes s{std::sqrt(0.4), Complex(0.0, std::sqrt(0.6))};
  EXPECT_GE(teleport(s, config(Scheme::kNoon, 3), true).minimum_fidelity, 1.0 - 1e-12);
  EXPECT_GE(teleport(s, config(Scheme::kTwinFock, 3)).average_fidelity, 0.0);
}

// Property: with a false-null rate err the teleported fidelity is
// 1 - err/2 for real sources; complex phases add 2 err Im^2(conj(a) b).
TEST(TeleportProperty, ErrorLaw) {
  std::mt19937_64 rng(4);
  for (Scheme s : {Scheme::kCoherent, Scheme::kTwinFock, Scheme::kNoon}) {
    ProtocolConfig c = config(s, 12);
    c.injected_error = 0.08;
    for (int t = 0; t < 4; ++t) {
      QubitAmplitudes src = random_qubit(rng, t % 2 == 0);
      double im = (std::conj(src.zero) * src.one).imag();
      ProtocolResult r = teleport(src, c);
      EXPECT_NEAR(r.average_fidelity, 1.0 - 0.5 * 0.08 + 2.0 * 0.08 * im * im, 1e-8)
          << scheme_name(s);
    }
  }
}

TEST(Ghz, ThreeAndFourQubits) {
  for (int n : {2, 3, 4}) {
    ProtocolResult r = ghz(n, config(Scheme::kNoon, 5));
    EXPECT_GE(r.minimum_fidelity, 1.0 - 1e-12) << n;
  }
  EXPECT_THROW(ghz(1, config(Scheme::kNoon, 5)), std::invalid_argument);
}

TEST(Swap, PerfectUnderNoonAndProductInput) {
  EXPECT_GE(swap_entanglement(std::sqrt(0.5), std::sqrt(0.5), config(Scheme::kNoon, 4))
                .minimum_fidelity,
            1.0 - 1e-12);
  EXPECT_NEAR(swap_entanglement(1.0, 0.0, config(Scheme::kTwinFock, 5)).average_fidelity, 1.0,
              1e-12);
  // a false-null rate still costs fidelity
  EXPECT_LT(swap_entanglement(1.0, 0.0, config(Scheme::kCoherent, 20)).average_fidelity, 1.0);
}

TEST(Sampled, SeedDeterminesBranch) {
  ProtocolConfig c = config(Scheme::kTwinFock, 4);
  c.injected_error = 0.3;
  c.seed = 77;
  QubitAmplitudes src{std::sqrt(0.5), std::sqrt(0.5)};
  ProtocolResult a = teleport(src, c);
  ProtocolResult b = teleport(src, c);
  ASSERT_EQ(a.branches.size(), 1u);
  EXPECT_EQ(a.branches[0].transcript, b.branches[0].transcript);
  EXPECT_EQ(a.average_fidelity, b.average_fidelity);
}

TEST(Reduce, KeepsListedQubits) {
  QubitState s = QubitState::product({{0.0, 1.0}, {1.0, 0.0}, {0.0, 1.0}});
  DensityMatrix rho = reduce_to(pure_ensemble(s), {2, 0});
  EXPECT_NEAR(rho(3, 3).real(), 1.0, 1e-15);
  EXPECT_NEAR(fidelity_with(rho, QubitState::product({{0.0, 1.0}, {0.0, 1.0}})), 1.0, 1e-15);
}

}  // namespace
}  // namespace qil
