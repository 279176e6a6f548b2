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

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qil/interferometer.hpp"
#include "qil/qubits.hpp"

namespace qil {

struct ProtocolConfig {
  Scheme scheme = Scheme::kNoon;
  int photons = 10;
  // Per-photon phase; defaults to the scheme's operating point.
  std::optional<double> theta;
  // Sampled mode when set, exhaustive enumeration otherwise.
  std::optional<std::uint64_t> seed;
  // False-null rate to realize by retuning theta (overrides theta).
  std::optional<double> injected_error;
};

// Operating phase: pi/(2N) for NOON, the first twin-Fock zero, and
// sqrt(ln 100 / N) for the coherent scheme (false-null rate 1e-2).
double default_theta(Scheme scheme, int n);
// Phase giving false-null rate `err` exactly for the imbalanced branch.
double theta_for_error(Scheme scheme, int n, double err);
double resolve_theta(const ProtocolConfig& config);
// Exact false-null rate of the imbalanced branch at theta.
double false_null_rate(Scheme scheme, int n, double theta);

// Relative sign between |00> and |11> after a non-null outcome:
// (-1)^n for a coherent count n, (-1)^m for a number difference 2m, and -1
// for the NOON presence click.
int imbalanced_sign(Scheme scheme, int value);

QubitState pi_pulse(const QubitState& s, int qubit);
QubitState half_pi_pulse(const QubitState& s, int qubit);
// Multiplies the component where `qubit` reads `basis_bit` by e^{i phase}.
QubitState phase_imprint(const QubitState& s, int qubit, int basis_bit,
                         double phase);
QubitEnsemble pi_pulse(const QubitEnsemble& e, int qubit);
QubitEnsemble half_pi_pulse(const QubitEnsemble& e, int qubit);
QubitEnsemble phase_imprint(const QubitEnsemble& e, int qubit, int basis_bit,
                            double phase);

struct QubitMeasurement {
  int bit = 0;
  double probability = 0.0;
  QubitEnsemble posterior;
};
// Both outcomes with nonzero probability.
std::vector<QubitMeasurement> measure_qubit(const QubitEnsemble& e, int qubit);
QubitMeasurement measure_qubit(const QubitEnsemble& e, int qubit,
                               std::mt19937_64& rng);

// Uniform double in [0, 1) from the top 53 bits.
double uniform_unit(std::mt19937_64& rng);

// Density matrix of the listed qubits (in the listed order).
DensityMatrix reduce_to(const QubitEnsemble& e, const std::vector<int>& keep);
double fidelity_with(const DensityMatrix& rho, const QubitState& target);

// Pipeline, measurement and exact collapse on the selected pair; other
// qubits ride along untouched.
std::vector<OutcomeRecord> entangle_pair(const QubitEnsemble& reg,
                                         QubitPair pair,
                                         const ProtocolConfig& config);

struct ProtocolBranch {
  double probability = 0.0;
  std::vector<std::string> transcript;
  QubitEnsemble final_state;  // output qubits only
  double fidelity = 0.0;
};

struct ProtocolResult {
  std::vector<ProtocolBranch> branches;
  double average_fidelity = 0.0;  // probability-weighted
  double minimum_fidelity = 1.0;
  double theta = 0.0;
};

// The sign fix after a non-null outcome goes on |1> of the source, or of the
// target when requested; both act on the same |11> component.
ProtocolResult teleport(const QubitAmplitudes& source,
                        const ProtocolConfig& config,
                        bool sign_fix_on_target = false);
// n-qubit cat state by chaining pairs (0,1), (1,2), ...
ProtocolResult ghz(int n_qubits, const ProtocolConfig& config);
ProtocolResult swap_entanglement(Complex c00, Complex c11,
                                 const ProtocolConfig& config);

}  // namespace qil
