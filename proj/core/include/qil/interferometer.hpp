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

#include <optional>
#include <string>
#include <vector>

#include "qil/fock.hpp"
#include "qil/qubits.hpp"

namespace qil {

enum class Scheme { kCoherent, kTwinFock, kNoon };
enum class Readout { kCoherentCount, kTfNumberDifference, kNoonPresence };
enum class Subspace { kBalanced, kImbalanced };

Readout readout_for(Scheme scheme);
const char* scheme_name(Scheme scheme);
Scheme parse_scheme(const std::string& name);

// Register indices of the two qubits coupled to the light.
struct QubitPair {
  int x = 0;
  int y = 1;
};

struct OutcomeRecord {
  Readout readout = Readout::kCoherentCount;
  // Upper-port count, n0 - n1, or 1 when the lower port fired.
  int value = 0;
  double probability = 0.0;
  QubitEnsemble posterior;
  Subspace subspace = Subspace::kBalanced;
};

// Light injected by each scheme for photon number N (per input port for the
// twin-Fock state, mean number for the coherent state).
DualModeState scheme_input(Scheme scheme, int n);

// BS, qubit x, qubit y, BS.
JointState run_mz(const JointState& j, double theta, QubitPair pair = {});
// qubit x, qubit y, nonlinear beamsplitter.
JointState run_noon(const JointState& j, double theta, QubitPair pair = {});
JointState run_pipeline(Scheme scheme, const JointState& j, double theta,
                        QubitPair pair = {});

// MZ run with one photon removed from `arm` between the two qubits. Branch
// coefficients pick up the branch's loss amplitude; the result is
// renormalized. `weight` returns the mean photon number that was annihilated.
JointState run_mz_with_loss(const JointState& j, double theta, int arm,
                            QubitPair pair = {}, double* weight = nullptr);
// Loss from either arm, mixed by the arm photon expectations.
JointEnsemble run_mz_with_single_loss(const JointState& j, double theta,
                                      QubitPair pair = {});

int readout_value(Readout readout, int n0, int n1);
bool is_null(Readout readout, int value);

// Exact distribution, sorted by value; outcomes below 1e-15 are omitted.
std::vector<OutcomeRecord> outcome_distribution(const JointState& j,
                                                Readout readout);
std::vector<OutcomeRecord> outcome_distribution(const JointEnsemble& e,
                                                Readout readout);

// Throws std::domain_error for an outcome of zero probability.
OutcomeRecord collapse(const JointState& j, Readout readout, int value);
OutcomeRecord collapse(const JointEnsemble& e, Readout readout, int value);

// False-null rates.
double epsilon(int n, double theta);
double epsilon_simulated(int n, double theta);
std::vector<double> epsilon_simulated(int n, const std::vector<double>& thetas);
double eta(int n, double theta);
double kappa(int n, double theta);
double kappa_simulated(int n, double theta);

// Output of one imbalanced twin-Fock branch (phases 2 theta on mode 0).
DualModeState tf_imbalanced_output(int n, double theta);

// Amplitude of |N+m, N-m> for the imbalanced twin-Fock branch.
Complex xi_m(int n, int m, double theta);
std::vector<Complex> xi_all(int n, double theta);
// Real-valued amplitude with the global phase removed and the sign fixed so
// that xi_0(theta = 0) = 1 and xi_m = (-1)^m xi_m(-theta).
double xi_m_real(int n, int m, double theta);
// Binomial-sum form; accurate only while the terms do not cancel badly.
double xi_m_closed_form(int n, int m, double theta);
// xi_0 through the Legendre polynomial P_N(cos 2 theta).
double xi_0_legendre(int n, double theta);

// |xi_0 + i xi_1 sqrt(1 + 1/N)|^2 with the real amplitudes.
double eta_loss(int n, double theta);
// One photon lost between the qubits; null means |n0 - n1| = 1.
double eta_loss_simulated(int n, double theta);

enum class ZeroScheme { kTwinFock, kNoon };

// Smallest theta > 0 where the false-null amplitude vanishes. Throws
// std::domain_error when no sign change lies in (0, pi].
double find_first_zero(int n, ZeroScheme scheme);
// First zero in N theta units for any N: the exact pipeline up to N = 4000,
// then the zero of P_N(cos 2 theta) from its large-order Bessel asymptote.
double tf_first_zero_scaled(double n);

struct Fidelities {
  double f_nul = 1.0;
  double f_avg = 1.0;
};
Fidelities fidelities(double lambda, double err);

double kappa_prime(int n, double theta);
double kappa_prime_simulated(int n, double theta);

struct ErrorRates {
  double epsilon = 0.0;
  double eta = 0.0;
  double kappa = 0.0;
  double eta_loss = 0.0;
};
ErrorRates error_rates(int n, double theta);

struct OverlapReport {
  double exact = 0.0;      // exp(-N (1 - cos theta)^2)
  double simulated = 0.0;  // |<alpha cos theta | alpha>|^2 from truncated states
  double quartic_form = 0.0;  // 1 - theta^4 N / 8
};
OverlapReport lower_output_overlap(int n, double theta);

}  // namespace qil
