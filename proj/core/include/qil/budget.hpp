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

#include "qil/interferometer.hpp"
#include "qil/qubits.hpp"

namespace qil {

struct PhysicalParams {
  double waist_ratio = 3.0;     // W / lambda
  double detuning_ratio = 0.0;  // Gamma / Delta
  double theta = 0.0;           // single-atom phase per photon pass
  double n_photons = 0.0;
  double cavity_passes = 1.0;   // M

  // Throws std::invalid_argument on non-physical values; returns warnings for
  // values that leave the far-detuned regime.
  std::vector<std::string> validate() const;
};

// theta = (3 / 8 pi) (lambda / W)^2 (Gamma / Delta).
double theta_from_physics(double waist_ratio, double detuning_ratio);

struct SpontaneousEmission {
  double probability = 0.0;
  bool valid_regime = true;  // false when the value exceeds 1
};

// 2 N M theta Gamma/Delta for the two qubits.
SpontaneousEmission p_spontaneous(const PhysicalParams& params);

// Budget relations below use Gamma/Delta = 8 (W/lambda)^2 theta, so the
// emission probability reads 16 (W/lambda)^2 N M theta^2.
double budget_coupling(double waist_ratio);

struct CavityBudget {
  double passes = 0.0;                 // -16 (W/lambda)^2 ln(eps) / eps
  std::optional<double> quoted_passes;  // 6.6e5 at eps = 0.01, W/lambda = 3
  double mean_detected_photons = 0.0;  // -ln(eps)
};
CavityBudget cavity_passes_for_targets(double epsilon_target,
                                       double waist_ratio);

enum class LossLaw { kPoisson, kGaussian };

struct LossModel {
  double mean_lost = 0.0;  // per arm
  LossLaw law = LossLaw::kPoisson;
};

// f(k) for k = 0..K, truncated where the remaining tail is below 1e-10 and
// renormalized over the kept grid.
std::vector<double> loss_count_distribution(const LossModel& model);
// Total-variation distance between the Poisson and Gaussian laws at k-bar.
double loss_law_distance(double mean_lost);

// Phase kicks e^{i theta} on |q>_y for every photon lost from arm q, mixed
// with weights f(k) f(k'). Throws when k-bar exceeds N.
QubitEnsemble apply_loss_coherent(const QubitEnsemble& state, double theta,
                                  const LossModel& loss, int n_photons,
                                  int qubit_y = 1);

// k-bar = N ln(2 f - 1) / ln(eps).
double kbar_for_fidelity(double f_loss_target, double epsilon, double n);

// Closed form for a pure balanced Bell state: (1 + e^{-2 kbar (1 - cos theta)}) / 2.
double loss_fidelity_closed(double theta, double mean_lost);

struct SensitivityWindow {
  double x_zero = 0.0;           // first zero in N theta units
  double fitted_curvature = 0.0;  // err ~ a delta^2 near the zero
  double reference_curvature = 0.0;
  double error_budget = 0.0;     // 1 - fidelity_target
  double delta_max = 0.0;        // in N theta units
  double theta_min = 0.0;
  double theta_max = 0.0;
  // (theta_max - theta_1) / theta_1^{1.5}
  double window_coefficient = 0.0;
  double reference_window_coefficient = 0.0;
  double reference_delta_coefficient = 0.0;  // delta_max sqrt(N), tf only
};
SensitivityWindow sensitivity_window(int n, ZeroScheme scheme,
                                     double fidelity_target);

// Least-squares curvature of err(x_zero + delta) over |delta| <= half_width.
double fit_zero_curvature(int n, ZeroScheme scheme, double half_width,
                          int points = 21);

enum class LimitScheme { kCoherentCavity, kTwinFock, kTwinFockOneLoss, kNoon };
LimitScheme parse_limit_scheme(const std::string& name);

// c in eta_loss ~ c / (N theta), least squares over N theta in [2, 20] at
// N = 1000; computed once and cached.
double eta_loss_fit_coefficient();
double eta_loss_fit_coefficient(int n, double x_lo, double x_hi, int points);

// Coefficient C in f = 1 - C / N^{1/3} for the single-loss twin-Fock case.
double one_loss_limit_coefficient(double waist_ratio);

struct FidelityLimit {
  double fidelity = 1.0;
  double spontaneous = 0.0;  // emission probability at the operating point
  bool valid_regime = true;
};
FidelityLimit fidelity_limit(LimitScheme scheme, double n, double m,
                             double waist_ratio);

// Photon number N reaching the fidelity target for given M; for the coherent
// cavity scheme this returns the passes M instead.
double photons_for_fidelity(LimitScheme scheme, double fidelity_target,
                            double m, double waist_ratio);

// Twin-Fock MZ with one photon lost between the qubits: from `arm`, or from
// either arm weighted by its photon expectation when arm is empty.
JointEnsemble apply_loss_tf(const JointState& j, double theta,
                            std::optional<int> arm = std::nullopt);

// Equal mixture of |N-1,0> and |0,N-1>.
LightEnsemble apply_loss_noon(int n);

}  // namespace qil
