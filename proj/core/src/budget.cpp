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

#include "qil/budget.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "qil/numeric.hpp"

namespace qil {

std::vector<std::string> PhysicalParams::validate() const {
  if (!(waist_ratio > 0.0) || !std::isfinite(waist_ratio)) {
    throw std::invalid_argument("waist_ratio must be positive");
  }
  if (!(detuning_ratio >= 0.0) || detuning_ratio >= 1.0) {
    throw std::invalid_argument("detuning_ratio must lie in [0, 1)");
  }
  if (!(theta >= 0.0) || !std::isfinite(theta)) {
    throw std::invalid_argument("theta must be finite and non-negative");
  }
  if (!(n_photons >= 0.0) || !std::isfinite(n_photons)) {
    throw std::invalid_argument("photon number must be non-negative");
  }
  if (!(cavity_passes >= 1.0) || !std::isfinite(cavity_passes)) {
    throw std::invalid_argument("cavity passes must be at least 1");
  }
  std::vector<std::string> warnings;
  if (detuning_ratio > 0.1) {
    warnings.push_back("detuning_ratio above 0.1: far-detuned condition is marginal");
  }
  return warnings;
}

double theta_from_physics(double waist_ratio, double detuning_ratio) {
  if (!(waist_ratio > 0.0) || !(detuning_ratio >= 0.0)) {
    throw std::invalid_argument("waist and detuning ratios must be positive");
  }
  return 3.0 / (8.0 * std::numbers::pi) * detuning_ratio /
         (waist_ratio * waist_ratio);
}

SpontaneousEmission p_spontaneous(const PhysicalParams& params) {
  params.validate();
  SpontaneousEmission out;
  out.probability = 2.0 * params.n_photons * params.cavity_passes *
                    params.theta * params.detuning_ratio;
  out.valid_regime = out.probability <= 1.0;
  return out;
}

double budget_coupling(double waist_ratio) {
  if (!(waist_ratio > 0.0)) throw std::invalid_argument("waist_ratio must be positive");
  return 16.0 * waist_ratio * waist_ratio;
}

CavityBudget cavity_passes_for_targets(double epsilon_target,
                                       double waist_ratio) {
  if (!(epsilon_target > 0.0 && epsilon_target < 1.0)) {
    throw std::invalid_argument("epsilon target must lie in (0, 1)");
  }
  CavityBudget b;
  b.passes = -budget_coupling(waist_ratio) * std::log(epsilon_target) /
             epsilon_target;
  b.mean_detected_photons = -std::log(epsilon_target);
  if (std::abs(epsilon_target - 0.01) < 1e-12 &&
      std::abs(waist_ratio - 3.0) < 1e-12) {
    b.quoted_passes = 6.6e5;
  }
  return b;
}

std::vector<double> loss_count_distribution(const LossModel& model) {
  const double kbar = model.mean_lost;
  if (!(kbar >= 0.0) || !std::isfinite(kbar)) {
    throw std::invalid_argument("mean loss must be non-negative");
  }
  if (kbar == 0.0) return {1.0};
  int top = static_cast<int>(std::ceil(kbar + 20.0 * std::sqrt(kbar) + 40.0));
  std::vector<double> f(top + 1);
  for (int k = 0; k <= top; ++k) {
    if (model.law == LossLaw::kPoisson) {
      f[k] = std::exp(-kbar + k * std::log(kbar) - std::lgamma(k + 1.0));
    } else {
      double d = k - kbar;
      f[k] = std::exp(-d * d / (2.0 * kbar)) / std::sqrt(2.0 * std::numbers::pi * kbar);
    }
  }
  double total = 0.0;
  for (double v : f) total += v;
  // drop the upper tail below 1e-10 of the mass
  double tail = 0.0;
  while (f.size() > 1 && tail + f.back() < 1e-10 * total) {
    tail += f.back();
    f.pop_back();
  }
  double kept = total - tail;
  for (double& v : f) v /= kept;
  return f;
}

double loss_law_distance(double mean_lost) {
  auto p = loss_count_distribution({mean_lost, LossLaw::kPoisson});
  auto g = loss_count_distribution({mean_lost, LossLaw::kGaussian});
  std::size_t n = std::max(p.size(), g.size());
  double tv = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    double a = k < p.size() ? p[k] : 0.0;
    double b = k < g.size() ? g[k] : 0.0;
    tv += std::abs(a - b);
  }
  return 0.5 * tv;
}

QubitEnsemble apply_loss_coherent(const QubitEnsemble& state, double theta,
                                  const LossModel& loss, int n_photons,
                                  int qubit_y) {
  if (loss.mean_lost > n_photons) {
    throw std::invalid_argument("mean loss exceeds the photon number");
  }
  if (state.members.empty()) throw std::invalid_argument("empty ensemble");
  const int nq = state.members.front().state.n_qubits();
  if (qubit_y < 0 || qubit_y >= nq) throw std::out_of_range("qubit index out of range");

  std::vector<double> f = loss_count_distribution(loss);
  const int kmax = static_cast<int>(f.size()) - 1;
  // Only k - k' matters once the global phase is dropped.
  std::map<int, double> by_shift;
  for (int k = 0; k <= kmax; ++k) {
    for (int kp = 0; kp <= kmax; ++kp) by_shift[k - kp] += f[k] * f[kp];
  }
  double total = 0.0;
  for (const auto& [d, w] : by_shift) total += w;

  QubitEnsemble out;
  for (const auto& member : state.members) {
    for (const auto& [d, w] : by_shift) {
      if (w * member.weight < 1e-16) continue;
      QubitState s = member.state;
      Complex kick = std::polar(1.0, d * theta);
      for (std::size_t b = 0; b < s.dimension(); ++b) {
        if (s.bit(b, qubit_y) == 0) s[b] *= kick;
      }
      out.members.push_back({member.weight * w / total, std::move(s)});
    }
  }
  double sum = out.total_weight();
  for (auto& m : out.members) m.weight /= sum;
  return out;
}

double kbar_for_fidelity(double f_loss_target, double epsilon, double n) {
  if (!(f_loss_target > 0.5 && f_loss_target <= 1.0)) {
    throw std::invalid_argument("fidelity target must lie in (1/2, 1]");
  }
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw std::invalid_argument("epsilon must lie in (0, 1)");
  }
  return n * std::log(2.0 * f_loss_target - 1.0) / std::log(epsilon);
}

double loss_fidelity_closed(double theta, double mean_lost) {
  return 0.5 * (1.0 + std::exp(-2.0 * mean_lost * (1.0 - std::cos(theta))));
}

double fit_zero_curvature(int n, ZeroScheme scheme, double half_width,
                          int points) {
  if (points < 3) throw std::invalid_argument("need at least 3 fit points");
  double x0 = n * find_first_zero(n, scheme);
  std::vector<double> d(points);
  std::vector<double> y(points);
  for (int i = 0; i < points; ++i) {
    d[i] = -half_width + 2.0 * half_width * i / (points - 1);
    double theta = (x0 + d[i]) / n;
    y[i] = scheme == ZeroScheme::kTwinFock ? eta(n, theta) : kappa(n, theta);
  }
  return fit_quadratic(d, y);
}

SensitivityWindow sensitivity_window(int n, ZeroScheme scheme,
                                     double fidelity_target) {
  if (!(fidelity_target > 0.0 && fidelity_target < 1.0)) {
    throw std::invalid_argument("fidelity target must lie in (0, 1)");
  }
  SensitivityWindow w;
  w.x_zero = n * find_first_zero(n, scheme);
  w.fitted_curvature = fit_zero_curvature(n, scheme, 0.05);
  bool tf = scheme == ZeroScheme::kTwinFock;
  w.reference_curvature = tf ? 1.3 : 1.0;
  w.reference_window_coefficient = tf ? 9.5 : 8.1;
  w.reference_delta_coefficient = tf ? 12.4 : 0.0;
  w.error_budget = 1.0 - fidelity_target;
  w.delta_max = std::sqrt(w.error_budget / w.fitted_curvature);
  w.theta_min = (w.x_zero - w.delta_max) / n;
  w.theta_max = (w.x_zero + w.delta_max) / n;
  double theta1 = w.x_zero / n;
  w.window_coefficient = (w.delta_max / n) / std::pow(theta1, 1.5);
  return w;
}

LimitScheme parse_limit_scheme(const std::string& name) {
  if (name == "coherent" || name == "coherent_cavity") return LimitScheme::kCoherentCavity;
  if (name == "tf") return LimitScheme::kTwinFock;
  if (name == "tf_one_loss") return LimitScheme::kTwinFockOneLoss;
  if (name == "noon") return LimitScheme::kNoon;
  throw std::invalid_argument("unknown limit scheme '" + name + "'");
}

double eta_loss_fit_coefficient(int n, double x_lo, double x_hi, int points) {
  if (points < 2 || !(x_hi > x_lo) || !(x_lo > 0.0)) {
    throw std::invalid_argument("invalid fit grid");
  }
  std::vector<double> x(points);
  std::vector<double> y(points);
  for (int i = 0; i < points; ++i) {
    x[i] = x_lo + (x_hi - x_lo) * i / (points - 1);
    y[i] = eta_loss(n, x[i] / n);
  }
  return fit_inverse(x, y);
}

double eta_loss_fit_coefficient() {
  static std::once_flag once;
  static double value = 0.0;
  std::call_once(once, [] { value = eta_loss_fit_coefficient(1000, 2.0, 20.0, 91); });
  return value;
}

double one_loss_limit_coefficient(double waist_ratio) {
  double c = eta_loss_fit_coefficient();
  return std::cbrt(c * c * budget_coupling(waist_ratio));
}

namespace {

double coherent_cavity_error(double m, double waist_ratio) {
  double k = budget_coupling(waist_ratio);
  auto g = [&](double e) { return e + k * std::log(e) / m; };
  return bisect(g, {1e-300, 1.0}, 1e-15);
}

}  // namespace

FidelityLimit fidelity_limit(LimitScheme scheme, double n, double m,
                             double waist_ratio) {
  if (!(n >= 1.0) || !(m >= 1.0)) {
    throw std::invalid_argument("N and M must be at least 1");
  }
  FidelityLimit out;
  double k = budget_coupling(waist_ratio);
  double nm = n * m;
  switch (scheme) {
    case LimitScheme::kTwinFock: {
      double x1 = tf_first_zero_scaled(nm);
      out.spontaneous = k * x1 * x1 / nm;
      out.fidelity = 1.0 - out.spontaneous;
      break;
    }
    case LimitScheme::kNoon: {
      double x = std::numbers::pi / 2.0;
      out.spontaneous = k * x * x / nm;
      out.fidelity = 1.0 - out.spontaneous;
      break;
    }
    case LimitScheme::kTwinFockOneLoss: {
      out.spontaneous = one_loss_limit_coefficient(waist_ratio) / std::cbrt(nm);
      out.fidelity = 1.0 - out.spontaneous;
      break;
    }
    case LimitScheme::kCoherentCavity: {
      double e = coherent_cavity_error(m, waist_ratio);
      out.spontaneous = e;
      out.fidelity = 1.0 - e;
      break;
    }
  }
  out.valid_regime = out.spontaneous <= 1.0;
  return out;
}

double photons_for_fidelity(LimitScheme scheme, double fidelity_target,
                            double m, double waist_ratio) {
  if (!(fidelity_target > 0.0 && fidelity_target < 1.0)) {
    throw std::invalid_argument("fidelity target must lie in (0, 1)");
  }
  if (!(m >= 1.0)) throw std::invalid_argument("M must be at least 1");
  double budget = 1.0 - fidelity_target;
  double k = budget_coupling(waist_ratio);
  switch (scheme) {
    case LimitScheme::kTwinFock: {
      double x1 = 1.2024;
      double nm = k * x1 * x1 / budget;
      for (int i = 0; i < 6; ++i) {
        x1 = tf_first_zero_scaled(std::max(nm, 1.0));
        nm = k * x1 * x1 / budget;
      }
      return nm / m;
    }
    case LimitScheme::kNoon: {
      double x = std::numbers::pi / 2.0;
      return k * x * x / budget / m;
    }
    case LimitScheme::kTwinFockOneLoss: {
      double r = one_loss_limit_coefficient(waist_ratio) / budget;
      return r * r * r / m;
    }
    case LimitScheme::kCoherentCavity:
      return cavity_passes_for_targets(budget, waist_ratio).passes;
  }
  return 0.0;
}

JointEnsemble apply_loss_tf(const JointState& j, double theta,
                            std::optional<int> arm) {
  if (!arm) return run_mz_with_single_loss(j, theta);
  JointEnsemble e;
  e.members.push_back({1.0, run_mz_with_loss(j, theta, *arm)});
  return e;
}

LightEnsemble apply_loss_noon(int n) {
  if (n < 1) throw std::invalid_argument("NOON loss needs N >= 1");
  LightEnsemble e;
  e.members.push_back({0.5, make_state(spec::Fock{n - 1, 0})});
  e.members.push_back({0.5, make_state(spec::Fock{0, n - 1})});
  return e;
}

}  // namespace qil
