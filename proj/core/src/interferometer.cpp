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

#include "qil/interferometer.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "qil/numeric.hpp"

namespace qil {

Readout readout_for(Scheme scheme) {
  switch (scheme) {
    case Scheme::kCoherent:
      return Readout::kCoherentCount;
    case Scheme::kTwinFock:
      return Readout::kTfNumberDifference;
    case Scheme::kNoon:
      return Readout::kNoonPresence;
  }
  throw std::invalid_argument("unknown scheme");
}

const char* scheme_name(Scheme scheme) {
  switch (scheme) {
    case Scheme::kCoherent:
      return "coherent";
    case Scheme::kTwinFock:
      return "tf";
    case Scheme::kNoon:
      return "noon";
  }
  return "?";
}

Scheme parse_scheme(const std::string& name) {
  if (name == "coherent") return Scheme::kCoherent;
  if (name == "tf" || name == "twin_fock") return Scheme::kTwinFock;
  if (name == "noon") return Scheme::kNoon;
  throw std::invalid_argument("unknown scheme '" + name + "'");
}

DualModeState scheme_input(Scheme scheme, int n) {
  if (n < 0) throw std::invalid_argument("photon number must be non-negative");
  switch (scheme) {
    case Scheme::kCoherent:
      return make_state(spec::Coherent{std::sqrt(static_cast<double>(n)), 0});
    case Scheme::kTwinFock:
      return make_state(spec::TwinFock{n});
    case Scheme::kNoon:
      return make_state(spec::Noon{n, 0.0});
  }
  throw std::invalid_argument("unknown scheme");
}

namespace {

void check_pair(const JointState& j, QubitPair pair) {
  if (pair.x < 0 || pair.y < 0 || pair.x >= j.n_qubits() ||
      pair.y >= j.n_qubits() || pair.x == pair.y) {
    throw std::out_of_range("invalid qubit pair");
  }
}

JointState beamsplit(const JointState& j) {
  return j.transform_lights([](std::size_t) { return 0; },
                            [](const DualModeState& l, int) {
                              return apply_beamsplitter(l);
                            });
}

// Both qubit interactions at once. Branches are keyed by how many of the two
// qubits read 0, so the two balanced branches keep one shared light.
JointState pair_interaction(const JointState& j, double theta, QubitPair pair) {
  return j.transform_lights(
      [&](std::size_t b) {
        return (j.bit(b, pair.x) == 0) + (j.bit(b, pair.y) == 0);
      },
      [&](const DualModeState& l, int zeros) {
        return apply_phases(l, theta * zeros, theta * (2 - zeros));
      });
}

}  // namespace

JointState run_mz(const JointState& j, double theta, QubitPair pair) {
  check_pair(j, pair);
  return beamsplit(pair_interaction(beamsplit(j), theta, pair));
}

JointState run_noon(const JointState& j, double theta, QubitPair pair) {
  check_pair(j, pair);
  return pair_interaction(j, theta, pair)
      .transform_lights([](std::size_t) { return 0; },
                        [](const DualModeState& l, int) { return apply_nbs(l); });
}

JointState run_pipeline(Scheme scheme, const JointState& j, double theta,
                        QubitPair pair) {
  return scheme == Scheme::kNoon ? run_noon(j, theta, pair)
                                 : run_mz(j, theta, pair);
}

JointState run_mz_with_loss(const JointState& j, double theta, int arm,
                            QubitPair pair, double* weight) {
  check_pair(j, pair);
  if (arm != 0 && arm != 1) throw std::invalid_argument("arm must be 0 or 1");
  JointState first = apply_qubit_interaction(beamsplit(j), pair.x, theta);

  std::map<const DualModeState*, Annihilated> lost;
  std::vector<JointState::Branch> branches(first.dimension());
  double total = 0.0;
  for (std::size_t b = 0; b < first.dimension(); ++b) {
    const auto& in = first.branch(b);
    if (in.coefficient == Complex{}) continue;
    auto it = lost.find(in.light.get());
    if (it == lost.end()) {
      it = lost.emplace(in.light.get(), apply_annihilation(*in.light, arm)).first;
    }
    if (it->second.vanished) continue;
    branches[b].coefficient = in.coefficient * std::sqrt(it->second.weight);
    total += std::norm(in.coefficient) * it->second.weight;
  }
  if (total <= 0.0) throw std::domain_error("no photon available to lose");
  // shared_ptr per distinct annihilated light
  std::map<const DualModeState*, std::shared_ptr<const DualModeState>> shared;
  for (std::size_t b = 0; b < first.dimension(); ++b) {
    if (branches[b].coefficient == Complex{}) continue;
    const DualModeState* key = first.branch(b).light.get();
    auto& slot = shared[key];
    if (!slot) slot = std::make_shared<const DualModeState>(lost.at(key).state);
    branches[b].light = slot;
    branches[b].coefficient /= std::sqrt(total);
  }
  if (weight) *weight = total;
  JointState after(first.n_qubits(), std::move(branches));
  return beamsplit(apply_qubit_interaction(after, pair.y, theta));
}

JointEnsemble run_mz_with_single_loss(const JointState& j, double theta,
                                      QubitPair pair) {
  JointEnsemble e;
  double w0 = 0.0;
  double w1 = 0.0;
  JointState s0 = run_mz_with_loss(j, theta, 0, pair, &w0);
  JointState s1 = run_mz_with_loss(j, theta, 1, pair, &w1);
  e.members.push_back({w0 / (w0 + w1), std::move(s0)});
  e.members.push_back({w1 / (w0 + w1), std::move(s1)});
  return e;
}

int readout_value(Readout readout, int n0, int n1) {
  switch (readout) {
    case Readout::kCoherentCount:
      return n0;
    case Readout::kTfNumberDifference:
      return n0 - n1;
    case Readout::kNoonPresence:
      return n1 > 0 ? 1 : 0;
  }
  return 0;
}

bool is_null(Readout, int value) { return value == 0; }

namespace {

using Accumulator = std::map<int, std::vector<Complex>>;

void accumulate(const JointState& j, Readout readout, double weight,
                Accumulator& acc) {
  const std::size_t d = j.dimension();
  int top = 0;
  for (const auto& b : j.branches()) {
    if (b.light) top = std::max(top, b.light->cutoff());
  }
  std::vector<std::span<const Complex>> secs(d);
  std::vector<Complex> phi(d);
  for (int s = 0; s <= top; ++s) {
    bool any = false;
    for (std::size_t b = 0; b < d; ++b) {
      const auto& br = j.branch(b);
      secs[b] = br.coefficient == Complex{} ? std::span<const Complex>{}
                                            : br.light->sector(s);
      any = any || !secs[b].empty();
    }
    if (!any) continue;
    for (int k = 0; k <= s; ++k) {
      bool nonzero = false;
      for (std::size_t b = 0; b < d; ++b) {
        phi[b] = secs[b].empty() ? Complex{} : j.branch(b).coefficient * secs[b][k];
        nonzero = nonzero || phi[b] != Complex{};
      }
      if (!nonzero) continue;
      auto& rho = acc[readout_value(readout, k, s - k)];
      if (rho.empty()) rho.assign(d * d, Complex{});
      for (std::size_t r = 0; r < d; ++r) {
        if (phi[r] == Complex{}) continue;
        Complex pr = weight * phi[r];
        for (std::size_t c = 0; c < d; ++c) rho[r * d + c] += pr * std::conj(phi[c]);
      }
    }
  }
}

std::vector<OutcomeRecord> records_from(const Accumulator& acc, int n_qubits,
                                        Readout readout) {
  std::vector<OutcomeRecord> out;
  for (const auto& [value, data] : acc) {
    DensityMatrix rho{n_qubits, data};
    double p = rho.trace().real();
    if (p < 1e-15) continue;
    for (Complex& c : rho.data) c /= p;
    OutcomeRecord rec;
    rec.readout = readout;
    rec.value = value;
    rec.probability = p;
    rec.posterior = ensemble_from_density(rho);
    rec.subspace = is_null(readout, value) ? Subspace::kBalanced
                                           : Subspace::kImbalanced;
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace

std::vector<OutcomeRecord> outcome_distribution(const JointState& j,
                                                Readout readout) {
  Accumulator acc;
  accumulate(j, readout, 1.0, acc);
  return records_from(acc, j.n_qubits(), readout);
}

std::vector<OutcomeRecord> outcome_distribution(const JointEnsemble& e,
                                                Readout readout) {
  if (e.members.empty()) throw std::invalid_argument("empty ensemble");
  Accumulator acc;
  for (const auto& m : e.members) accumulate(m.state, readout, m.weight, acc);
  return records_from(acc, e.members.front().state.n_qubits(), readout);
}

namespace {

OutcomeRecord pick(std::vector<OutcomeRecord> all, Readout readout, int value) {
  for (auto& r : all) {
    if (r.value == value) return std::move(r);
  }
  (void)readout;
  throw std::domain_error("outcome " + std::to_string(value) +
                          " has zero probability");
}

}  // namespace

OutcomeRecord collapse(const JointState& j, Readout readout, int value) {
  return pick(outcome_distribution(j, readout), readout, value);
}

OutcomeRecord collapse(const JointEnsemble& e, Readout readout, int value) {
  return pick(outcome_distribution(e, readout), readout, value);
}

namespace {

void check_rate_args(int n, double theta) {
  if (n < 1) throw std::invalid_argument("N must be at least 1");
  if (!(theta >= 0.0) || !std::isfinite(theta)) {
    throw std::invalid_argument("theta must be finite and non-negative");
  }
}

// Upper-port vacuum probability for the imbalanced coherent branch.
double coherent_false_null(const DualModeState& after_first_bs, double theta) {
  DualModeState out =
      apply_beamsplitter(apply_phases(after_first_bs, 2.0 * theta, 0.0));
  double p = 0.0;
  for (int s = 0; s <= out.cutoff(); ++s) {
    auto sec = out.sector(s);
    if (!sec.empty()) p += std::norm(sec[0]);
  }
  return p;
}

}  // namespace

double epsilon(int n, double theta) {
  check_rate_args(n, theta);
  return std::exp(-n * theta * theta);
}

std::vector<double> epsilon_simulated(int n, const std::vector<double>& thetas) {
  for (double t : thetas) check_rate_args(n, t);
  DualModeState first = apply_beamsplitter(scheme_input(Scheme::kCoherent, n));
  std::vector<double> out;
  out.reserve(thetas.size());
  for (double t : thetas) out.push_back(coherent_false_null(first, t));
  return out;
}

double epsilon_simulated(int n, double theta) {
  return epsilon_simulated(n, std::vector<double>{theta}).front();
}

double kappa(int n, double theta) {
  check_rate_args(n, theta);
  double c = std::cos(n * theta);
  return c * c;
}

double kappa_simulated(int n, double theta) {
  check_rate_args(n, theta);
  JointState j = make_joint(scheme_input(Scheme::kNoon, n),
                            std::vector<QubitAmplitudes>{{1.0, 0.0}, {1.0, 0.0}});
  for (const auto& r : outcome_distribution(run_noon(j, theta),
                                            Readout::kNoonPresence)) {
    if (r.value == 0) return r.probability;
  }
  return 0.0;
}

namespace {

DualModeState tf_after_first_bs(int n) {
  return apply_beamsplitter(make_state(spec::TwinFock{n}));
}

DualModeState tf_output_from(const DualModeState& first, double theta) {
  return apply_beamsplitter(apply_phases(first, 2.0 * theta, 0.0));
}

// Removes the per-photon factor (-i e^{-i theta}) from all 2N photons and the
// (-1)^m orientation.
double real_xi(const DualModeState& out, int n, int m, double theta) {
  Complex amp = out.amplitude(n + m, n - m);
  Complex p2n = std::polar(1.0, -2.0 * n * theta) * (n % 2 == 0 ? 1.0 : -1.0);
  double sign = (m % 2 == 0) ? 1.0 : -1.0;
  return sign * (amp * std::conj(p2n)).real();
}

}  // namespace

DualModeState tf_imbalanced_output(int n, double theta) {
  check_rate_args(n, theta);
  return tf_output_from(tf_after_first_bs(n), theta);
}

Complex xi_m(int n, int m, double theta) {
  if (std::abs(m) > n) throw std::invalid_argument("|m| must not exceed N");
  return tf_imbalanced_output(n, theta).amplitude(n + m, n - m);
}

std::vector<Complex> xi_all(int n, double theta) {
  DualModeState out = tf_imbalanced_output(n, theta);
  std::vector<Complex> xi(2 * n + 1);
  for (int m = -n; m <= n; ++m) xi[m + n] = out.amplitude(n + m, n - m);
  return xi;
}

double xi_m_real(int n, int m, double theta) {
  if (std::abs(m) > n) throw std::invalid_argument("|m| must not exceed N");
  return real_xi(tf_imbalanced_output(n, theta), n, m, theta);
}

double xi_m_closed_form(int n, int m, double theta) {
  if (std::abs(m) > n) throw std::invalid_argument("|m| must not exceed N");
  auto log_choose = [](int a, int b) {
    return std::lgamma(a + 1.0) - std::lgamma(b + 1.0) - std::lgamma(a - b + 1.0);
  };
  double s = std::sin(theta);
  double c = std::cos(theta);
  double prefactor = 0.5 * (std::lgamma(n + m + 1.0) + std::lgamma(n - m + 1.0)) -
                     std::lgamma(n + 1.0);
  double sum = 0.0;
  for (int l = 0; l <= n; ++l) {
    int top = m + l;
    if (top < 0 || top > n) continue;
    int ps = m + 2 * l;
    int pc = 2 * n - m - 2 * l;
    if (ps < 0 || pc < 0) continue;
    double log_mag = prefactor + log_choose(n, top) + log_choose(n, l);
    double term = std::exp(log_mag) * std::pow(s, ps) * std::pow(c, pc);
    sum += ((m + l) % 2 == 0 ? 1.0 : -1.0) * term;
  }
  return sum;
}

double xi_0_legendre(int n, double theta) {
  return legendre(n, std::cos(2.0 * theta));
}

double eta(int n, double theta) {
  check_rate_args(n, theta);
  return std::norm(tf_imbalanced_output(n, theta).amplitude(n, n));
}

double eta_loss(int n, double theta) {
  check_rate_args(n, theta);
  DualModeState out = tf_imbalanced_output(n, theta);
  double x0 = real_xi(out, n, 0, theta);
  double x1 = real_xi(out, n, 1, theta);
  return x0 * x0 + (1.0 + 1.0 / n) * x1 * x1;
}

double eta_loss_simulated(int n, double theta) {
  check_rate_args(n, theta);
  JointState j = make_joint(make_state(spec::TwinFock{n}),
                            std::vector<QubitAmplitudes>{{1.0, 0.0}, {1.0, 0.0}});
  double p = 0.0;
  for (const auto& r : outcome_distribution(run_mz_with_single_loss(j, theta),
                                            Readout::kTfNumberDifference)) {
    if (std::abs(r.value) == 1) p += r.probability;
  }
  return p;
}

double find_first_zero(int n, ZeroScheme scheme) {
  if (n < 1) throw std::invalid_argument("N must be at least 1");
  if (scheme == ZeroScheme::kNoon) {
    double theta = std::numbers::pi / (2.0 * n);
    if (kappa_simulated(n, theta) > 1e-20) {
      throw std::runtime_error("NOON zero failed numerical verification");
    }
    return theta;
  }
  DualModeState first = tf_after_first_bs(n);
  auto f = [&](double x) {
    double theta = x / n;
    return real_xi(tf_output_from(first, theta), n, 0, theta);
  };
  auto bracket = find_sign_change(f, 0.05, n * std::numbers::pi, 0.05);
  if (!bracket) throw std::domain_error("no sign change of xi_0 in (0, pi]");
  return bisect(f, *bracket, 1e-8) / n;
}

double tf_first_zero_scaled(double n) {
  if (!(n >= 1.0)) throw std::invalid_argument("N must be at least 1");
  constexpr double kJ01 = 2.404825557695773;
  int ni = static_cast<int>(std::llround(n));
  if (ni <= 4000) return ni * find_first_zero(ni, ZeroScheme::kTwinFock);
  double nu = n + 0.5;
  double psi = kJ01 / nu;
  double phi = psi + (psi / std::tan(psi) - 1.0) / (8.0 * psi * nu * nu);
  return n * phi / 2.0;
}

Fidelities fidelities(double lambda, double err) {
  if (!(lambda >= 0.0 && lambda <= 1.0) || !(err >= 0.0 && err <= 1.0)) {
    throw std::invalid_argument("lambda and err must lie in [0, 1]");
  }
  Fidelities f;
  double den = lambda + (1.0 - lambda) * err;
  f.f_nul = den > 0.0 ? lambda / den : 0.0;
  f.f_avg = 1.0 - (1.0 - lambda) * err;
  return f;
}

double kappa_prime(int n, double theta) {
  check_rate_args(n, theta);
  return 0.5 * (1.0 - std::exp(-theta * theta * n / 2.0));
}

double kappa_prime_simulated(int n, double theta) {
  check_rate_args(n, theta);
  DualModeState in =
      make_state(spec::CoherentNoon{std::sqrt(static_cast<double>(n))});
  DualModeState out = apply_nbs(apply_phases(in, 2.0 * theta, 0.0));
  double p = 0.0;
  for (int s = 0; s <= out.cutoff(); ++s) {
    auto sec = out.sector(s);
    if (!sec.empty()) p += std::norm(sec[s]);  // |s,0>: lower port empty
  }
  return p;
}

ErrorRates error_rates(int n, double theta) {
  check_rate_args(n, theta);
  ErrorRates r;
  r.epsilon = epsilon(n, theta);
  DualModeState out = tf_imbalanced_output(n, theta);
  double x0 = real_xi(out, n, 0, theta);
  double x1 = real_xi(out, n, 1, theta);
  r.eta = x0 * x0;
  r.eta_loss = x0 * x0 + (1.0 + 1.0 / n) * x1 * x1;
  r.kappa = kappa(n, theta);
  return r;
}

OverlapReport lower_output_overlap(int n, double theta) {
  check_rate_args(n, theta);
  double alpha = std::sqrt(static_cast<double>(n));
  OverlapReport r;
  double d = 1.0 - std::cos(theta);
  r.exact = std::exp(-n * d * d);
  DualModeState a = make_state(spec::Coherent{alpha * std::cos(theta), 0});
  DualModeState b = make_state(spec::Coherent{alpha, 0});
  r.simulated = std::norm(inner_product(a, b));
  r.quartic_form = 1.0 - std::pow(theta, 4) * n / 8.0;
  return r;
}

}  // namespace qil
