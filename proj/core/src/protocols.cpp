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

#include "qil/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

#include "qil/numeric.hpp"

namespace qil {

double default_theta(Scheme scheme, int n) {
  if (n < 1) throw std::invalid_argument("N must be at least 1");
  switch (scheme) {
    case Scheme::kNoon:
      return std::numbers::pi / (2.0 * n);
    case Scheme::kTwinFock:
      return find_first_zero(n, ZeroScheme::kTwinFock);
    case Scheme::kCoherent:
      return std::sqrt(std::log(100.0) / n);
  }
  throw std::invalid_argument("unknown scheme");
}

double false_null_rate(Scheme scheme, int n, double theta) {
  switch (scheme) {
    case Scheme::kNoon:
      return kappa_simulated(n, theta);
    case Scheme::kTwinFock:
      return eta(n, theta);
    case Scheme::kCoherent:
      return epsilon_simulated(n, theta);
  }
  throw std::invalid_argument("unknown scheme");
}

double theta_for_error(Scheme scheme, int n, double err) {
  if (n < 1) throw std::invalid_argument("N must be at least 1");
  if (!(err > 0.0 && err <= 1.0)) {
    throw std::invalid_argument("injected error must lie in (0, 1]");
  }
  switch (scheme) {
    case Scheme::kNoon:
      return std::acos(std::sqrt(err)) / n;
    case Scheme::kCoherent: {
      double s = std::sqrt(-std::log(err) / n);
      if (s > 1.0) throw std::invalid_argument("error unreachable for this N");
      return std::asin(s);
    }
    case Scheme::kTwinFock: {
      if (err == 1.0) return 0.0;
      double zero = find_first_zero(n, ZeroScheme::kTwinFock);
      return bisect([&](double t) { return eta(n, t) - err; }, {0.0, zero},
                    1e-13 / n);
    }
  }
  throw std::invalid_argument("unknown scheme");
}

double resolve_theta(const ProtocolConfig& config) {
  if (config.injected_error) {
    return theta_for_error(config.scheme, config.photons, *config.injected_error);
  }
  if (config.theta) {
    if (!(*config.theta >= 0.0) || !std::isfinite(*config.theta)) {
      throw std::invalid_argument("theta must be finite and non-negative");
    }
    return *config.theta;
  }
  return default_theta(config.scheme, config.photons);
}

int imbalanced_sign(Scheme scheme, int value) {
  switch (scheme) {
    case Scheme::kCoherent:
      return value % 2 == 0 ? 1 : -1;
    case Scheme::kTwinFock: {
      int m = value / 2;
      return m % 2 == 0 ? 1 : -1;
    }
    case Scheme::kNoon:
      return -1;
  }
  return 1;
}

namespace {

void check_qubit(int n_qubits, int qubit) {
  if (qubit < 0 || qubit >= n_qubits) throw std::out_of_range("qubit index out of range");
}

template <class Fn>
QubitEnsemble each_member(const QubitEnsemble& e, Fn fn) {
  QubitEnsemble out;
  out.members.reserve(e.members.size());
  for (const auto& m : e.members) out.members.push_back({m.weight, fn(m.state)});
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

QubitState pi_pulse(const QubitState& s, int qubit) {
  check_qubit(s.n_qubits(), qubit);
  QubitState out = s;
  std::size_t mask = std::size_t{1} << (s.n_qubits() - 1 - qubit);
  for (std::size_t b = 0; b < s.dimension(); ++b) out[b ^ mask] = s[b];
  return out;
}

QubitState half_pi_pulse(const QubitState& s, int qubit) {
  check_qubit(s.n_qubits(), qubit);
  static const Complex kMinusI{0.0, -1.0};
  const double r = std::sqrt(0.5);
  QubitState out = s;
  std::size_t mask = std::size_t{1} << (s.n_qubits() - 1 - qubit);
  for (std::size_t b = 0; b < s.dimension(); ++b) {
    if (b & mask) continue;
    Complex a0 = s[b];
    Complex a1 = s[b | mask];
    out[b] = r * (a0 + kMinusI * a1);
    out[b | mask] = r * (kMinusI * a0 + a1);
  }
  return out;
}

QubitState phase_imprint(const QubitState& s, int qubit, int basis_bit,
                         double phase) {
  check_qubit(s.n_qubits(), qubit);
  if (basis_bit != 0 && basis_bit != 1) throw std::invalid_argument("basis bit must be 0 or 1");
  QubitState out = s;
  Complex f = std::polar(1.0, phase);
  for (std::size_t b = 0; b < s.dimension(); ++b) {
    if (s.bit(b, qubit) == basis_bit) out[b] *= f;
  }
  return out;
}

QubitEnsemble pi_pulse(const QubitEnsemble& e, int qubit) {
  return each_member(e, [&](const QubitState& s) { return pi_pulse(s, qubit); });
}

QubitEnsemble half_pi_pulse(const QubitEnsemble& e, int qubit) {
  return each_member(e, [&](const QubitState& s) { return half_pi_pulse(s, qubit); });
}

QubitEnsemble phase_imprint(const QubitEnsemble& e, int qubit, int basis_bit,
                            double phase) {
  return each_member(e, [&](const QubitState& s) {
    return phase_imprint(s, qubit, basis_bit, phase);
  });
}

std::vector<QubitMeasurement> measure_qubit(const QubitEnsemble& e, int qubit) {
  if (e.members.empty()) throw std::invalid_argument("empty ensemble");
  std::vector<QubitMeasurement> out;
  for (int bit = 0; bit <= 1; ++bit) {
    QubitMeasurement m;
    m.bit = bit;
    for (const auto& member : e.members) {
      check_qubit(member.state.n_qubits(), qubit);
      QubitState s = member.state;
      for (std::size_t b = 0; b < s.dimension(); ++b) {
        if (s.bit(b, qubit) != bit) s[b] = 0.0;
      }
      double p = s.norm_squared();
      if (p * member.weight <= 0.0) continue;
      m.probability += member.weight * p;
      s.normalize();
      m.posterior.members.push_back({member.weight * p, std::move(s)});
    }
    if (m.probability <= 1e-15) continue;
    for (auto& member : m.posterior.members) member.weight /= m.probability;
    out.push_back(std::move(m));
  }
  return out;
}

double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

namespace {

template <class T>
std::size_t sample_index(const std::vector<T>& outcomes, std::mt19937_64& rng) {
  double u = uniform_unit(rng);
  double total = 0.0;
  for (const auto& o : outcomes) total += o.probability;
  double acc = 0.0;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    acc += outcomes[i].probability / total;
    if (u < acc) return i;
  }
  return outcomes.size() - 1;
}

}  // namespace

QubitMeasurement measure_qubit(const QubitEnsemble& e, int qubit,
                               std::mt19937_64& rng) {
  auto all = measure_qubit(e, qubit);
  return std::move(all[sample_index(all, rng)]);
}

DensityMatrix reduce_to(const QubitEnsemble& e, const std::vector<int>& keep) {
  if (e.members.empty()) throw std::invalid_argument("empty ensemble");
  const int n = e.members.front().state.n_qubits();
  for (int q : keep) check_qubit(n, q);
  DensityMatrix rho;
  rho.n_qubits = static_cast<int>(keep.size());
  const std::size_t d = rho.dimension();
  rho.data.assign(d * d, Complex{});
  std::vector<int> rest;
  for (int q = 0; q < n; ++q) {
    if (std::find(keep.begin(), keep.end(), q) == keep.end()) rest.push_back(q);
  }
  auto compose = [&](std::size_t kept, std::size_t other) {
    std::size_t b = 0;
    for (std::size_t i = 0; i < keep.size(); ++i) {
      if ((kept >> (keep.size() - 1 - i)) & 1u) b |= std::size_t{1} << (n - 1 - keep[i]);
    }
    for (std::size_t i = 0; i < rest.size(); ++i) {
      if ((other >> (rest.size() - 1 - i)) & 1u) b |= std::size_t{1} << (n - 1 - rest[i]);
    }
    return b;
  };
  const std::size_t d_rest = std::size_t{1} << rest.size();
  for (const auto& m : e.members) {
    for (std::size_t o = 0; o < d_rest; ++o) {
      for (std::size_t r = 0; r < d; ++r) {
        Complex ar = m.state[compose(r, o)];
        if (ar == Complex{}) continue;
        for (std::size_t c = 0; c < d; ++c) {
          rho(r, c) += m.weight * ar * std::conj(m.state[compose(c, o)]);
        }
      }
    }
  }
  return rho;
}

double fidelity_with(const DensityMatrix& rho, const QubitState& target) {
  if (rho.dimension() != target.dimension()) {
    throw std::invalid_argument("fidelity: dimension mismatch");
  }
  Complex sum{};
  for (std::size_t r = 0; r < rho.dimension(); ++r) {
    for (std::size_t c = 0; c < rho.dimension(); ++c) {
      sum += std::conj(target[r]) * rho(r, c) * target[c];
    }
  }
  return sum.real() / target.norm_squared();
}

std::vector<OutcomeRecord> entangle_pair(const QubitEnsemble& reg,
                                         QubitPair pair,
                                         const ProtocolConfig& config) {
  if (reg.members.empty()) throw std::invalid_argument("empty register");
  const int n = reg.members.front().state.n_qubits();
  if (pair.x < 0 || pair.y < 0 || pair.x >= n || pair.y >= n || pair.x == pair.y) {
    throw std::out_of_range("invalid qubit pair");
  }
  const double theta = resolve_theta(config);
  DualModeState light = scheme_input(config.scheme, config.photons);
  JointEnsemble joint;
  for (const auto& m : reg.members) {
    joint.members.push_back(
        {m.weight, run_pipeline(config.scheme, make_joint(light, m.state), theta, pair)});
  }
  return outcome_distribution(joint, readout_for(config.scheme));
}

namespace {

struct Context {
  double probability = 1.0;
  QubitEnsemble reg;
  std::vector<std::string> transcript;
};

class Runner {
 public:
  explicit Runner(const ProtocolConfig& config) : config_(config) {
    theta_ = resolve_theta(config);
    config_.theta = theta_;
    config_.injected_error.reset();
    if (config.seed) rng_.seed(*config.seed);
  }

  double theta() const { return theta_; }
  bool sampled() const { return config_.seed.has_value(); }

  // Entangle the pair and make the result c00|..0..0..> + c11|..1..1..>:
  // flip `flip_qubit` on a null, fix the sign on |1> of `sign_qubit` otherwise.
  std::vector<Context> entangle(std::vector<Context> in, QubitPair pair,
                                int flip_qubit, int sign_qubit) {
    std::vector<Context> out;
    for (auto& ctx : in) {
      auto outcomes = entangle_pair(ctx.reg, pair, config_);
      auto take = [&](OutcomeRecord& o) {
        Context next;
        next.probability = ctx.probability * o.probability;
        next.transcript = ctx.transcript;
        next.transcript.push_back("entangle(" + std::to_string(pair.x) + "," +
                                  std::to_string(pair.y) + ") value=" +
                                  std::to_string(o.value) + " p=" + fmt(o.probability));
        QubitEnsemble reg = std::move(o.posterior);
        if (o.subspace == Subspace::kBalanced) {
          reg = pi_pulse(reg, flip_qubit);
          next.transcript.push_back("pi_pulse(" + std::to_string(flip_qubit) + ")");
        } else if (imbalanced_sign(config_.scheme, o.value) < 0) {
          reg = phase_imprint(reg, sign_qubit, 1, std::numbers::pi);
          next.transcript.push_back("phase(" + std::to_string(sign_qubit) + ",|1>,pi)");
        }
        next.reg = std::move(reg);
        out.push_back(std::move(next));
      };
      if (sampled()) {
        take(outcomes[sample_index(outcomes, rng_)]);
      } else {
        for (auto& o : outcomes) take(o);
      }
    }
    return out;
  }

  // pi/2 pulse on `source`, measure it, then the pi/2 phase on `target`.
  std::vector<Context> disentangle(std::vector<Context> in, int source,
                                   int target) {
    std::vector<Context> out;
    for (auto& ctx : in) {
      QubitEnsemble reg = half_pi_pulse(ctx.reg, source);
      auto outcomes = measure_qubit(reg, source);
      auto take = [&](QubitMeasurement& m) {
        Context next;
        next.probability = ctx.probability * m.probability;
        next.transcript = ctx.transcript;
        next.transcript.push_back("half_pi_pulse(" + std::to_string(source) + ")");
        next.transcript.push_back("measure(" + std::to_string(source) + ") bit=" +
                                  std::to_string(m.bit) + " p=" + fmt(m.probability));
        int basis = m.bit == 0 ? 1 : 0;
        next.reg = phase_imprint(m.posterior, target, basis, std::numbers::pi / 2.0);
        next.transcript.push_back("phase(" + std::to_string(target) + ",|" +
                                  std::to_string(basis) + ">,pi/2)");
        out.push_back(std::move(next));
      };
      if (sampled()) {
        take(outcomes[sample_index(outcomes, rng_)]);
      } else {
        for (auto& m : outcomes) take(m);
      }
    }
    return out;
  }

 private:
  ProtocolConfig config_;
  double theta_ = 0.0;
  std::mt19937_64 rng_;
};

ProtocolResult finish(std::vector<Context> contexts, const std::vector<int>& keep,
                      const QubitState& ideal, double theta) {
  ProtocolResult result;
  result.theta = theta;
  double total = 0.0;
  for (auto& ctx : contexts) {
    ProtocolBranch b;
    b.probability = ctx.probability;
    b.transcript = std::move(ctx.transcript);
    DensityMatrix rho = reduce_to(ctx.reg, keep);
    b.fidelity = fidelity_with(rho, ideal);
    b.final_state = ensemble_from_density(rho);
    total += b.probability;
    result.average_fidelity += b.probability * b.fidelity;
    result.minimum_fidelity = std::min(result.minimum_fidelity, b.fidelity);
    result.branches.push_back(std::move(b));
  }
  if (total > 0.0) result.average_fidelity /= total;
  return result;
}

QubitAmplitudes plus_state() { return {std::sqrt(0.5), std::sqrt(0.5)}; }

}  // namespace

ProtocolResult teleport(const QubitAmplitudes& source,
                        const ProtocolConfig& config, bool sign_fix_on_target) {
  check_normalized(source);
  Runner run(config);
  Context start;
  start.reg = pure_ensemble(QubitState::product({source, plus_state()}));
  auto ctx = run.entangle({start}, {0, 1}, 1, sign_fix_on_target ? 1 : 0);
  ctx = run.disentangle(std::move(ctx), 0, 1);
  QubitState ideal(1, {source.zero, source.one});
  return finish(std::move(ctx), {1}, ideal, run.theta());
}

ProtocolResult ghz(int n_qubits, const ProtocolConfig& config) {
  if (n_qubits < 2 || n_qubits > 10) throw std::invalid_argument("GHZ needs 2 to 10 qubits");
  Runner run(config);
  Context start;
  start.reg = pure_ensemble(
      QubitState::product(std::vector<QubitAmplitudes>(n_qubits, plus_state())));
  std::vector<Context> ctx{start};
  for (int q = 0; q + 1 < n_qubits; ++q) ctx = run.entangle(std::move(ctx), {q, q + 1}, q + 1, q + 1);
  QubitState ideal(n_qubits);
  ideal[0] = std::sqrt(0.5);
  ideal[ideal.dimension() - 1] = std::sqrt(0.5);
  std::vector<int> keep(n_qubits);
  for (int q = 0; q < n_qubits; ++q) keep[q] = q;
  return finish(std::move(ctx), keep, ideal, run.theta());
}

ProtocolResult swap_entanglement(Complex c00, Complex c11,
                                 const ProtocolConfig& config) {
  double norm = std::sqrt(std::norm(c00) + std::norm(c11));
  if (norm == 0.0) throw std::invalid_argument("c00 and c11 cannot both vanish");
  c00 /= norm;
  c11 /= norm;
  Runner run(config);
  QubitState xy(2, {c00, 0.0, 0.0, c11});
  QubitState z = QubitState::product({plus_state()});
  QubitState reg(3);
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t b = 0; b < 2; ++b) reg[a * 2 + b] = xy[a] * z[b];
  }
  Context start;
  start.reg = pure_ensemble(reg);
  auto ctx = run.entangle({start}, {1, 2}, 2, 1);
  ctx = run.disentangle(std::move(ctx), 1, 2);
  QubitState ideal(2, {c00, 0.0, 0.0, c11});
  return finish(std::move(ctx), {0, 2}, ideal, run.theta());
}

}  // namespace qil
