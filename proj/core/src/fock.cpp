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

#include "qil/fock.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qil/numeric.hpp"
#include "qil/parallel.hpp"

namespace qil {

DualModeState::DualModeState(int cutoff) {
  if (cutoff < 0) throw std::invalid_argument("DualModeState: negative cutoff");
  sectors_.resize(cutoff + 1);
}

Complex DualModeState::amplitude(int n0, int n1) const {
  if (n0 < 0 || n1 < 0) return 0.0;
  int s = n0 + n1;
  if (!has_sector(s)) return 0.0;
  return sectors_[s][n0];
}

void DualModeState::set_amplitude(int n0, int n1, Complex value) {
  if (n0 < 0 || n1 < 0 || n0 + n1 > cutoff()) {
    throw std::out_of_range("set_amplitude: key outside cutoff");
  }
  sector_mut(n0 + n1)[n0] = value;
}

bool DualModeState::has_sector(int s) const {
  return s >= 0 && s <= cutoff() && !sectors_[s].empty();
}

std::span<const Complex> DualModeState::sector(int s) const {
  if (!has_sector(s)) return {};
  return sectors_[s];
}

std::span<Complex> DualModeState::sector_mut(int s) {
  if (s < 0 || s > cutoff()) throw std::out_of_range("sector outside cutoff");
  if (sectors_[s].empty()) sectors_[s].assign(s + 1, Complex{});
  return sectors_[s];
}

void DualModeState::drop_sector(int s) {
  if (s >= 0 && s <= cutoff()) sectors_[s].clear();
}

double DualModeState::sector_norm_squared(int s) const {
  double sum = 0.0;
  for (const Complex& a : sector(s)) sum += std::norm(a);
  return sum;
}

double DualModeState::norm_squared() const {
  double sum = 0.0;
  for (int s = 0; s <= cutoff(); ++s) sum += sector_norm_squared(s);
  return sum;
}

void DualModeState::normalize() {
  double n2 = norm_squared();
  if (n2 <= 0.0) throw std::domain_error("normalize: zero state");
  scale(1.0 / std::sqrt(n2));
}

void DualModeState::scale(Complex factor) {
  for (auto& sec : sectors_) {
    for (Complex& a : sec) a *= factor;
  }
}

double DualModeState::mean_photons(int mode) const {
  double sum = 0.0;
  for (int s = 0; s <= cutoff(); ++s) {
    auto sec = sector(s);
    for (std::size_t k = 0; k < sec.size(); ++k) {
      int n = mode == 0 ? static_cast<int>(k) : s - static_cast<int>(k);
      sum += n * std::norm(sec[k]);
    }
  }
  return sum;
}

void DualModeState::for_each(
    const std::function<void(int, int, Complex)>& fn) const {
  for (int s = 0; s <= cutoff(); ++s) {
    auto sec = sector(s);
    for (std::size_t k = 0; k < sec.size(); ++k) {
      fn(static_cast<int>(k), s - static_cast<int>(k), sec[k]);
    }
  }
}

int require_photon_count(double n) {
  if (!std::isfinite(n) || n < 0 || n != std::floor(n) || n > 1e8) {
    throw std::invalid_argument("photon number must be a non-negative integer");
  }
  return static_cast<int>(n);
}

namespace {

void check_tolerance(double tol) {
  if (!(tol > 0.0 && tol <= 1e-6)) {
    throw std::invalid_argument("tail tolerance must lie in (0, 1e-6]");
  }
}

void check_mode(int mode) {
  if (mode != 0 && mode != 1) throw std::invalid_argument("mode must be 0 or 1");
}

struct PoissonWindow {
  int lo = 0;
  int hi = 0;
  std::vector<double> pmf;  // pmf[n - lo]
  double dropped = 0.0;
};

PoissonWindow poisson_window(double mean, double tol) {
  PoissonWindow w;
  if (mean == 0.0) {
    w.pmf = {1.0};
    return w;
  }
  int top = static_cast<int>(std::ceil(mean + 40.0 * std::sqrt(mean) + 60.0));
  std::vector<double> p(top + 1);
  double log_mean = std::log(mean);
  for (int n = 0; n <= top; ++n) {
    p[n] = std::exp(-mean + n * log_mean - std::lgamma(n + 1.0));
  }
  double below = 0.0;
  int lo = 0;
  while (lo < top && below + p[lo] < 0.5 * tol) below += p[lo++];
  double above = 0.0;
  int hi = top;
  while (hi > lo && above + p[hi] < 0.5 * tol) above += p[hi--];
  w.lo = lo;
  w.hi = hi;
  w.pmf.assign(p.begin() + lo, p.begin() + hi + 1);
  w.dropped = below + above;
  return w;
}

DualModeState coherent_state(Complex alpha, int port, double tol) {
  if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag())) {
    throw std::invalid_argument("coherent amplitude must be finite");
  }
  check_mode(port);
  double mean = std::norm(alpha);
  PoissonWindow w = poisson_window(mean, tol);
  double phase = std::arg(alpha);
  DualModeState state(w.hi);
  for (int n = w.lo; n <= w.hi; ++n) {
    Complex amp = std::polar(std::sqrt(w.pmf[n - w.lo]), n * phase);
    if (port == 0) {
      state.set_amplitude(n, 0, amp);
    } else {
      state.set_amplitude(0, n, amp);
    }
  }
  state.normalize();
  state.set_tail_mass(w.dropped);
  return state;
}

}  // namespace

DualModeState make_state(const StateSpec& spec, double tail_tolerance) {
  check_tolerance(tail_tolerance);
  return std::visit(
      [&](const auto& s) -> DualModeState {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, spec::Fock>) {
          if (s.n0 < 0 || s.n1 < 0) {
            throw std::invalid_argument("photon numbers must be non-negative");
          }
          DualModeState state(s.n0 + s.n1);
          state.set_amplitude(s.n0, s.n1, 1.0);
          return state;
        } else if constexpr (std::is_same_v<T, spec::Coherent>) {
          return coherent_state(s.alpha, s.port, tail_tolerance);
        } else if constexpr (std::is_same_v<T, spec::TwinFock>) {
          if (s.n < 0) throw std::invalid_argument("N must be non-negative");
          DualModeState state(2 * s.n);
          state.set_amplitude(s.n, s.n, 1.0);
          return state;
        } else if constexpr (std::is_same_v<T, spec::Noon>) {
          if (s.n < 0) throw std::invalid_argument("N must be non-negative");
          if (!std::isfinite(s.phase)) {
            throw std::invalid_argument("NOON phase must be finite");
          }
          DualModeState state(s.n);
          if (s.n == 0) {
            state.set_amplitude(0, 0, 1.0);
            return state;
          }
          state.set_amplitude(s.n, 0, std::sqrt(0.5));
          state.set_amplitude(0, s.n, std::polar(std::sqrt(0.5), s.phase));
          return state;
        } else {
          DualModeState upper = coherent_state(s.alpha, 0, 0.5 * tail_tolerance);
          DualModeState lower = coherent_state(s.alpha, 1, 0.5 * tail_tolerance);
          DualModeState state(upper.cutoff());
          upper.for_each([&](int n0, int n1, Complex a) {
            state.set_amplitude(n0, n1, state.amplitude(n0, n1) + a);
          });
          lower.for_each([&](int n0, int n1, Complex a) {
            state.set_amplitude(n0, n1, state.amplitude(n0, n1) + a);
          });
          state.normalize();
          state.set_tail_mass(upper.tail_mass());
          return state;
        }
      },
      spec);
}

namespace {

// exp[-i (pi/4) H] on one sector, H(k+1,k) = sqrt((k+1)(s-k)).
// With D = diag(i^k), H = D (-i A) D^-1 for the real antisymmetric A with
// A(k+1,k) = g_k, so the sector map is D exp(-(pi/4) A) D^-1. The rotation is
// summed as a Chebyshev series in B = -A/s, whose spectrum lies in i[-1, 1]:
// exp(zB) = J0(z) + 2 sum_k J_k(z) Q_k(B), Q_{k+1} = 2B Q_k + Q_{k-1}.
void rotate_sector(std::span<const Complex> in, std::span<Complex> out) {
  const int s = static_cast<int>(in.size()) - 1;
  if (s == 0) {
    out[0] = in[0];
    return;
  }
  static constexpr Complex kI{0.0, 1.0};
  std::vector<double> g(s);
  for (int k = 0; k < s; ++k) {
    g[k] = std::sqrt(static_cast<double>(k + 1) * (s - k));
  }
  const double inv_s = 1.0 / s;
  // B v with B(k, k-1) = -g_{k-1}/s, B(k, k+1) = g_k/s.
  auto apply_b = [&](const std::vector<Complex>& v, std::vector<Complex>& r,
                     double factor) {
    const double f = factor * inv_s;
    for (int k = 0; k <= s; ++k) {
      Complex acc{};
      if (k > 0) acc -= g[k - 1] * v[k - 1];
      if (k < s) acc += g[k] * v[k + 1];
      r[k] = f * acc;
    }
  };

  std::vector<Complex> u_prev(s + 1);
  Complex phase = 1.0;
  for (int k = 0; k <= s; ++k) {
    u_prev[k] = in[k] * phase;  // D^-1
    phase *= -kI;
  }

  const double z = std::numbers::pi * s / 4.0;
  const int order = bessel_truncation_order(z);
  const std::vector<double> j = bessel_j_sequence(z, order);

  std::vector<Complex> acc(s + 1);
  std::vector<Complex> u_cur(s + 1);
  std::vector<Complex> u_next(s + 1);
  for (int k = 0; k <= s; ++k) acc[k] = j[0] * u_prev[k];
  apply_b(u_prev, u_cur, 1.0);
  for (int k = 0; k <= s; ++k) acc[k] += 2.0 * j[1] * u_cur[k];
  for (int n = 2; n <= order; ++n) {
    apply_b(u_cur, u_next, 2.0);
    const double c = 2.0 * j[n];
    for (int k = 0; k <= s; ++k) {
      u_next[k] += u_prev[k];
      acc[k] += c * u_next[k];
    }
    std::swap(u_prev, u_cur);
    std::swap(u_cur, u_next);
  }

  phase = 1.0;
  for (int k = 0; k <= s; ++k) {
    out[k] = acc[k] * phase;  // D
    phase *= kI;
  }
}

}  // namespace

DualModeState apply_beamsplitter(const DualModeState& state) {
  DualModeState out(state.cutoff());
  out.set_tail_mass(state.tail_mass());
  std::vector<int> active;
  for (int s = 0; s <= state.cutoff(); ++s) {
    if (state.has_sector(s)) {
      active.push_back(s);
      out.sector_mut(s);
    }
  }
  // Largest sectors first so the dynamic schedule balances.
  std::vector<int> order(active.rbegin(), active.rend());
  parallel_for(order.size(), [&](std::size_t i) {
    int s = order[i];
    rotate_sector(state.sector(s), out.sector_mut(s));
  });
  return out;
}

DualModeState apply_phases(const DualModeState& state, double theta0,
                           double theta1) {
  if (!std::isfinite(theta0) || !std::isfinite(theta1)) {
    throw std::invalid_argument("phase must be finite");
  }
  DualModeState out = state;
  for (int s = 0; s <= out.cutoff(); ++s) {
    if (!out.has_sector(s)) continue;
    auto sec = out.sector_mut(s);
    for (int k = 0; k <= s; ++k) {
      double angle = -(theta0 * k + theta1 * (s - k));
      sec[k] *= std::polar(1.0, angle);
    }
  }
  return out;
}

DualModeState apply_phase(const DualModeState& state, double theta, int mode) {
  check_mode(mode);
  return mode == 0 ? apply_phases(state, theta, 0.0)
                   : apply_phases(state, 0.0, theta);
}

Annihilated apply_annihilation(const DualModeState& state, int mode) {
  check_mode(mode);
  Annihilated result;
  result.weight = state.mean_photons(mode);
  if (result.weight <= 0.0) {
    result.vanished = true;
    return result;
  }
  DualModeState out(std::max(state.cutoff() - 1, 0));
  out.set_tail_mass(state.tail_mass());
  for (int s = 1; s <= state.cutoff(); ++s) {
    if (!state.has_sector(s)) continue;
    auto in = state.sector(s);
    auto dst = out.sector_mut(s - 1);
    for (int k = 0; k < s; ++k) {
      // target (k, s-1-k) comes from (k+1, s-1-k) or (k, s-k)
      if (mode == 0) {
        dst[k] = std::sqrt(k + 1.0) * in[k + 1];
      } else {
        dst[k] = std::sqrt(static_cast<double>(s - k)) * in[k];
      }
    }
  }
  double n2 = out.norm_squared();
  if (n2 <= 0.0) {
    result.vanished = true;
    return result;
  }
  out.scale(1.0 / std::sqrt(n2));
  result.state = std::move(out);
  return result;
}

DualModeState apply_nbs(const DualModeState& state) {
  DualModeState out(state.cutoff());
  out.set_tail_mass(state.tail_mass());
  const double r = std::sqrt(0.5);
  for (int s = 0; s <= state.cutoff(); ++s) {
    if (!state.has_sector(s)) continue;
    auto in = state.sector(s);
    for (int k = 1; k < s; ++k) {
      if (std::abs(in[k]) > 1e-10) {
        throw std::domain_error(
            "nonlinear beamsplitter: state has support off the NOON manifold");
      }
    }
    if (s == 0) {
      out.set_amplitude(0, 0, in[0]);
      continue;
    }
    Complex a = in[s];  // |s,0>
    Complex b = in[0];  // |0,s>
    out.set_amplitude(s, 0, r * (a + b));
    out.set_amplitude(0, s, r * (a - b));
  }
  return out;
}

Complex inner_product(const DualModeState& a, const DualModeState& b) {
  Complex sum{};
  int top = std::min(a.cutoff(), b.cutoff());
  for (int s = 0; s <= top; ++s) {
    auto x = a.sector(s);
    auto y = b.sector(s);
    if (x.empty() || y.empty()) continue;
    for (std::size_t k = 0; k < x.size(); ++k) sum += std::conj(x[k]) * y[k];
  }
  return sum;
}

}  // namespace qil
