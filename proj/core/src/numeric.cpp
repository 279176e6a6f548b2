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

#include "qil/numeric.hpp"

#include <cmath>
#include <stdexcept>

namespace qil {

int bessel_truncation_order(double z) {
  if (z < 0) throw std::invalid_argument("bessel order: negative argument");
  // Past k ~ z the Bessel functions decay on the Airy scale z^(1/3).
  return static_cast<int>(std::ceil(z + 12.0 * std::cbrt(z) + 25.0));
}

std::vector<double> bessel_j_sequence(double z, int order) {
  if (order < 0) throw std::invalid_argument("bessel: negative order");
  std::vector<double> j(order + 1, 0.0);
  if (z == 0.0) {
    j[0] = 1.0;
    return j;
  }
  int start = std::max(order, bessel_truncation_order(z)) + 30;
  if (start % 2 != 0) ++start;

  double next = 0.0;   // J_{k+1}
  double cur = 1e-30;  // J_k, arbitrary scale
  double norm = 0.0;
  for (int k = start; k >= 1; --k) {
    double prev = 2.0 * k / z * cur - next;  // J_{k-1}
    next = cur;
    cur = prev;
    int idx = k - 1;
    if (idx <= order) j[idx] = cur;
    if (idx > 0 && idx % 2 == 0) norm += 2.0 * cur;
    if (std::abs(cur) > 1e250) {
      cur *= 1e-250;
      next *= 1e-250;
      norm *= 1e-250;
      for (int i = idx; i <= order; ++i) j[i] *= 1e-250;
    }
  }
  norm += cur;  // J_0
  for (double& v : j) v /= norm;
  return j;
}

double bisect(const std::function<double(double)>& f, Bracket bracket,
              double tolerance) {
  double lo = bracket.lo;
  double hi = bracket.hi;
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0) == (fhi > 0)) {
    throw std::domain_error("bisect: no sign change in bracket");
  }
  while (hi - lo > tolerance) {
    double mid = 0.5 * (lo + hi);
    double fmid = f(mid);
    if (fmid == 0.0) return mid;
    if ((fmid > 0) == (flo > 0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::optional<Bracket> find_sign_change(const std::function<double(double)>& f,
                                        double start, double stop,
                                        double step) {
  double a = start;
  double fa = f(a);
  while (a < stop) {
    double b = std::min(a + step, stop);
    double fb = f(b);
    if (fa == 0.0 || (fa > 0) != (fb > 0)) return Bracket{a, b};
    a = b;
    fa = fb;
  }
  return std::nullopt;
}

double fit_inverse(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.empty()) {
    throw std::invalid_argument("fit_inverse: size mismatch");
  }
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    num += y[i] / x[i];
    den += 1.0 / (x[i] * x[i]);
  }
  return num / den;
}

double fit_quadratic(std::span<const double> d, std::span<const double> y) {
  if (d.size() != y.size() || d.empty()) {
    throw std::invalid_argument("fit_quadratic: size mismatch");
  }
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    double d2 = d[i] * d[i];
    num += y[i] * d2;
    den += d2 * d2;
  }
  if (den == 0.0) throw std::invalid_argument("fit_quadratic: all offsets zero");
  return num / den;
}

double legendre(int n, double x) {
  if (n < 0) throw std::invalid_argument("legendre: negative degree");
  if (n == 0) return 1.0;
  double p0 = 1.0;
  double p1 = x;
  for (int k = 1; k < n; ++k) {
    double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

}  // namespace qil
