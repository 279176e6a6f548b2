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

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace qil {

// J_0(z) ... J_{order}(z) for z >= 0 by Miller's backward recurrence,
// normalized with J_0 + 2 * sum_k J_{2k} = 1.
std::vector<double> bessel_j_sequence(double z, int order);

// Smallest order K such that |J_k(z)| is below ~1e-17 for every k > K.
int bessel_truncation_order(double z);

struct Bracket {
  double lo;
  double hi;
};

// Bisection on a sign change of f inside [lo, hi]. Stops when the bracket is
// narrower than tolerance. Throws std::domain_error if f(lo), f(hi) share a sign.
double bisect(const std::function<double(double)>& f, Bracket bracket,
              double tolerance);

// Scans [start, stop] in steps of `step` and returns the first bracket where f
// changes sign (or hits zero). Returns nothing when no sign change is found.
std::optional<Bracket> find_sign_change(const std::function<double(double)>& f,
                                        double start, double stop,
                                        double step);

// Least-squares c for y ~ c / x.
double fit_inverse(std::span<const double> x, std::span<const double> y);

// Least-squares a for y ~ a * d^2.
double fit_quadratic(std::span<const double> d, std::span<const double> y);

// Legendre polynomial P_n(x) by the three-term recurrence.
double legendre(int n, double x);

}  // namespace qil
