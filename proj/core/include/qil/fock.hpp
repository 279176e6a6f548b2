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

#include <complex>
#include <functional>
#include <span>
#include <variant>
#include <vector>

namespace qil {

using Complex = std::complex<double>;

// Two-mode photon-number state. Amplitudes are grouped by total photon number
// s = n0 + n1; inside a sector they are indexed by n0. Sectors that were never
// written are absent and read as zero.
class DualModeState {
 public:
  DualModeState() = default;
  explicit DualModeState(int cutoff);

  int cutoff() const { return static_cast<int>(sectors_.size()) - 1; }

  Complex amplitude(int n0, int n1) const;
  void set_amplitude(int n0, int n1, Complex value);

  bool has_sector(int s) const;
  // Empty span for absent sectors.
  std::span<const Complex> sector(int s) const;
  // Allocates (zero-filled) if absent.
  std::span<Complex> sector_mut(int s);
  void drop_sector(int s);

  double norm_squared() const;
  double sector_norm_squared(int s) const;
  void normalize();
  void scale(Complex factor);
  double mean_photons(int mode) const;

  // Probability mass discarded by truncation when the state was built.
  double tail_mass() const { return tail_mass_; }
  void set_tail_mass(double mass) { tail_mass_ = mass; }

  void for_each(const std::function<void(int n0, int n1, Complex amp)>& fn) const;

 private:
  std::vector<std::vector<Complex>> sectors_;
  double tail_mass_ = 0.0;
};

namespace spec {
struct Fock {
  int n0 = 0;
  int n1 = 0;
};
struct Coherent {
  Complex alpha;
  int port = 0;
};
struct TwinFock {
  int n = 0;
};
struct Noon {
  int n = 0;
  double phase = 0.0;
};
struct CoherentNoon {
  Complex alpha;
};
}  // namespace spec

using StateSpec =
    std::variant<spec::Fock, spec::Coherent, spec::TwinFock, spec::Noon,
                 spec::CoherentNoon>;

inline constexpr double kDefaultTailTolerance = 1e-12;

// Throws std::invalid_argument for tolerances outside (0, 1e-6], negative
// photon numbers, non-finite alpha or a port other than 0/1.
DualModeState make_state(const StateSpec& spec,
                         double tail_tolerance = kDefaultTailTolerance);

// Converts a photon count given as a real number, rejecting non-integers.
int require_photon_count(double n);

// exp[-i (a0+ a1 + a1+ a0) pi/4], sector by sector.
DualModeState apply_beamsplitter(const DualModeState& state);

// Multiplies the amplitude at (n0, n1) by exp(-i theta n_mode).
DualModeState apply_phase(const DualModeState& state, double theta, int mode);
DualModeState apply_phases(const DualModeState& state, double theta0,
                           double theta1);

struct Annihilated {
  DualModeState state;  // renormalized a_mode|psi>, empty when vanished
  double weight = 0.0;  // <n_mode>
  bool vanished = false;
};
Annihilated apply_annihilation(const DualModeState& state, int mode);

// Hadamard on each {|s,0>, |0,s>} pair, identity on vacuum. Throws
// std::domain_error when amplitude above 1e-10 sits off that manifold.
DualModeState apply_nbs(const DualModeState& state);

Complex inner_product(const DualModeState& a, const DualModeState& b);

}  // namespace qil
