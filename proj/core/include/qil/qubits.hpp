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
#include <memory>
#include <vector>

#include "qil/fock.hpp"

namespace qil {

struct QubitAmplitudes {
  Complex zero = 1.0;
  Complex one = 0.0;
};

// Throws std::invalid_argument unless |zero|^2 + |one|^2 = 1 within 1e-10.
void check_normalized(const QubitAmplitudes& q);

// Pure state of n qubits. Qubit 0 is the most significant bit of the basis
// index, so basis index b reads as the string q0 q1 ... q(n-1).
class QubitState {
 public:
  QubitState() = default;
  explicit QubitState(int n_qubits);
  QubitState(int n_qubits, std::vector<Complex> amplitudes);
  static QubitState product(const std::vector<QubitAmplitudes>& qubits);

  int n_qubits() const { return n_qubits_; }
  std::size_t dimension() const { return amplitudes_.size(); }
  const std::vector<Complex>& amplitudes() const { return amplitudes_; }
  std::vector<Complex>& amplitudes() { return amplitudes_; }
  Complex operator[](std::size_t b) const { return amplitudes_[b]; }
  Complex& operator[](std::size_t b) { return amplitudes_[b]; }

  int bit(std::size_t basis, int qubit) const {
    return static_cast<int>((basis >> (n_qubits_ - 1 - qubit)) & 1u);
  }

  double norm_squared() const;
  void normalize();

 private:
  int n_qubits_ = 0;
  std::vector<Complex> amplitudes_;
};

Complex overlap(const QubitState& a, const QubitState& b);

template <class State>
struct Ensemble {
  struct Member {
    double weight = 0.0;
    State state;
  };
  std::vector<Member> members;

  double total_weight() const {
    double sum = 0.0;
    for (const auto& m : members) sum += m.weight;
    return sum;
  }
};

using QubitEnsemble = Ensemble<QubitState>;
using LightEnsemble = Ensemble<DualModeState>;

QubitEnsemble pure_ensemble(const QubitState& state);

// Row-major Hermitian matrix on n qubits.
struct DensityMatrix {
  int n_qubits = 0;
  std::vector<Complex> data;

  std::size_t dimension() const { return std::size_t{1} << n_qubits; }
  Complex operator()(std::size_t r, std::size_t c) const {
    return data[r * dimension() + c];
  }
  Complex& operator()(std::size_t r, std::size_t c) {
    return data[r * dimension() + c];
  }
  Complex trace() const;
};

DensityMatrix density_of(const QubitEnsemble& ensemble);

// Eigen-ensemble of rho: members sorted by descending weight (ties broken by
// the first basis index carrying weight), each vector phased so its first
// significant amplitude is real and positive. Eigenvalues below 1e-15 are
// dropped.
QubitEnsemble ensemble_from_density(const DensityMatrix& rho);

// tr(rho rho'). For pure states this is |<a|b>|^2.
double qubit_fidelity(const QubitState& a, const QubitState& b);
double qubit_fidelity(const QubitEnsemble& a, const QubitEnsemble& b);
double qubit_fidelity(const QubitEnsemble& a, const QubitState& b);

// Qubits entangled with the two-mode field. Each basis branch holds a
// coefficient and a shared, normalized light state; branches whose light is
// equal by construction share one object.
class JointState {
 public:
  struct Branch {
    Complex coefficient;
    std::shared_ptr<const DualModeState> light;
  };

  JointState() = default;
  JointState(int n_qubits, std::vector<Branch> branches);

  int n_qubits() const { return n_qubits_; }
  std::size_t dimension() const { return branches_.size(); }
  const std::vector<Branch>& branches() const { return branches_; }
  const Branch& branch(std::size_t b) const { return branches_[b]; }

  int bit(std::size_t basis, int qubit) const {
    return static_cast<int>((basis >> (n_qubits_ - 1 - qubit)) & 1u);
  }

  double norm_squared() const;

  // Applies op(light, key(basis)) to every non-zero branch. Results are
  // cached per (light object, key), so branches that shared a light and map to
  // the same key keep sharing.
  JointState transform_lights(
      const std::function<int(std::size_t basis)>& key,
      const std::function<DualModeState(const DualModeState&, int key)>& op)
      const;

 private:
  int n_qubits_ = 0;
  std::vector<Branch> branches_;
};

using JointEnsemble = Ensemble<JointState>;

// Product of the qubit register with one light state.
JointState make_joint(const DualModeState& light,
                      const std::vector<QubitAmplitudes>& qubits);
JointState make_joint(const DualModeState& light, const QubitState& qubits);

// On branches where the qubit reads b, photons in mode b pick up exp(-i theta).
JointState apply_qubit_interaction(const JointState& j, int qubit_index,
                                   double theta);

// |x0 y1|^2 + |x1 y0|^2.
double balanced_weight(const QubitAmplitudes& x, const QubitAmplitudes& y);

// Exact reduced qubit density matrix (light traced out).
DensityMatrix reduced_density(const JointState& j);
QubitEnsemble partial_trace_light(const JointState& j);

}  // namespace qil
