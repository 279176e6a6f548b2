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

#include "qil/qubits.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace qil {

void check_normalized(const QubitAmplitudes& q) {
  double n2 = std::norm(q.zero) + std::norm(q.one);
  if (!(std::abs(n2 - 1.0) <= 1e-10)) {
    throw std::invalid_argument("qubit amplitudes must be normalized");
  }
}

QubitState::QubitState(int n_qubits)
    : n_qubits_(n_qubits), amplitudes_(std::size_t{1} << n_qubits) {
  if (n_qubits < 1 || n_qubits > 20) {
    throw std::invalid_argument("qubit count out of range");
  }
}

QubitState::QubitState(int n_qubits, std::vector<Complex> amplitudes)
    : QubitState(n_qubits) {
  if (amplitudes.size() != amplitudes_.size()) {
    throw std::invalid_argument("amplitude count does not match qubit count");
  }
  amplitudes_ = std::move(amplitudes);
}

QubitState QubitState::product(const std::vector<QubitAmplitudes>& qubits) {
  QubitState state(static_cast<int>(qubits.size()));
  for (std::size_t b = 0; b < state.dimension(); ++b) {
    Complex amp = 1.0;
    for (int q = 0; q < state.n_qubits(); ++q) {
      amp *= state.bit(b, q) ? qubits[q].one : qubits[q].zero;
    }
    state[b] = amp;
  }
  return state;
}

double QubitState::norm_squared() const {
  double sum = 0.0;
  for (const Complex& a : amplitudes_) sum += std::norm(a);
  return sum;
}

void QubitState::normalize() {
  double n2 = norm_squared();
  if (n2 <= 0.0) throw std::domain_error("normalize: zero qubit state");
  double f = 1.0 / std::sqrt(n2);
  for (Complex& a : amplitudes_) a *= f;
}

Complex overlap(const QubitState& a, const QubitState& b) {
  if (a.dimension() != b.dimension()) {
    throw std::invalid_argument("overlap: qubit count mismatch");
  }
  Complex sum{};
  for (std::size_t i = 0; i < a.dimension(); ++i) {
    sum += std::conj(a[i]) * b[i];
  }
  return sum;
}

QubitEnsemble pure_ensemble(const QubitState& state) {
  QubitEnsemble e;
  e.members.push_back({1.0, state});
  return e;
}

Complex DensityMatrix::trace() const {
  Complex t{};
  for (std::size_t i = 0; i < dimension(); ++i) t += (*this)(i, i);
  return t;
}

DensityMatrix density_of(const QubitEnsemble& ensemble) {
  if (ensemble.members.empty()) throw std::invalid_argument("empty ensemble");
  DensityMatrix rho;
  rho.n_qubits = ensemble.members.front().state.n_qubits();
  std::size_t d = rho.dimension();
  rho.data.assign(d * d, Complex{});
  for (const auto& m : ensemble.members) {
    if (m.state.n_qubits() != rho.n_qubits) {
      throw std::invalid_argument("ensemble members differ in qubit count");
    }
    for (std::size_t r = 0; r < d; ++r) {
      for (std::size_t c = 0; c < d; ++c) {
        rho(r, c) += m.weight * m.state[r] * std::conj(m.state[c]);
      }
    }
  }
  return rho;
}

QubitEnsemble ensemble_from_density(const DensityMatrix& rho) {
  const auto d = static_cast<Eigen::Index>(rho.dimension());
  Eigen::MatrixXcd m(d, d);
  for (Eigen::Index r = 0; r < d; ++r) {
    for (Eigen::Index c = 0; c < d; ++c) m(r, c) = rho(r, c);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigen-decomposition of density matrix failed");
  }

  struct Entry {
    double weight;
    std::size_t lead;
    QubitState state;
  };
  std::vector<Entry> entries;
  for (Eigen::Index i = 0; i < d; ++i) {
    double w = solver.eigenvalues()(i);
    if (w < 1e-15) continue;
    std::vector<Complex> v(d);
    for (Eigen::Index r = 0; r < d; ++r) v[r] = solver.eigenvectors()(r, i);
    std::size_t lead = 0;
    while (lead + 1 < v.size() && std::abs(v[lead]) < 1e-9) ++lead;
    Complex unit = std::abs(v[lead]) > 0 ? std::conj(v[lead]) / std::abs(v[lead])
                                         : Complex{1.0};
    for (Complex& a : v) a *= unit;
    QubitState s(rho.n_qubits, std::move(v));
    s.normalize();
    entries.push_back({w, lead, std::move(s)});
  }
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry& a, const Entry& b) {
                     if (std::abs(a.weight - b.weight) > 1e-12) {
                       return a.weight > b.weight;
                     }
                     return a.lead < b.lead;
                   });
  QubitEnsemble e;
  for (auto& entry : entries) {
    e.members.push_back({entry.weight, std::move(entry.state)});
  }
  return e;
}

double qubit_fidelity(const QubitState& a, const QubitState& b) {
  return std::norm(overlap(a, b));
}

double qubit_fidelity(const QubitEnsemble& a, const QubitEnsemble& b) {
  double sum = 0.0;
  for (const auto& x : a.members) {
    for (const auto& y : b.members) {
      sum += x.weight * y.weight * std::norm(overlap(x.state, y.state));
    }
  }
  return sum;
}

double qubit_fidelity(const QubitEnsemble& a, const QubitState& b) {
  return qubit_fidelity(a, pure_ensemble(b));
}

JointState::JointState(int n_qubits, std::vector<Branch> branches)
    : n_qubits_(n_qubits), branches_(std::move(branches)) {
  if (n_qubits < 1 || branches_.size() != (std::size_t{1} << n_qubits)) {
    throw std::invalid_argument("JointState: branch count must be 2^n");
  }
  for (const auto& b : branches_) {
    if (b.coefficient != Complex{} && !b.light) {
      throw std::invalid_argument("JointState: non-zero branch without light");
    }
  }
}

double JointState::norm_squared() const {
  double sum = 0.0;
  for (const auto& b : branches_) sum += std::norm(b.coefficient);
  return sum;
}

JointState JointState::transform_lights(
    const std::function<int(std::size_t)>& key,
    const std::function<DualModeState(const DualModeState&, int)>& op) const {
  std::map<std::pair<const DualModeState*, int>,
           std::shared_ptr<const DualModeState>>
      cache;
  std::vector<Branch> out(branches_.size());
  for (std::size_t b = 0; b < branches_.size(); ++b) {
    const Branch& in = branches_[b];
    out[b].coefficient = in.coefficient;
    if (in.coefficient == Complex{}) continue;
    int k = key(b);
    auto& slot = cache[{in.light.get(), k}];
    if (!slot) slot = std::make_shared<const DualModeState>(op(*in.light, k));
    out[b].light = slot;
  }
  return JointState(n_qubits_, std::move(out));
}

JointState make_joint(const DualModeState& light, const QubitState& qubits) {
  double n2 = light.norm_squared();
  if (std::abs(n2 - 1.0) > 1e-10) {
    throw std::invalid_argument("make_joint: light state must be normalized");
  }
  if (std::abs(qubits.norm_squared() - 1.0) > 1e-10) {
    throw std::invalid_argument("make_joint: qubit state must be normalized");
  }
  auto shared = std::make_shared<const DualModeState>(light);
  std::vector<JointState::Branch> branches(qubits.dimension());
  for (std::size_t b = 0; b < qubits.dimension(); ++b) {
    branches[b].coefficient = qubits[b];
    if (qubits[b] != Complex{}) branches[b].light = shared;
  }
  return JointState(qubits.n_qubits(), std::move(branches));
}

JointState make_joint(const DualModeState& light,
                      const std::vector<QubitAmplitudes>& qubits) {
  if (qubits.empty()) throw std::invalid_argument("make_joint: no qubits");
  for (const auto& q : qubits) check_normalized(q);
  return make_joint(light, QubitState::product(qubits));
}

JointState apply_qubit_interaction(const JointState& j, int qubit_index,
                                   double theta) {
  if (qubit_index < 0 || qubit_index >= j.n_qubits()) {
    throw std::out_of_range("qubit index out of range");
  }
  return j.transform_lights(
      [&](std::size_t b) { return j.bit(b, qubit_index); },
      [&](const DualModeState& light, int bit) {
        return apply_phase(light, theta, bit);
      });
}

double balanced_weight(const QubitAmplitudes& x, const QubitAmplitudes& y) {
  return std::norm(x.zero * y.one) + std::norm(x.one * y.zero);
}

DensityMatrix reduced_density(const JointState& j) {
  DensityMatrix rho;
  rho.n_qubits = j.n_qubits();
  std::size_t d = rho.dimension();
  rho.data.assign(d * d, Complex{});
  std::map<std::pair<const DualModeState*, const DualModeState*>, Complex> gram;
  auto light_overlap = [&](const DualModeState* a, const DualModeState* b) {
    if (a == b) return Complex{1.0};
    auto it = gram.find({a, b});
    if (it != gram.end()) return it->second;
    Complex v = inner_product(*a, *b);
    gram[{a, b}] = v;
    gram[{b, a}] = std::conj(v);
    return v;
  };
  for (std::size_t r = 0; r < d; ++r) {
    const auto& br = j.branch(r);
    if (br.coefficient == Complex{}) continue;
    for (std::size_t c = 0; c < d; ++c) {
      const auto& bc = j.branch(c);
      if (bc.coefficient == Complex{}) continue;
      // rho(r, c) = c_r conj(c_c) <L_c | L_r>
      rho(r, c) = br.coefficient * std::conj(bc.coefficient) *
                  light_overlap(bc.light.get(), br.light.get());
    }
  }
  return rho;
}

QubitEnsemble partial_trace_light(const JointState& j) {
  return ensemble_from_density(reduced_density(j));
}

}  // namespace qil
