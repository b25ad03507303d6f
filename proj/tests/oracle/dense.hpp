// Copyright 2026 The gspt Authors
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

// Independent dense-matrix oracles for tests. Everything here is built from
// explicit 2x2 matrices and Kronecker products, never from the library's
// bit-mask kernels.
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "gspt/circuit.hpp"
#include "gspt/pauli.hpp"

namespace oracle {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using cd = std::complex<double>;

inline Mat pauli_matrix(gspt::Pauli p) {
  Mat m(2, 2);
  switch (p) {
    case gspt::Pauli::I: m << 1, 0, 0, 1; break;
    case gspt::Pauli::X: m << 0, 1, 1, 0; break;
    case gspt::Pauli::Y: m << 0, cd(0, -1), cd(0, 1), 0; break;
    case gspt::Pauli::Z: m << 1, 0, 0, -1; break;
  }
  return m;
}

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Site i is bit i of the basis index, so site L-1 is the leftmost factor.
inline Mat on_sites(int L, const std::vector<Mat>& per_site) {
  Mat out = Mat::Identity(1, 1);
  for (int s = L - 1; s >= 0; --s) out = kron(out, per_site[s]);
  return out;
}

inline Mat term_matrix(int L, const gspt::PauliTerm& t) {
  std::vector<Mat> ops(L, pauli_matrix(gspt::Pauli::I));
  for (const auto& [site, p] : t.factors()) ops[site] = pauli_matrix(p);
  return t.coefficient() * on_sites(L, ops);
}

inline Mat sum_matrix(const gspt::PauliSum& s) {
  const int L = s.num_sites();
  Mat m = Mat::Zero(1 << L, 1 << L);
  for (const auto& t : s.terms()) m += term_matrix(L, t);
  return m;
}

inline Mat y_rotation(double theta) {
  Mat m(2, 2);
  m << std::cos(theta / 2), -std::sin(theta / 2), std::sin(theta / 2), std::cos(theta / 2);
  return m;
}

inline Mat cz_matrix(int L, int a, int b) {
  // CZ = (I + Z_a + Z_b - Z_a Z_b) / 2
  std::vector<Mat> ia(L, pauli_matrix(gspt::Pauli::I)), ib = ia, iab = ia;
  ia[a] = pauli_matrix(gspt::Pauli::Z);
  ib[b] = pauli_matrix(gspt::Pauli::Z);
  iab[a] = iab[b] = pauli_matrix(gspt::Pauli::Z);
  const Mat id = Mat::Identity(1 << L, 1 << L);
  return 0.5 * (id + on_sites(L, ia) + on_sites(L, ib) - on_sites(L, iab));
}

inline Mat circuit_unitary(const gspt::Circuit& c) {
  const int L = c.num_sites();
  Mat u = Mat::Identity(1 << L, 1 << L);
  for (const auto& layer : c.layers()) {
    Mat step = Mat::Identity(1 << L, 1 << L);
    if (const auto* y = std::get_if<gspt::YLayer>(&layer)) {
      std::vector<Mat> ops;
      for (double t : y->angles) ops.push_back(y_rotation(t));
      step = on_sites(L, ops);
    } else if (const auto* cz = std::get_if<gspt::CZLayer>(&layer)) {
      for (const auto& [a, b] : cz->pairs) step = cz_matrix(L, a, b) * step;
    } else {
      const auto& p = std::get<gspt::PauliLayer>(layer);
      std::vector<Mat> ops;
      for (auto op : p.ops) ops.push_back(pauli_matrix(op));
      step = on_sites(L, ops);
    }
    u = step * u;
  }
  return u;
}

inline Vec zero_state(int L) {
  Vec v = Vec::Zero(1 << L);
  v(0) = 1;
  return v;
}

// min over phi of max|A - e^{i phi} B|, with phi fixed by the largest entry.
inline double phase_distance(const Mat& a, const Mat& b) {
  Eigen::Index r, c;
  b.cwiseAbs().maxCoeff(&r, &c);
  const cd ph = a(r, c) / b(r, c);
  return (a - (ph / std::abs(ph)) * b).cwiseAbs().maxCoeff();
}

}  // namespace oracle
