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

#include "gspt/ed.hpp"

#include <Eigen/Eigenvalues>
#include <bit>
#include <cmath>
#include <map>
#include <stdexcept>

#include "gspt/rng.hpp"

namespace gspt {

PauliOperator::PauliOperator(const PauliSum& op) : num_sites_(op.num_sites()) {
  if (!op.is_real_matrix()) throw std::invalid_argument("PauliOperator needs a real computational-basis matrix");
  std::map<std::uint64_t, std::vector<std::pair<std::uint64_t, double>>> by_x;
  for (const auto& t : op.terms()) {
    // i^{#Y} times the coefficient is real here.
    Complex c = t.coefficient();
    for (int k = 0; k < t.y_count(); ++k) c *= Complex(0.0, 1.0);
    by_x[t.x_mask()].emplace_back(t.z_mask(), c.real());
  }
  for (auto& [x, zc] : by_x) {
    Group g{x, std::move(zc), {}};
    if (g.zc.size() > 2) {
      g.table.resize(dim());
      for (std::size_t i = 0; i < g.table.size(); ++i) {
        double v = 0;
        for (const auto& [z, c] : g.zc) v += std::popcount(i & z) & 1 ? -c : c;
        g.table[i] = v;
      }
    }
    groups_.push_back(std::move(g));
  }
}

void PauliOperator::apply(const double* x, double* y) const {
  const std::size_t n = dim();
  std::fill(y, y + n, 0.0);
  for (const auto& g : groups_) {
    if (g.zc.size() == 1) {
      const auto [z, c] = g.zc[0];
      for (std::size_t i = 0; i < n; ++i) y[i ^ g.x] += (std::popcount(i & z) & 1 ? -c : c) * x[i];
      continue;
    }
    if (!g.table.empty()) {
      for (std::size_t i = 0; i < n; ++i) y[i ^ g.x] += g.table[i] * x[i];
      continue;
    }
    for (std::size_t i = 0; i < n; ++i) {
      double v = 0;
      for (const auto& [z, c] : g.zc) v += std::popcount(i & z) & 1 ? -c : c;
      y[i ^ g.x] += v * x[i];
    }
  }
}

Eigen::VectorXd PauliOperator::apply(const Eigen::VectorXd& x) const {
  if (static_cast<std::size_t>(x.size()) != dim()) throw std::invalid_argument("vector size mismatch");
  Eigen::VectorXd y(x.size());
  apply(x.data(), y.data());
  return y;
}

Eigen::MatrixXd PauliOperator::dense() const {
  const std::size_t n = dim();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (const auto& g : groups_)
    for (std::size_t i = 0; i < n; ++i)
      for (const auto& [z, c] : g.zc) m(i ^ g.x, i) += std::popcount(i & z) & 1 ? -c : c;
  return m;
}

double PauliOperator::expectation(const Eigen::VectorXd& x) const { return x.dot(apply(x)); }

RealOperator PauliOperator::as_function() const {
  return [this](const double* x, double* y) { apply(x, y); };
}

namespace {

// Orthogonalizes column j of `src` against the first m columns of w (two
// passes) and stores it as column m of w. Returns false if nothing is left.
bool append_orthogonal(Eigen::MatrixXd& w, int m, const Eigen::Ref<const Eigen::VectorXd>& src,
                       Eigen::VectorXd& coeffs) {
  const double before = src.norm();
  if (before == 0) return false;
  auto v = w.col(m);
  v = src;
  for (int pass = 0; pass < 2; ++pass) {
    if (m == 0) break;
    coeffs.head(m).noalias() = w.leftCols(m).transpose() * v;
    v.noalias() -= w.leftCols(m) * coeffs.head(m);
  }
  const double after = v.norm();
  if (!(after > 1e-10 * before && after > 1e-300)) return false;
  v /= after;
  return true;
}

}  // namespace

Eigenpairs krylov_lowest(const RealOperator& op, std::size_t dim, int k, const KrylovOptions& opt) {
  if (k < 1 || static_cast<std::size_t>(k) > dim) throw std::invalid_argument("invalid number of eigenpairs");
  const int n = static_cast<int>(dim);
  const int b = std::min(opt.block > 0 ? opt.block : k + 2, n);
  const int max_basis = std::min(std::max(opt.max_basis, 3 * b), n);
  if (opt.initial.size() > 0 && opt.initial.rows() != n)
    throw std::invalid_argument("initial vectors have the wrong dimension");

  // All large buffers are allocated once.
  Eigen::MatrixXd w(n, max_basis), aw(n, max_basis), x(n, b), ax(n, b);
  Eigen::VectorXd coeffs(max_basis);
  // Projected matrix W^T A W, extended column by column.
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(max_basis, max_basis);
  int m = 0;
  Eigenpairs out;
  auto push = [&](const Eigen::Ref<const Eigen::VectorXd>& v) {
    if (m >= max_basis || !append_orthogonal(w, m, v, coeffs)) return false;
    op(w.col(m).data(), aw.col(m).data());
    ++out.matvecs;
    coeffs.head(m + 1).noalias() = w.leftCols(m + 1).transpose() * aw.col(m);
    t.col(m).head(m + 1) = coeffs.head(m + 1);
    t.row(m).head(m + 1) = coeffs.head(m + 1).transpose();
    ++m;
    return true;
  };

  Rng rng(opt.seed);
  {
    Eigen::VectorXd v(n);
    for (int j = 0; j < b; ++j) {
      if (j < opt.initial.cols()) {
        v = opt.initial.col(j);
      } else {
        for (int i = 0; i < n; ++i) v(i) = uniform(rng, -1.0, 1.0);
      }
      push(v);
    }
  }

  auto finish = [&](const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>& es, bool converged) {
    out.values = es.eigenvalues().head(k);
    out.vectors = w.leftCols(m) * es.eigenvectors().leftCols(k);
    out.converged = converged;
    return out;
  };

  for (int iter = 0; iter < opt.max_iterations; ++iter) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t.topLeftCorner(m, m));
    const int nr = std::min(b, m);
    const Eigen::MatrixXd y = es.eigenvectors().leftCols(nr);
    x.leftCols(nr).noalias() = w.leftCols(m) * y;
    ax.leftCols(nr).noalias() = aw.leftCols(m) * y;
    // Residuals overwrite ax.
    for (int j = 0; j < nr; ++j) ax.col(j) -= es.eigenvalues()(j) * x.col(j);
    double worst = 0;
    for (int j = 0; j < std::min(k, nr); ++j) worst = std::max(worst, ax.col(j).norm());
    out.max_residual = worst;
    if ((worst < opt.tol && nr >= k) || m == n) return finish(es, true);
    if (m + nr > max_basis) {
      const int keep = std::min(m, std::max(2 * b, max_basis / 2));
      const Eigen::MatrixXd yk = es.eigenvectors().leftCols(keep);
      // Rotate in place, one row block at a time.
      constexpr Eigen::Index kRows = 4096;
      Eigen::MatrixXd tmp(kRows, keep);
      for (Eigen::Index r0 = 0; r0 < n; r0 += kRows) {
        const Eigen::Index rows = std::min<Eigen::Index>(kRows, n - r0);
        tmp.topRows(rows).noalias() = w.block(r0, 0, rows, m) * yk;
        w.block(r0, 0, rows, keep) = tmp.topRows(rows);
        tmp.topRows(rows).noalias() = aw.block(r0, 0, rows, m) * yk;
        aw.block(r0, 0, rows, keep) = tmp.topRows(rows);
      }
      t.setZero();
      t.topLeftCorner(keep, keep) = es.eigenvalues().head(keep).asDiagonal();
      m = keep;
    }
    int added = 0;
    for (int j = 0; j < nr; ++j) added += push(ax.col(j)) ? 1 : 0;
    if (added == 0) {
      // Krylov space exhausted: the Ritz pairs are exact up to rounding.
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> last(t.topLeftCorner(m, m));
      return finish(last, worst < 1e3 * opt.tol);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t.topLeftCorner(m, m));
  return finish(es, false);
}

Eigenpairs lowest_eigenpairs(const PauliSum& h, int k, const KrylovOptions& opt) {
  const PauliOperator op(h);
  if (op.dim() <= 1024) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(op.dense());
    Eigenpairs out;
    out.values = es.eigenvalues().head(k);
    out.vectors = es.eigenvectors().leftCols(k);
    out.converged = true;
    return out;
  }
  return krylov_lowest(op.as_function(), op.dim(), k, opt);
}

double highest_eigenvalue(const PauliSum& h, const KrylovOptions& opt) {
  return -lowest_eigenpairs(h.scaled(-1.0), 1, opt).values(0);
}

StateVector to_state(int num_sites, const Eigen::VectorXd& v) {
  std::vector<Complex> a(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) a[i] = v(i);
  return StateVector(num_sites, std::move(a));
}

Eigen::VectorXd real_amplitudes(const StateVector& psi) {
  Eigen::VectorXd v(psi.dim());
  double imag = 0;
  for (std::size_t i = 0; i < psi.dim(); ++i) {
    v(i) = psi[i].real();
    imag = std::max(imag, std::abs(psi[i].imag()));
  }
  if (imag > 1e-10) throw std::domain_error("state has complex amplitudes");
  return v;
}

double subspace_overlap(const Eigen::VectorXd& psi, const Eigen::MatrixXd& vectors, const std::vector<int>& cols) {
  double s = 0;
  for (int c : cols) s += std::pow(vectors.col(c).dot(psi), 2);
  return std::sqrt(s);
}

std::vector<int> ground_multiplet(const Eigen::VectorXd& values, double tol) {
  std::vector<int> out;
  for (Eigen::Index i = 0; i < values.size(); ++i)
    if (std::abs(values(i) - values(0)) < tol) out.push_back(static_cast<int>(i));
  return out;
}

}  // namespace gspt
