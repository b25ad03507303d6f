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

#include "gspt/dmrg.hpp"

#include <Eigen/SVD>
#include <array>
#include <limits>
#include <map>
#include <cmath>
#include <stdexcept>

#include "gspt/ed.hpp"

namespace gspt {

namespace {

using Mat = Eigen::MatrixXd;
using Env = std::vector<Mat>;

// Combined two-site operator block W_i(a,c) W_{i+1}(c,b) as a 4x4 matrix on
// (s1 + 2 s2).
struct PairBlock {
  int a, b;
  Eigen::Matrix4d op;
};

std::vector<PairBlock> pair_blocks(const Mpo& w, int i) {
  std::map<std::pair<int, int>, Eigen::Matrix4d> acc;
  for (const auto& x : w.blocks(i))
    for (const auto& y : w.blocks(i + 1)) {
      if (x.b != y.a) continue;
      Eigen::Matrix4d m;
      for (int s1 = 0; s1 < 2; ++s1)
        for (int s2 = 0; s2 < 2; ++s2)
          for (int t1 = 0; t1 < 2; ++t1)
            for (int t2 = 0; t2 < 2; ++t2) m(s1 + 2 * s2, t1 + 2 * t2) = x.op(s1, t1) * y.op(s2, t2);
      auto [it, fresh] = acc.try_emplace({x.a, y.b}, m);
      if (!fresh) it->second += m;
    }
  std::vector<PairBlock> out;
  for (const auto& [ab, m] : acc)
    if (m.cwiseAbs().maxCoeff() > 0) out.push_back({ab.first, ab.second, m});
  return out;
}

Env extend_left(const Env& le, const Mps::Site& a, const Mpo& w, int i) {
  const Eigen::Index d = a[0].cols();
  Env next(w.right_dim(i), Mat::Zero(d, d));
  std::vector<std::array<Mat, 2>> ea(le.size());
  for (const auto& blk : w.blocks(i)) {
    if (le[blk.a].size() == 0 || le[blk.a].isZero(0)) continue;
    if (ea[blk.a][0].size() == 0)
      for (int s = 0; s < 2; ++s) ea[blk.a][s] = le[blk.a] * a[s];
    for (int s = 0; s < 2; ++s) {
      Mat acc = Mat::Zero(le[blk.a].rows(), d);
      bool any = false;
      for (int t = 0; t < 2; ++t)
        if (blk.op(s, t) != 0.0) {
          acc += blk.op(s, t) * ea[blk.a][t];
          any = true;
        }
      if (any) next[blk.b].noalias() += a[s].transpose() * acc;
    }
  }
  return next;
}

Env extend_right(const Env& re, const Mps::Site& a, const Mpo& w, int i) {
  const Eigen::Index d = a[0].rows();
  Env next(w.left_dim(i), Mat::Zero(d, d));
  std::vector<std::array<Mat, 2>> ea(re.size());
  for (const auto& blk : w.blocks(i)) {
    if (re[blk.b].size() == 0 || re[blk.b].isZero(0)) continue;
    if (ea[blk.b][0].size() == 0)
      for (int t = 0; t < 2; ++t) ea[blk.b][t] = a[t] * re[blk.b].transpose();
    for (int s = 0; s < 2; ++s) {
      Mat acc = Mat::Zero(d, re[blk.b].rows());
      bool any = false;
      for (int t = 0; t < 2; ++t)
        if (blk.op(s, t) != 0.0) {
          acc += blk.op(s, t) * ea[blk.b][t];
          any = true;
        }
      // next(l, l') = sum a[s](l, r) re(r, r') a[t](l', r')
      if (any) next[blk.a].noalias() += a[s] * acc.transpose();
    }
  }
  return next;
}

// Overlap environments <phi|psi> restricted to the left/right of a bond.
Mat overlap_left(const Mat& e, const Mps::Site& phi, const Mps::Site& psi) {
  return phi[0].transpose() * e * psi[0] + phi[1].transpose() * e * psi[1];
}

Mat overlap_right(const Mat& e, const Mps::Site& phi, const Mps::Site& psi) {
  return phi[0] * e * psi[0].transpose() + phi[1] * e * psi[1].transpose();
}

struct Penalty {
  const Mps* phi;
  std::vector<Mat> left, right;  // left[i]: bond left of site i; right[i]: bond right of site i
};

}  // namespace

DmrgResult dmrg(const PauliSum& h, std::span<const Mps> lower, const DmrgConfig& cfg, const Mps* initial,
                const SweepCallback& on_sweep) {
  const int L = h.num_sites();
  if (L < 2) throw std::invalid_argument("DMRG needs at least two sites");
  if (cfg.chi_max < 1) throw std::invalid_argument("chi_max must be positive");
  for (const auto& p : lower)
    if (p.num_sites() != L) throw std::invalid_argument("penalty state has the wrong length");
  const Mpo w(h);

  Mps psi = initial ? *initial : Mps::random(L, std::min(cfg.chi_start, cfg.chi_max), cfg.seed);
  if (psi.num_sites() != L) throw std::invalid_argument("initial state has the wrong length");
  psi.canonicalize(0);
  auto& A = psi.sites();

  std::vector<Env> le(L), re(L);
  le[0] = Env(w.left_dim(0), Mat::Zero(1, 1));
  le[0][0](0, 0) = 1.0;
  re[L - 1] = Env(w.right_dim(L - 1), Mat::Zero(1, 1));
  re[L - 1][1](0, 0) = 1.0;
  for (int i = L - 1; i > 0; --i) re[i - 1] = extend_right(re[i], A[i], w, i);

  std::vector<Penalty> pens;
  for (const auto& p : lower) {
    Penalty pen{&p, std::vector<Mat>(L), std::vector<Mat>(L)};
    pen.left[0] = Mat::Ones(1, 1);
    pen.right[L - 1] = Mat::Ones(1, 1);
    for (int i = L - 1; i > 0; --i) pen.right[i - 1] = overlap_right(pen.right[i], p.sites()[i], A[i]);
    pens.push_back(std::move(pen));
  }

  DmrgResult out;
  int chi = std::min(cfg.chi_start, cfg.chi_max);
  double last = std::numeric_limits<double>::infinity();
  std::vector<std::vector<PairBlock>> pairs(L - 1);
  for (int i = 0; i + 1 < L; ++i) pairs[i] = pair_blocks(w, i);

  auto solve_bond = [&](int i, bool to_right) {
    const Eigen::Index dl = A[i][0].rows(), dr = A[i + 1][0].cols();
    const Eigen::Index blk = dl * dr;
    const Eigen::Index n = 4 * blk;
    Eigen::VectorXd theta(n);
    for (int s1 = 0; s1 < 2; ++s1)
      for (int s2 = 0; s2 < 2; ++s2) {
        Mat t = A[i][s1] * A[i + 1][s2];
        theta.segment((s1 + 2 * s2) * blk, blk) = Eigen::Map<Eigen::VectorXd>(t.data(), blk);
      }
    const Env& L_ = le[i];
    const Env& R_ = re[i + 1];
    std::vector<Eigen::VectorXd> pvec;
    for (const auto& pen : pens) {
      const auto& ph = pen.phi->sites();
      Eigen::VectorXd v(n);
      for (int s1 = 0; s1 < 2; ++s1)
        for (int s2 = 0; s2 < 2; ++s2) {
          Mat t = pen.left[i].transpose() * ph[i][s1] * ph[i + 1][s2] * pen.right[i + 1];
          v.segment((s1 + 2 * s2) * blk, blk) = Eigen::Map<Eigen::VectorXd>(t.data(), blk);
        }
      pvec.push_back(std::move(v));
    }
    const auto& pb = pairs[i];
    RealOperator op = [&](const double* x, double* y) {
      Eigen::Map<Eigen::VectorXd> yv(y, n);
      yv.setZero();
      std::vector<std::array<Mat, 4>> lx(L_.size());
      std::vector<std::array<Mat, 4>> acc(R_.size());
      for (const auto& p : pb) {
        if (lx[p.a][0].size() == 0)
          for (int k = 0; k < 4; ++k) lx[p.a][k] = L_[p.a] * Eigen::Map<const Mat>(x + k * blk, dl, dr);
        for (int k = 0; k < 4; ++k) {
          if (acc[p.b][k].size() == 0) acc[p.b][k] = Mat::Zero(dl, dr);
          for (int t = 0; t < 4; ++t)
            if (p.op(k, t) != 0.0) acc[p.b][k] += p.op(k, t) * lx[p.a][t];
        }
      }
      for (std::size_t b = 0; b < acc.size(); ++b) {
        if (acc[b][0].size() == 0) continue;
        for (int k = 0; k < 4; ++k) {
          Eigen::Map<Mat> yk(y + k * blk, dl, dr);
          yk.noalias() += acc[b][k] * R_[b].transpose();
        }
      }
      const Eigen::Map<const Eigen::VectorXd> xv(x, n);
      for (const auto& v : pvec) yv += cfg.penalty * v.dot(xv) * v;
    };
    KrylovOptions ko;
    ko.block = 1;
    ko.max_basis = std::min<int>(24, static_cast<int>(n));
    ko.max_iterations = 40;
    ko.tol = 1e-8;
    ko.initial = theta / theta.norm();
    const Eigenpairs ev = n <= 64 ? [&] {
      Mat dense(n, n);
      Eigen::VectorXd e = Eigen::VectorXd::Zero(n), col(n);
      for (Eigen::Index j = 0; j < n; ++j) {
        e.setZero();
        e(j) = 1.0;
        op(e.data(), col.data());
        dense.col(j) = col;
      }
      Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (dense + dense.transpose()));
      Eigenpairs r;
      r.values = es.eigenvalues().head(1);
      r.vectors = es.eigenvectors().leftCols(1);
      r.converged = true;
      return r;
    }() : krylov_lowest(op, static_cast<std::size_t>(n), 1, ko);
    const Eigen::VectorXd g = ev.vectors.col(0);
    Mat m(2 * dl, 2 * dr);
    for (int s1 = 0; s1 < 2; ++s1)
      for (int s2 = 0; s2 < 2; ++s2)
        m.block(s1 * dl, s2 * dr, dl, dr) = Eigen::Map<const Mat>(g.data() + (s1 + 2 * s2) * blk, dl, dr);
    const auto svd = thin_svd(m);
    const auto& s = svd.s;
    Eigen::Index k = 0;
    while (k < s.size() && k < chi && s(k) > cfg.svd_cutoff * s(0)) ++k;
    k = std::max<Eigen::Index>(k, 1);
    const double total = s.squaredNorm();
    out.max_truncation = std::max(out.max_truncation, (total - s.head(k).squaredNorm()) / total);
    Eigen::VectorXd sk = s.head(k) / s.head(k).norm();
    Mat u = svd.u.leftCols(k);
    Mat vt = svd.v.leftCols(k).transpose();
    if (to_right) {
      vt = sk.asDiagonal() * vt;
    } else {
      u = u * sk.asDiagonal();
    }
    A[i][0] = u.topRows(dl);
    A[i][1] = u.bottomRows(dl);
    A[i + 1][0] = vt.leftCols(dr);
    A[i + 1][1] = vt.rightCols(dr);
    if (to_right) {
      le[i + 1] = extend_left(le[i], A[i], w, i);
      for (auto& pen : pens) pen.left[i + 1] = overlap_left(pen.left[i], pen.phi->sites()[i], A[i]);
    } else {
      re[i] = extend_right(re[i + 1], A[i + 1], w, i + 1);
      for (auto& pen : pens) pen.right[i] = overlap_right(pen.right[i + 1], pen.phi->sites()[i + 1], A[i + 1]);
    }
    return ev.values(0);
  };

  for (int sweep = 1; sweep <= cfg.max_sweeps; ++sweep) {
    double e = 0;
    for (int i = 0; i + 1 < L; ++i) e = solve_bond(i, true);
    for (int i = L - 2; i >= 0; --i) e = solve_bond(i, false);
    out.sweep_energies.push_back(e);
    out.sweeps = sweep;
    if (on_sweep) on_sweep(sweep, e, psi.max_bond());
    const bool at_max = chi >= cfg.chi_max;
    if (at_max && sweep >= cfg.min_sweeps && std::abs(e - last) < cfg.energy_tol) {
      out.converged = true;
      break;
    }
    last = e;
    chi = std::min(cfg.chi_max, 2 * chi);
  }
  out.energy = expectation(psi, w);
  out.state = std::move(psi);
  return out;
}

DmrgResult dmrg_ground(const PauliSum& h, const DmrgConfig& cfg) { return dmrg(h, {}, cfg); }

std::vector<DmrgResult> dmrg_lowest(const PauliSum& h, int n, const DmrgConfig& cfg) {
  std::vector<DmrgResult> out;
  std::vector<Mps> found;
  for (int k = 0; k < n; ++k) {
    DmrgConfig c = cfg;
    c.seed = cfg.seed + static_cast<std::uint64_t>(k);
    out.push_back(dmrg(h, found, c));
    found.push_back(out.back().state);
  }
  return out;
}

}  // namespace gspt
