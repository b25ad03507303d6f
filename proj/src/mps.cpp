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

#include "gspt/mps.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <cstring>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "gspt/rng.hpp"

namespace gspt {

namespace {

using Mat = Eigen::MatrixXd;

Mat thin_q(const Mat& m) {
  Eigen::HouseholderQR<Mat> qr(m);
  const Eigen::Index k = std::min(m.rows(), m.cols());
  return qr.householderQ() * Mat::Identity(m.rows(), k);
}

// Returns (Q, R) with m = Q R and Q having orthonormal columns.
std::pair<Mat, Mat> qr_split(const Mat& m) {
  Eigen::HouseholderQR<Mat> qr(m);
  const Eigen::Index k = std::min(m.rows(), m.cols());
  Mat q = qr.householderQ() * Mat::Identity(m.rows(), k);
  Mat r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  return {std::move(q), std::move(r)};
}

Mat stack_vertical(const Mps::Site& a) {
  Mat m(2 * a[0].rows(), a[0].cols());
  m << a[0], a[1];
  return m;
}

Mat stack_horizontal(const Mps::Site& a) {
  Mat m(a[0].rows(), 2 * a[0].cols());
  m << a[0], a[1];
  return m;
}

struct Truncated {
  Mat u;
  Eigen::VectorXd s;
  Mat vt;
  double discarded = 0.0;
};

}  // namespace

ThinSvd thin_svd(const Eigen::MatrixXd& m) {
  ThinSvd r;
  {
    Eigen::BDCSVD<Mat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    r.s = svd.singularValues();
    r.u = svd.matrixU();
    r.v = svd.matrixV();
  }
  // Eigen 3.4.0 divide and conquer can lose accuracy on degenerate spectra.
  if ((r.u * r.s.asDiagonal() * r.v.transpose() - m).norm() > 1e-11 * std::max(1.0, m.norm())) {
    Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    r.s = svd.singularValues();
    r.u = svd.matrixU();
    r.v = svd.matrixV();
  }
  return r;
}

namespace {

Truncated truncated_svd(const Mat& m, int chi_max, double cutoff) {
  const auto [u, s, v] = thin_svd(m);
  const double total = s.squaredNorm();
  Eigen::Index k = 0;
  while (k < s.size() && k < chi_max && s(k) > cutoff * s(0)) ++k;
  k = std::max<Eigen::Index>(k, 1);
  Truncated t;
  t.u = u.leftCols(k);
  t.s = s.head(k);
  t.vt = v.leftCols(k).transpose();
  t.discarded = total > 0 ? (total - t.s.squaredNorm()) / total : 0.0;
  return t;
}

Eigen::Matrix2d real_pauli(Pauli p) {
  Eigen::Matrix2d m;
  switch (p) {
    case Pauli::I: m << 1, 0, 0, 1; break;
    case Pauli::X: m << 0, 1, 1, 0; break;
    case Pauli::Z: m << 1, 0, 0, -1; break;
    case Pauli::Y: m << 0, -1, 1, 0; break;  // Y = i * this
  }
  return m;
}

Eigen::Matrix2d y_rotation(double theta) {
  Eigen::Matrix2d m;
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  m << c, -s, s, c;
  return m;
}

}  // namespace

Mps::Mps(int num_sites) {
  if (num_sites < 1) throw std::invalid_argument("MPS needs at least one site");
  sites_.resize(num_sites);
  for (auto& s : sites_) {
    s[0] = Mat::Ones(1, 1);
    s[1] = Mat::Zero(1, 1);
  }
}

Mps::Mps(std::vector<Site> sites, Complex phase) : sites_(std::move(sites)), phase_(phase) {
  if (sites_.empty()) throw std::invalid_argument("MPS needs at least one site");
  for (std::size_t i = 0; i < sites_.size(); ++i) {
    const auto& s = sites_[i];
    if (s[0].rows() != s[1].rows() || s[0].cols() != s[1].cols())
      throw std::invalid_argument("MPS site tensor blocks differ in shape");
    if (i + 1 < sites_.size() && s[0].cols() != sites_[i + 1][0].rows())
      throw std::invalid_argument("MPS bond dimensions do not match at bond " + std::to_string(i + 1));
  }
  if (sites_.front()[0].rows() != 1 || sites_.back()[0].cols() != 1)
    throw std::invalid_argument("MPS boundary bonds must have dimension 1");
}

Mps Mps::from_dense(const Eigen::VectorXd& v, int num_sites, int chi_max) {
  if (v.size() != (Eigen::Index{1} << num_sites)) throw std::invalid_argument("dense vector size mismatch");
  std::vector<Site> sites(num_sites);
  Mat t = v.transpose();  // Dl x remaining
  double disc = 0;
  for (int i = 0; i < num_sites - 1; ++i) {
    const Eigen::Index dl = t.rows(), rest = t.cols() / 2;
    Mat m(2 * dl, rest);
    for (Eigen::Index l = 0; l < dl; ++l)
      for (Eigen::Index r = 0; r < rest; ++r) {
        m(l, r) = t(l, 2 * r);
        m(l + dl, r) = t(l, 2 * r + 1);
      }
    auto tr = truncated_svd(m, chi_max, 1e-15);
    disc += tr.discarded;
    sites[i][0] = tr.u.topRows(dl);
    sites[i][1] = tr.u.bottomRows(dl);
    t = tr.s.asDiagonal() * tr.vt;
  }
  sites[num_sites - 1][0] = t.col(0);
  sites[num_sites - 1][1] = t.col(1);
  Mps out(std::move(sites));
  out.trunc_err_ = disc;
  return out;
}

Mps Mps::random(int num_sites, int chi, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<int> dims(num_sites + 1, 1);
  for (int b = 1; b < num_sites; ++b) {
    const int cap = std::min(b, num_sites - b);
    dims[b] = cap >= 30 ? chi : std::min(chi, 1 << cap);
  }
  std::vector<Site> sites(num_sites);
  for (int i = 0; i < num_sites; ++i)
    for (auto& m : sites[i]) {
      m.resize(dims[i], dims[i + 1]);
      for (Eigen::Index k = 0; k < m.size(); ++k) m.data()[k] = uniform(rng, -1.0, 1.0);
    }
  Mps out(std::move(sites));
  out.canonicalize(0);
  return out;
}

std::vector<int> Mps::bond_dims() const {
  std::vector<int> d;
  for (int i = 0; i + 1 < num_sites(); ++i) d.push_back(static_cast<int>(sites_[i][0].cols()));
  return d;
}

int Mps::max_bond() const {
  int m = 1;
  for (int d : bond_dims()) m = std::max(m, d);
  return m;
}

double Mps::norm() const { return std::sqrt(std::abs(overlap(*this, *this))); }

void Mps::canonicalize(int center) {
  const int L = num_sites();
  if (center < 0 || center >= L) throw std::out_of_range("canonical center outside chain");
  for (int i = 0; i < center; ++i) {
    auto [q, r] = qr_split(stack_vertical(sites_[i]));
    const Eigen::Index dl = sites_[i][0].rows();
    sites_[i][0] = q.topRows(dl);
    sites_[i][1] = q.bottomRows(dl);
    for (auto& m : sites_[i + 1]) m = (r * m).eval();
  }
  for (int i = L - 1; i > center; --i) {
    auto [q, r] = qr_split(stack_horizontal(sites_[i]).transpose());
    const Eigen::Index dr = sites_[i][0].cols();
    const Mat qt = q.transpose();
    sites_[i][0] = qt.leftCols(dr);
    sites_[i][1] = qt.rightCols(dr);
    for (auto& m : sites_[i - 1]) m = (m * r.transpose()).eval();
  }
  const double n = std::sqrt(sites_[center][0].squaredNorm() + sites_[center][1].squaredNorm());
  if (n == 0) throw std::domain_error("MPS has zero norm");
  for (auto& m : sites_[center]) m /= n;
}

void Mps::compress(int chi_max, double cutoff) {
  const int L = num_sites();
  canonicalize(L - 1);
  for (int i = L - 1; i > 0; --i) {
    auto t = truncated_svd(stack_horizontal(sites_[i]), chi_max, cutoff);
    trunc_err_ += t.discarded;
    t.s /= t.s.norm();
    const Eigen::Index dr = sites_[i][0].cols();
    sites_[i][0] = t.vt.leftCols(dr);
    sites_[i][1] = t.vt.rightCols(dr);
    const Mat us = t.u * t.s.asDiagonal();
    for (auto& m : sites_[i - 1]) m = (m * us).eval();
  }
}

void Mps::apply_single(int site, const Eigen::Matrix2d& g) {
  auto& a = sites_.at(site);
  const Mat a0 = a[0], a1 = a[1];
  a[0] = g(0, 0) * a0 + g(0, 1) * a1;
  a[1] = g(1, 0) * a0 + g(1, 1) * a1;
}

void Mps::apply_cz(int a, int b) {
  if (a > b) std::swap(a, b);
  if (a == b || a < 0 || b >= num_sites()) throw std::invalid_argument("invalid CZ pair for MPS");
  if (b == a + 1) {
    auto& x = sites_[a];
    auto& y = sites_[b];
    const Eigen::Index dl = x[0].rows(), dr = y[0].cols();
    Mat theta(2 * dl, 2 * dr);
    for (int s1 = 0; s1 < 2; ++s1)
      for (int s2 = 0; s2 < 2; ++s2)
        theta.block(s1 * dl, s2 * dr, dl, dr) = (s1 & s2 ? -1.0 : 1.0) * x[s1] * y[s2];
    auto t = truncated_svd(theta, 1 << 30, 1e-15);
    trunc_err_ += t.discarded;
    const Mat svt = t.s.asDiagonal() * t.vt;
    x[0] = t.u.topRows(dl);
    x[1] = t.u.bottomRows(dl);
    y[0] = svt.leftCols(dr);
    y[1] = svt.rightCols(dr);
    return;
  }
  // CZ = sum_k |k><k|_a (x) Z_b^k, carried along the chain on a doubled bond.
  for (int i = a; i <= b; ++i) {
    auto& s = sites_[i];
    const Eigen::Index r = s[0].rows(), c = s[0].cols();
    for (int p = 0; p < 2; ++p) {
      Mat m;
      if (i == a) {
        m = Mat::Zero(r, 2 * c);
        m.block(0, p * c, r, c) = s[p];
      } else if (i == b) {
        m.resize(2 * r, c);
        m << s[p], (p ? -1.0 : 1.0) * s[p];
      } else {
        m = Mat::Zero(2 * r, 2 * c);
        m.topLeftCorner(r, c) = s[p];
        m.bottomRightCorner(r, c) = s[p];
      }
      s[p] = std::move(m);
    }
  }
}

void Mps::apply_layer(const Layer& layer, int chi_max) {
  if (const auto* y = std::get_if<YLayer>(&layer)) {
    for (int i = 0; i < num_sites(); ++i)
      if (y->angles[i] != 0.0) apply_single(i, y_rotation(y->angles[i]));
  } else if (const auto* cz = std::get_if<CZLayer>(&layer)) {
    for (const auto& [a, b] : cz->pairs) apply_cz(a, b);
    compress(chi_max);
  } else {
    const auto& p = std::get<PauliLayer>(layer);
    for (int i = 0; i < num_sites(); ++i) {
      if (p.ops[i] == Pauli::I) continue;
      apply_single(i, real_pauli(p.ops[i]));
      if (p.ops[i] == Pauli::Y) phase_ *= Complex(0.0, 1.0);
    }
  }
}

void Mps::apply(const Circuit& c, int chi_max) {
  if (c.num_sites() != num_sites()) throw std::invalid_argument("circuit width differs from MPS");
  for (const auto& l : c.layers()) apply_layer(l, chi_max);
}

std::vector<double> Mps::schmidt_values(int bond) const {
  if (bond < 1 || bond >= num_sites()) throw std::out_of_range("bond outside chain");
  Mps tmp = *this;
  tmp.canonicalize(bond);
  Eigen::BDCSVD<Mat> svd(stack_horizontal(tmp.sites_[bond]));
  const auto& s = svd.singularValues();
  return std::vector<double>(s.data(), s.data() + s.size());
}

Eigen::VectorXd Mps::to_dense() const {
  const int L = num_sites();
  if (L > kDensePureLimit) throw std::invalid_argument("MPS too long for a dense vector");
  Mat cur = Mat::Ones(1, 1);  // rows: basis index of sites < i
  for (int i = 0; i < L; ++i) {
    Mat next(2 * cur.rows(), sites_[i][0].cols());
    next.topRows(cur.rows()) = cur * sites_[i][0];
    next.bottomRows(cur.rows()) = cur * sites_[i][1];
    cur = std::move(next);
  }
  return cur.col(0);
}

void Mps::save(std::ostream& os) const {
  const char magic[8] = {'G', 'S', 'P', 'T', 'M', 'P', 'S', '\0'};
  const std::uint32_t version = 1, L = static_cast<std::uint32_t>(num_sites());
  os.write(magic, 8);
  os.write(reinterpret_cast<const char*>(&version), 4);
  os.write(reinterpret_cast<const char*>(&L), 4);
  const double ph[2] = {phase_.real(), phase_.imag()};
  os.write(reinterpret_cast<const char*>(ph), sizeof ph);
  for (const auto& s : sites_) {
    const std::uint32_t dims[2] = {static_cast<std::uint32_t>(s[0].rows()), static_cast<std::uint32_t>(s[0].cols())};
    os.write(reinterpret_cast<const char*>(dims), sizeof dims);
    for (const auto& m : s) os.write(reinterpret_cast<const char*>(m.data()), sizeof(double) * m.size());
  }
  if (!os) throw std::runtime_error("failed to write MPS checkpoint");
}

Mps Mps::load(std::istream& is) {
  char magic[8];
  std::uint32_t version = 0, L = 0;
  is.read(magic, 8);
  if (!is || std::memcmp(magic, "GSPTMPS", 8) != 0) throw std::runtime_error("not an MPS checkpoint");
  is.read(reinterpret_cast<char*>(&version), 4);
  if (version != 1) throw std::runtime_error("unsupported MPS checkpoint version " + std::to_string(version));
  is.read(reinterpret_cast<char*>(&L), 4);
  double ph[2];
  is.read(reinterpret_cast<char*>(ph), sizeof ph);
  std::vector<Site> sites(L);
  for (auto& s : sites) {
    std::uint32_t dims[2];
    is.read(reinterpret_cast<char*>(dims), sizeof dims);
    for (auto& m : s) {
      m.resize(dims[0], dims[1]);
      is.read(reinterpret_cast<char*>(m.data()), sizeof(double) * m.size());
    }
  }
  if (!is) throw std::runtime_error("truncated MPS checkpoint");
  return Mps(std::move(sites), Complex(ph[0], ph[1]));
}

Complex overlap(const Mps& a, const Mps& b) {
  if (a.num_sites() != b.num_sites()) throw std::invalid_argument("overlap of MPS with different lengths");
  Mat e = Mat::Ones(1, 1);
  for (int i = 0; i < a.num_sites(); ++i) {
    const auto& x = a.sites()[i];
    const auto& y = b.sites()[i];
    e = x[0].transpose() * e * y[0] + x[1].transpose() * e * y[1];
  }
  return std::conj(a.phase()) * b.phase() * e(0, 0);
}

// ---------------------------------------------------------------------------

Mpo::Mpo(const PauliSum& op) {
  if (!op.is_real_matrix()) throw std::invalid_argument("MPO needs a real computational-basis matrix");
  const int L = op.num_sites();
  // Channel ids per bond k (between sites k and k+1); 0 = not started, 1 = done.
  std::vector<std::map<std::pair<int, std::vector<Pauli>>, int>> channels(L);
  std::vector<std::map<std::pair<int, int>, Eigen::Matrix2d>> blocks(L);
  auto add = [&](int site, int a, int b, const Eigen::Matrix2d& m, bool accumulate) {
    auto [it, fresh] = blocks[site].try_emplace({a, b}, m);
    if (!fresh && accumulate) it->second += m;
  };
  auto channel = [&](int bond, int first, const std::vector<Pauli>& ops) {
    auto& ch = channels[bond];
    auto [it, fresh] = ch.try_emplace({first, ops}, static_cast<int>(ch.size()) + 2);
    return it->second;
  };

  for (const auto& t : op.terms()) {
    Complex c = t.coefficient();
    for (int k = 0; k < t.y_count(); ++k) c *= Complex(0.0, 1.0);
    const double cr = c.real();
    if (t.is_identity()) {
      // Spread over site 0 as a scalar.
      add(0, 0, 1, cr * Eigen::Matrix2d::Identity(), true);
      continue;
    }
    const int f = t.factors().front().first, g = t.factors().back().first;
    if (f == g) {
      add(f, 0, 1, cr * real_pauli(t.factors().front().second), true);
      continue;
    }
    std::vector<Pauli> prefix;
    int prev = 0;
    for (int k = f; k <= g; ++k) {
      const Pauli p = t.at(k);
      if (k == g) {
        add(k, prev, 1, cr * real_pauli(p), true);
        break;
      }
      prefix.push_back(p);
      const int ch = channel(k, f, prefix);
      add(k, prev, ch, real_pauli(p), false);
      prev = ch;
    }
  }
  left_.resize(L);
  right_.resize(L);
  blocks_.resize(L);
  for (int i = 0; i < L; ++i) {
    left_[i] = i == 0 ? 2 : 2 + static_cast<int>(channels[i - 1].size());
    right_[i] = 2 + static_cast<int>(channels[i].size());
    if (i == L - 1) right_[i] = 2;
    blocks_[i].push_back({0, 0, Eigen::Matrix2d::Identity()});
    blocks_[i].push_back({1, 1, Eigen::Matrix2d::Identity()});
    for (const auto& [ab, m] : blocks[i]) blocks_[i].push_back({ab.first, ab.second, m});
  }
}

int Mpo::max_bond() const {
  int m = 0;
  for (int r : right_) m = std::max(m, r);
  return m;
}

double expectation(const Mps& psi, const Mpo& h) {
  if (psi.num_sites() != h.num_sites()) throw std::invalid_argument("MPO and MPS lengths differ");
  std::vector<Mat> env(2, Mat::Zero(1, 1));
  env[0](0, 0) = 1.0;
  for (int i = 0; i < psi.num_sites(); ++i) {
    const auto& a = psi.sites()[i];
    const Eigen::Index d = a[0].cols();
    std::vector<Mat> next(h.right_dim(i), Mat::Zero(d, d));
    std::vector<std::array<Mat, 2>> ea(env.size());
    for (const auto& blk : h.blocks(i)) {
      if (ea[blk.a][0].size() == 0)
        for (int s = 0; s < 2; ++s) ea[blk.a][s] = env[blk.a] * a[s];
      for (int s = 0; s < 2; ++s) {
        Mat acc = Mat::Zero(env[blk.a].rows(), d);
        bool any = false;
        for (int sp = 0; sp < 2; ++sp)
          if (blk.op(s, sp) != 0.0) {
            acc += blk.op(s, sp) * ea[blk.a][sp];
            any = true;
          }
        if (any) next[blk.b] += a[s].transpose() * acc;
      }
    }
    env = std::move(next);
  }
  return env[1](0, 0);
}

double expectation(const Mps& psi, const PauliSum& h) { return expectation(psi, Mpo(h)); }

Mps apply_circuit_mps(const Circuit& c, int chi_max) {
  Mps psi(c.num_sites());
  psi.apply(c, chi_max);
  return psi;
}

// ---------------------------------------------------------------------------

Eigen::MatrixXd reduced_density(const Mps& psi, int first, int count) {
  if (count < 1 || count > 12) throw std::invalid_argument("subsystem must have 1..12 sites");
  if (first < 0 || first + count > psi.num_sites()) throw std::out_of_range("subsystem outside chain");
  Mps tmp = psi;
  tmp.canonicalize(first);
  // Psi(l, s, r) with left and right environments equal to the identity.
  const auto& s0 = tmp.sites()[first];
  const Eigen::Index dl = s0[0].rows();
  std::vector<Mat> block{s0[0], s0[1]};  // index: configuration of sites first..
  for (int k = 1; k < count; ++k) {
    const auto& a = tmp.sites()[first + k];
    std::vector<Mat> next(block.size() * 2);
    for (std::size_t conf = 0; conf < block.size(); ++conf)
      for (int s = 0; s < 2; ++s) next[conf + (static_cast<std::size_t>(s) << k)] = block[conf] * a[s];
    block = std::move(next);
  }
  const Eigen::Index n = static_cast<Eigen::Index>(block.size());
  const Eigen::Index dr = block[0].cols();
  Mat flat(n, dl * dr);
  for (Eigen::Index conf = 0; conf < n; ++conf) flat.row(conf) = Eigen::Map<const Eigen::RowVectorXd>(block[conf].data(), dl * dr);
  return flat * flat.transpose();
}

Eigen::MatrixXcd reduced_density(const StateVector& psi, std::span<const int> sites) {
  const int L = psi.num_sites();
  const int n = static_cast<int>(sites.size());
  if (n < 1 || n > 12) throw std::invalid_argument("subsystem must have 1..12 sites");
  std::uint64_t mask = 0;
  for (int s : sites) {
    if (s < 0 || s >= L || (mask >> s & 1)) throw std::invalid_argument("invalid subsystem site list");
    mask |= std::uint64_t{1} << s;
  }
  std::vector<int> rest;
  for (int i = 0; i < L; ++i)
    if (!(mask >> i & 1)) rest.push_back(i);
  const Eigen::Index da = Eigen::Index{1} << n, db = Eigen::Index{1} << rest.size();
  Eigen::MatrixXcd m(da, db);
  const auto& amp = psi.amplitudes();
  for (std::size_t idx = 0; idx < amp.size(); ++idx) {
    Eigen::Index a = 0, b = 0;
    for (int k = 0; k < n; ++k) a |= static_cast<Eigen::Index>(idx >> sites[k] & 1) << k;
    for (std::size_t k = 0; k < rest.size(); ++k) b |= static_cast<Eigen::Index>(idx >> rest[k] & 1) << k;
    m(a, b) = amp[idx];
  }
  return m * m.adjoint();
}

std::vector<double> entanglement_spectrum(const Eigen::MatrixXcd& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
  std::vector<double> xi;
  for (Eigen::Index i = es.eigenvalues().size() - 1; i >= 0; --i)
    if (es.eigenvalues()(i) > 1e-12) xi.push_back(-std::log(es.eigenvalues()(i)));
  return xi;
}

std::vector<double> entanglement_spectrum(const Eigen::MatrixXd& rho) {
  return entanglement_spectrum(Eigen::MatrixXcd(rho.cast<Complex>()));
}

std::vector<double> entanglement_entropies(const Mps& psi) {
  Mps tmp = psi;
  tmp.canonicalize(0);
  auto& sites = tmp.sites();
  std::vector<double> out;
  for (int l = 1; l < tmp.num_sites(); ++l) {
    auto& a = sites[l - 1];
    const Eigen::Index dl = a[0].rows();
    const auto svd = thin_svd(stack_vertical(a));
    const auto& s = svd.s;
    double entropy = 0;
    const double total = s.squaredNorm();
    for (Eigen::Index k = 0; k < s.size(); ++k) {
      const double p = s(k) * s(k) / total;
      if (p > 1e-16) entropy -= p * std::log(p);
    }
    out.push_back(entropy);
    const Mat& u = svd.u;
    a[0] = u.topRows(dl);
    a[1] = u.bottomRows(dl);
    const Mat svt = s.asDiagonal() * svd.v.transpose();
    for (auto& m : sites[l]) m = (svt * m).eval();
  }
  return out;
}

CentralChargeFit fit_central_charge(std::span<const double> entropies, int L, Boundary boundary) {
  if (static_cast<int>(entropies.size()) != L - 1) throw std::invalid_argument("expected L-1 entropies");
  std::vector<double> xs, ys;
  for (int l = 3; l <= L - 3; ++l) {
    const double chord = std::sin(std::numbers::pi * l / L) * L / std::numbers::pi;
    xs.push_back(boundary == Boundary::Periodic ? std::log(chord) / 3.0 : std::log(2.0 * chord) / 6.0);
    ys.push_back(entropies[l - 1]);
  }
  if (xs.size() < 4) throw std::invalid_argument("central-charge fit needs at least 4 points in 3 <= l <= L-3");
  const Eigen::Index n = static_cast<Eigen::Index>(xs.size());
  Mat m(n, 2);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    m(i, 0) = xs[i];
    m(i, 1) = 1.0;
    y(i) = ys[i];
  }
  const Eigen::Vector2d sol = m.colPivHouseholderQr().solve(y);
  CentralChargeFit fit;
  fit.c = sol(0);
  fit.offset = sol(1);
  fit.rms = std::sqrt((m * sol - y).squaredNorm() / static_cast<double>(n));
  fit.points = static_cast<int>(n);
  return fit;
}

}  // namespace gspt
