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

#include "gspt/eht.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "gspt/ed.hpp"
#include "gspt/mps.hpp"
#include "gspt/rng.hpp"

namespace gspt {

namespace {

using Mask = std::uint64_t;

int sign_of(Mask j, int k) { return (j >> k) & 1U ? -1 : 1; }

void check_window(int n) {
  if (n < 2 || n > 12) throw std::invalid_argument("window size must be in [2, 12], got " + std::to_string(n));
}

// Unnormalized Walsh-Hadamard transform in place.
void wht(double* v, std::size_t dim) {
  for (std::size_t h = 1; h < dim; h <<= 1)
    for (std::size_t i = 0; i < dim; i += 2 * h)
      for (std::size_t j = i; j < i + h; ++j) {
        const double a = v[j], b = v[j + h];
        v[j] = a + b;
        v[j + h] = a - b;
      }
}

// Re(i^k) for k = number of Y factors.
double y_phase(Mask x, Mask z) {
  switch (std::popcount(x & z) & 3) {
    case 0: return 1.0;
    case 2: return -1.0;
    default: return 0.0;
  }
}

// E[(x << n) | z] = <sigma(x, z)> for the Hermitian Pauli string with
// X-part x and Z-part z.
template <typename Matrix>
std::vector<double> pauli_expectations(const Matrix& rho, int n) {
  const std::size_t dim = std::size_t{1} << n;
  std::vector<double> e(dim * dim);
  std::vector<double> re(dim), im(dim);
  for (Mask x = 0; x < dim; ++x) {
    for (Mask j = 0; j < dim; ++j) {
      const auto v = rho(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j ^ x));
      re[j] = std::real(v);
      im[j] = std::imag(v);
    }
    wht(re.data(), dim);
    wht(im.data(), dim);
    for (Mask z = 0; z < dim; ++z) {
      // i^k * (re + i im), real part.
      double val = 0.0;
      switch (std::popcount(x & z) & 3) {
        case 0: val = re[z]; break;
        case 1: val = -im[z]; break;
        case 2: val = -re[z]; break;
        case 3: val = im[z]; break;
      }
      e[(x << n) | z] = val;
    }
  }
  return e;
}

struct SettingMasks {
  Mask x = 0, z = 0;
};

std::vector<SettingMasks> setting_masks(const WindowData& d) {
  std::vector<SettingMasks> out;
  out.reserve(d.bases.size());
  for (const auto& b : d.bases) {
    SettingMasks m;
    for (int k = 0; k < static_cast<int>(b.size()); ++k) {
      const auto code = static_cast<unsigned>(b[k]);
      if (code & 1U) m.x |= Mask{1} << k;
      if (code & 2U) m.z |= Mask{1} << k;
    }
    out.push_back(m);
  }
  return out;
}

std::vector<Eigen::VectorXd> probabilities_from_expectations(const std::vector<double>& e, int n,
                                                              const WindowData& d) {
  const std::size_t dim = std::size_t{1} << n;
  const double scale = 1.0 / static_cast<double>(dim);
  std::vector<Eigen::VectorXd> out;
  out.reserve(d.bases.size());
  for (const auto& m : setting_masks(d)) {
    Eigen::VectorXd p(dim);
    for (Mask t = 0; t < dim; ++t) p[t] = e[((t & m.x) << n) | (t & m.z)];
    wht(p.data(), dim);
    out.push_back(p * scale);
  }
  return out;
}

void validate_data(const WindowData& d) {
  const int n = d.num_sites();
  check_window(n);
  if (d.bases.size() != d.probs.size()) throw std::invalid_argument("window data: bases and probs differ in length");
  const auto dim = Eigen::Index{1} << n;
  for (std::size_t a = 0; a < d.bases.size(); ++a) {
    if (static_cast<int>(d.bases[a].size()) != n) throw std::invalid_argument("window data: basis width mismatch");
    if (d.probs[a].size() != dim) throw std::invalid_argument("window data: distribution size mismatch");
  }
}

Eigen::MatrixXd dense_hamiltonian(const EntHamCoeffs& b) {
  const int n = b.num_sites();
  const Mask dim = Mask{1} << n;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (Mask j = 0; j < dim; ++j) {
    double diag = 0.0;
    for (int k = 0; k + 1 < n; ++k) diag -= b.zz[k] * sign_of(j, k) * sign_of(j, k + 1);
    h(j, j) = diag;
    for (int m = 0; m < n; ++m) {
      double off = -b.x[m];
      if (m >= 1 && m + 1 < n) off -= b.zxz[m - 1] * sign_of(j, m - 1) * sign_of(j, m + 1);
      h(j ^ (Mask{1} << m), j) += off;
    }
  }
  return h;
}

// Gradient of Tr(M dH) over the coefficients, with dH/db = -O.
Eigen::VectorXd coefficient_gradient(const Eigen::MatrixXd& m, int n) {
  const Mask dim = Mask{1} << n;
  EntHamCoeffs g = EntHamCoeffs::zeros(n);
  for (Mask j = 0; j < dim; ++j) {
    for (int k = 0; k + 1 < n; ++k) g.zz[k] -= m(j, j) * sign_of(j, k) * sign_of(j, k + 1);
    for (int s = 0; s < n; ++s) {
      const double v = m(j, j ^ (Mask{1} << s));
      g.x[s] -= v;
      if (s >= 1 && s + 1 < n) g.zxz[s - 1] -= v * sign_of(j, s - 1) * sign_of(j, s + 1);
    }
  }
  return g.to_vector();
}

double loss_of(const std::vector<Eigen::VectorXd>& model, const WindowData& d) {
  double s = 0.0;
  for (std::size_t a = 0; a < model.size(); ++a) s += (model[a] - d.probs[a]).squaredNorm();
  return s;
}

}  // namespace

EntHamCoeffs EntHamCoeffs::zeros(int n) {
  check_window(n);
  return EntHamCoeffs{std::vector<double>(n - 1, 0.0), std::vector<double>(n - 2, 0.0), std::vector<double>(n, 0.0)};
}

int eht_parameter_count(int n) { return 3 * n - 3; }

EntHamCoeffs EntHamCoeffs::from_vector(int n, const Eigen::VectorXd& v) {
  if (v.size() != eht_parameter_count(n)) throw std::invalid_argument("coefficient vector has the wrong length");
  EntHamCoeffs b = zeros(n);
  int k = 0;
  for (auto& c : b.zz) c = v[k++];
  for (auto& c : b.zxz) c = v[k++];
  for (auto& c : b.x) c = v[k++];
  return b;
}

Eigen::VectorXd EntHamCoeffs::to_vector() const {
  Eigen::VectorXd v(zz.size() + zxz.size() + x.size());
  int k = 0;
  for (double c : zz) v[k++] = c;
  for (double c : zxz) v[k++] = c;
  for (double c : x) v[k++] = c;
  return v;
}

PauliSum entanglement_hamiltonian(const EntHamCoeffs& b) {
  const int n = b.num_sites();
  std::vector<PauliTerm> terms;
  for (int k = 0; k + 1 < n; ++k) terms.emplace_back(-b.zz[k], std::vector<PauliTerm::Factor>{{k, Pauli::Z}, {k + 1, Pauli::Z}});
  for (int k = 1; k + 1 < n; ++k)
    terms.emplace_back(-b.zxz[k - 1],
                       std::vector<PauliTerm::Factor>{{k - 1, Pauli::Z}, {k, Pauli::X}, {k + 1, Pauli::Z}});
  for (int k = 0; k < n; ++k) terms.push_back(PauliTerm::single(k, Pauli::X, -b.x[k]));
  return PauliSum(n, std::move(terms), true);
}

Eigen::MatrixXd eht_density(const EntHamCoeffs& b) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense_hamiltonian(b));
  const Eigen::VectorXd& lam = es.eigenvalues();
  Eigen::VectorXd w = (-(lam.array() - lam[0])).exp();
  w /= w.sum();
  return es.eigenvectors() * w.asDiagonal() * es.eigenvectors().transpose();
}

Eigen::MatrixXd eht_density_truncated(const EntHamCoeffs& b, int keep) {
  const int n = b.num_sites();
  const int dim = 1 << n;
  keep = std::min(keep, dim);
  Eigen::VectorXd lam;
  Eigen::MatrixXd vec;
  if (dim <= 1024) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense_hamiltonian(b));
    lam = es.eigenvalues().head(keep);
    vec = es.eigenvectors().leftCols(keep);
  } else {
    KrylovOptions ko;
    ko.tol = 1e-10;
    const Eigenpairs ep = lowest_eigenpairs(entanglement_hamiltonian(b), keep, ko);
    lam = ep.values;
    vec = ep.vectors;
  }
  Eigen::VectorXd w = (-(lam.array() - lam[0])).exp();
  w /= w.sum();
  return vec * w.asDiagonal() * vec.transpose();
}

std::vector<std::vector<Pauli>> random_settings(int L, int count, std::uint64_t seed) {
  Rng rng(seed);
  constexpr Pauli kChoices[3] = {Pauli::X, Pauli::Y, Pauli::Z};
  std::vector<std::vector<Pauli>> out(count, std::vector<Pauli>(L));
  for (auto& s : out)
    for (auto& p : s) p = kChoices[uniform_index(rng, 3)];
  return out;
}

namespace {

template <typename Matrix>
WindowData window_data_impl(const Matrix& rho, std::span<const int> sites,
                            const std::vector<std::vector<Pauli>>& settings) {
  WindowData d;
  d.sites.assign(sites.begin(), sites.end());
  const int n = d.num_sites();
  check_window(n);
  if (rho.rows() != (Eigen::Index{1} << n) || rho.cols() != rho.rows())
    throw std::invalid_argument("density matrix does not match the window size");
  for (const auto& s : settings) {
    std::vector<Pauli> b(n);
    for (int k = 0; k < n; ++k) {
      if (sites[k] < 0 || sites[k] >= static_cast<int>(s.size())) throw std::out_of_range("window site outside setting");
      b[k] = s[sites[k]];
    }
    d.bases.push_back(std::move(b));
  }
  d.probs = probabilities_from_expectations(pauli_expectations(rho, n), n, d);
  return d;
}

}  // namespace

WindowData window_data_exact(const Eigen::MatrixXcd& rho, std::span<const int> sites,
                             const std::vector<std::vector<Pauli>>& settings) {
  return window_data_impl(rho, sites, settings);
}

WindowData window_data_exact(const Eigen::MatrixXd& rho, std::span<const int> sites,
                             const std::vector<std::vector<Pauli>>& settings) {
  return window_data_impl(rho, sites, settings);
}

WindowData window_data_from_counts(std::span<const int> sites, const std::vector<std::vector<Pauli>>& settings,
                                   const std::vector<Histogram>& counts) {
  if (settings.size() != counts.size()) throw std::invalid_argument("one histogram per setting expected");
  WindowData d;
  d.sites.assign(sites.begin(), sites.end());
  const int n = d.num_sites();
  check_window(n);
  for (std::size_t a = 0; a < settings.size(); ++a) {
    std::vector<Pauli> b(n);
    for (int k = 0; k < n; ++k) b[k] = settings[a].at(sites[k]);
    d.bases.push_back(std::move(b));
    Eigen::VectorXd p = Eigen::VectorXd::Zero(Eigen::Index{1} << n);
    long total = 0;
    for (const auto& [key, c] : counts[a]) {
      Mask s = 0;
      for (int k = 0; k < n; ++k) s |= ((key >> sites[k]) & 1U) << k;
      p[static_cast<Eigen::Index>(s)] += static_cast<double>(c);
      total += c;
    }
    if (total <= 0) throw std::invalid_argument("empty histogram for setting " + std::to_string(a));
    d.probs.push_back(p / static_cast<double>(total));
  }
  return d;
}

std::vector<Histogram> shuffle_correlations(const std::vector<Histogram>& counts, int L, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Histogram> out;
  out.reserve(counts.size());
  for (const auto& h : counts) {
    std::vector<Mask> shots;
    for (const auto& [key, c] : h) shots.insert(shots.end(), static_cast<std::size_t>(c), key);
    std::vector<Mask> mixed(shots.size(), 0);
    std::vector<std::size_t> perm(shots.size());
    for (int site = 0; site < L; ++site) {
      std::iota(perm.begin(), perm.end(), std::size_t{0});
      std::shuffle(perm.begin(), perm.end(), rng);
      for (std::size_t i = 0; i < shots.size(); ++i) mixed[i] |= ((shots[perm[i]] >> site) & 1U) << site;
    }
    Histogram m;
    for (Mask k : mixed) ++m[k];
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<Eigen::VectorXd> model_probabilities(const Eigen::MatrixXd& rho, const WindowData& data) {
  validate_data(data);
  const int n = data.num_sites();
  return probabilities_from_expectations(pauli_expectations(rho, n), n, data);
}

double eht_loss(const EntHamCoeffs& b, const WindowData& data) {
  return loss_of(model_probabilities(eht_density(b), data), data);
}

double eht_loss_truncated(const EntHamCoeffs& b, const WindowData& data, int keep) {
  return loss_of(model_probabilities(eht_density_truncated(b, keep), data), data);
}

double eht_loss_and_gradient(const EntHamCoeffs& b, const WindowData& data, Eigen::VectorXd* grad) {
  validate_data(data);
  const int n = data.num_sites();
  if (b.num_sites() != n) throw std::invalid_argument("coefficients and data differ in window size");
  const std::size_t dim = std::size_t{1} << n;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense_hamiltonian(b));
  const Eigen::VectorXd& lam = es.eigenvalues();
  const Eigen::MatrixXd& v = es.eigenvectors();
  const Eigen::VectorXd w = (-(lam.array() - lam[0])).exp();
  const double z = w.sum();
  const Eigen::MatrixXd rho = v * (w / z).asDiagonal() * v.transpose();

  const auto expect = pauli_expectations(rho, n);
  const auto masks = setting_masks(data);
  const double scale = 1.0 / static_cast<double>(dim);
  std::vector<double> g_expect(grad ? dim * dim : 0, 0.0);
  std::vector<double> p(dim);
  double loss = 0.0;
  for (std::size_t a = 0; a < masks.size(); ++a) {
    const auto& m = masks[a];
    for (Mask t = 0; t < dim; ++t) p[t] = expect[((t & m.x) << n) | (t & m.z)];
    wht(p.data(), dim);
    for (Mask s = 0; s < dim; ++s) {
      p[s] = p[s] * scale - data.probs[a][static_cast<Eigen::Index>(s)];
      loss += p[s] * p[s];
    }
    if (!grad) continue;
    wht(p.data(), dim);
    for (Mask t = 0; t < dim; ++t) g_expect[((t & m.x) << n) | (t & m.z)] += 2.0 * scale * p[t];
  }
  if (!grad) return loss;

  // Back through the Pauli transform: dL/drho(j, j^x).
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  std::vector<double> row(dim);
  for (Mask x = 0; x < dim; ++x) {
    for (Mask zm = 0; zm < dim; ++zm) row[zm] = y_phase(x, zm) * g_expect[(x << n) | zm];
    wht(row.data(), dim);
    for (Mask j = 0; j < dim; ++j) g(j, j ^ x) = row[j];
  }
  g = 0.5 * (g + g.transpose()).eval();

  // Back through exp(-H) / Tr exp(-H) with divided differences.
  Eigen::MatrixXd gt = v.transpose() * g * v;
  const auto d = static_cast<Eigen::Index>(dim);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index k = 0; k < d; ++k) {
      const double dl = lam[i] - lam[k];
      const double f = std::abs(dl) > 1e-10 ? (w[i] - w[k]) / dl : -0.5 * (w[i] + w[k]);
      gt(i, k) *= f;
    }
  const double tr_g_rho = (g.cwiseProduct(rho)).sum();
  Eigen::MatrixXd m = v * gt * v.transpose() + tr_g_rho * (v * w.asDiagonal() * v.transpose());
  m /= z;
  *grad = coefficient_gradient(m, n);
  return loss;
}

EhtFit fit_eht(const WindowData& data, const EhtFitOptions& opt) {
  validate_data(data);
  const int n = data.num_sites();
  const int np = eht_parameter_count(n);
  const ObjectiveWithGradient f = [&](const Eigen::VectorXd& x, Eigen::VectorXd* grad) {
    return eht_loss_and_gradient(EntHamCoeffs::from_vector(n, x), data, grad);
  };
  Rng rng(opt.seed);
  EhtFit best;
  best.loss = std::numeric_limits<double>::infinity();
  for (int r = 0; r < std::max(1, opt.restarts); ++r) {
    Eigen::VectorXd x0(np);
    for (int k = 0; k < np; ++k) x0[k] = uniform(rng, opt.init_lo, opt.init_hi);
    const OptimizeResult res = minimize_bfgs(f, x0, opt.bfgs);
    best.restart_losses.push_back(res.value);
    if (std::isfinite(res.value) && res.value < best.loss) {
      best.coeffs = EntHamCoeffs::from_vector(n, res.x);
      best.loss = res.value;
      best.trace = res.trace;
      best.converged = res.converged;
    }
  }
  if (!std::isfinite(best.loss)) throw std::runtime_error("entanglement Hamiltonian fit failed in every restart");
  return best;
}

double uhlmann_fidelity(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("fidelity of mismatched matrices");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ea(a);
  const Eigen::VectorXd sq = ea.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Eigen::MatrixXcd root = ea.eigenvectors() * sq.asDiagonal() * ea.eigenvectors().adjoint();
  const Eigen::MatrixXcd m = root * b * root;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> em(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  const double t = em.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return t * t;
}

EhtScore reconstruct_and_score(const EntHamCoeffs& b, const Eigen::MatrixXcd& oracle) {
  EhtScore s;
  s.rho = eht_density(b);
  s.fidelity = uhlmann_fidelity(s.rho.cast<Complex>(), oracle);
  s.xi = entanglement_spectrum(s.rho);
  return s;
}

double degeneracy_ratio(const std::vector<double>& xi) {
  if (xi.size() < 3) throw std::invalid_argument("degeneracy ratio needs three levels");
  const double den = xi[2] - xi[0];
  if (std::abs(den) < 1e-14) throw std::domain_error("degenerate reference gap");
  return (xi[1] - xi[0]) / den;
}

std::vector<std::vector<int>> ring_windows(int L, int size, int count) {
  if (size > L || size < 1 || count < 1) throw std::invalid_argument("bad window layout");
  std::vector<std::vector<int>> out;
  for (int w = 0; w < count; ++w) {
    const int start = static_cast<int>((static_cast<long>(w) * L) / count);
    std::vector<int> sites(size);
    for (int k = 0; k < size; ++k) sites[k] = (start + k) % L;
    out.push_back(std::move(sites));
  }
  return out;
}

}  // namespace gspt
