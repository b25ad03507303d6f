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

#pragma once

#include <Eigen/Dense>
#include <array>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "gspt/circuit.hpp"
#include "gspt/pauli.hpp"
#include "gspt/sim.hpp"

namespace gspt {

/// Real matrix product state. Site tensor i holds one (left x right) matrix
/// per physical state s in {0, 1}. Circuits containing Y gates are tracked
/// with a separate global phase so that the tensors stay real.
class Mps {
 public:
  using Site = std::array<Eigen::MatrixXd, 2>;

  /// |0...0>.
  explicit Mps(int num_sites);
  explicit Mps(std::vector<Site> sites, Complex phase = 1.0);
  /// Exact MPS of a real dense vector, compressed at chi_max.
  static Mps from_dense(const Eigen::VectorXd& v, int num_sites, int chi_max = 1 << 12);
  /// Random normalized MPS with the given bond dimension.
  static Mps random(int num_sites, int chi, std::uint64_t seed);

  int num_sites() const { return static_cast<int>(sites_.size()); }
  const std::vector<Site>& sites() const { return sites_; }
  std::vector<Site>& sites() { return sites_; }
  Complex phase() const { return phase_; }
  /// Bond dimensions chi_1 .. chi_{L-1}.
  std::vector<int> bond_dims() const;
  int max_bond() const;
  /// Sum of discarded squared singular values over all truncations.
  double truncation_error() const { return trunc_err_; }

  double norm() const;
  /// Orthogonality center at `center`, sites left of it left-canonical and
  /// right of it right-canonical, normalized.
  void canonicalize(int center);
  /// SVD sweep truncating every bond to chi_max (and dropping singular values
  /// below cutoff relative to the largest); leaves the center at site 0.
  void compress(int chi_max, double cutoff = 1e-14);

  void apply_single(int site, const Eigen::Matrix2d& g);
  /// CZ on any pair; non-adjacent pairs are applied as a bond-dimension-2
  /// operator string and recompressed by compress().
  void apply_cz(int a, int b);
  void apply_layer(const Layer& layer, int chi_max);
  void apply(const Circuit& c, int chi_max);

  /// Schmidt values across bond l (between sites l-1 and l), l = 1..L-1.
  std::vector<double> schmidt_values(int bond) const;
  Eigen::VectorXd to_dense() const;

  void save(std::ostream& os) const;
  static Mps load(std::istream& is);

 private:
  std::vector<Site> sites_;
  Complex phase_ = 1.0;
  double trunc_err_ = 0.0;
};

/// <a|b> including the tracked phases.
Complex overlap(const Mps& a, const Mps& b);

/// Matrix product operator with real 2x2 blocks, built from a PauliSum by
/// sharing left prefixes of the terms.
class Mpo {
 public:
  explicit Mpo(const PauliSum& op);

  int num_sites() const { return static_cast<int>(left_.size()); }
  int left_dim(int site) const { return left_[site]; }
  int right_dim(int site) const { return right_[site]; }
  /// Block (a, b) of site tensor i; zero blocks are absent.
  struct Block {
    int a, b;
    Eigen::Matrix2d op;
  };
  const std::vector<Block>& blocks(int site) const { return blocks_[site]; }
  int max_bond() const;

 private:
  std::vector<int> left_, right_;
  std::vector<std::vector<Block>> blocks_;
};

double expectation(const Mps& psi, const Mpo& h);
double expectation(const Mps& psi, const PauliSum& h);

/// Circuit applied to |0...0> with truncation at chi_max.
Mps apply_circuit_mps(const Circuit& c, int chi_max);

/// rho_A for a contiguous block of at most 12 sites; site `first` is bit 0.
Eigen::MatrixXd reduced_density(const Mps& psi, int first, int count);
/// rho_A of a dense state for any site list (site list order = bit order);
/// used for windows that wrap around a ring.
Eigen::MatrixXcd reduced_density(const StateVector& psi, std::span<const int> sites);

/// Ascending xi = -ln(lambda) over eigenvalues above 1e-12.
struct ThinSvd {
  Eigen::MatrixXd u;
  Eigen::VectorXd s;
  Eigen::MatrixXd v;
};

/// m = u diag(s) v^T, with a Jacobi fallback when the fast solver is inaccurate.
ThinSvd thin_svd(const Eigen::MatrixXd& m);

std::vector<double> entanglement_spectrum(const Eigen::MatrixXcd& rho);
std::vector<double> entanglement_spectrum(const Eigen::MatrixXd& rho);

/// Von Neumann entropies S(l) for l = 1..L-1.
std::vector<double> entanglement_entropies(const Mps& psi);

struct CentralChargeFit {
  double c = 0.0;
  double offset = 0.0;
  double rms = 0.0;
  int points = 0;
};

/// Fit of S(l) = (c/3) ln((L/pi) sin(pi l/L)) + const (periodic) or
/// (c/6) ln((2L/pi) sin(pi l/L)) + const (open) over 3 <= l <= L-3.
/// `entropies[k]` is S(k+1). Throws std::invalid_argument with fewer than 4
/// points in the window.
CentralChargeFit fit_central_charge(std::span<const double> entropies, int L, Boundary boundary);

}  // namespace gspt
