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
#include <cstdint>
#include <functional>
#include <vector>

#include "gspt/pauli.hpp"
#include "gspt/sim.hpp"

namespace gspt {

/// y = A x for a real symmetric operator of known dimension.
using RealOperator = std::function<void(const double* x, double* y)>;

/// Matrix-free real operator built from a PauliSum whose computational-basis
/// matrix is real. Terms sharing an X mask are applied together.
class PauliOperator {
 public:
  /// Throws std::invalid_argument if the matrix has complex entries.
  explicit PauliOperator(const PauliSum& op);

  int num_sites() const { return num_sites_; }
  std::size_t dim() const { return std::size_t{1} << num_sites_; }
  void apply(const double* x, double* y) const;
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd dense() const;
  /// <x|A|x> for a real vector.
  double expectation(const Eigen::VectorXd& x) const;
  RealOperator as_function() const;

 private:
  struct Group {
    std::uint64_t x;
    std::vector<std::pair<std::uint64_t, double>> zc;
    /// Summed diagonal factor per basis state, for groups with many terms.
    std::vector<double> table;
  };
  int num_sites_;
  std::vector<Group> groups_;
};

struct KrylovOptions {
  /// Block size; 0 picks k + 2.
  int block = 0;
  int max_basis = 48;
  int max_iterations = 400;
  /// Residual norm ||A x - lambda x|| required of every requested pair.
  double tol = 1e-9;
  std::uint64_t seed = 0x6b727976ULL;
  /// Optional starting vectors (columns); the rest of the block is random.
  Eigen::MatrixXd initial;
};

struct Eigenpairs {
  Eigen::VectorXd values;
  /// Orthonormal columns.
  Eigen::MatrixXd vectors;
  bool converged = false;
  int matvecs = 0;
  double max_residual = 0.0;
};

/// k lowest eigenpairs by a restarted block Krylov (Rayleigh-Ritz) iteration.
/// The block start resolves degenerate levels.
Eigenpairs krylov_lowest(const RealOperator& op, std::size_t dim, int k, const KrylovOptions& opt = {});

/// k lowest eigenpairs of H. Dimensions up to 2^10 use dense diagonalization.
Eigenpairs lowest_eigenpairs(const PauliSum& h, int k, const KrylovOptions& opt = {});

/// Largest eigenvalue of H.
double highest_eigenvalue(const PauliSum& h, const KrylovOptions& opt = {});

/// Dense state with the given real amplitudes.
StateVector to_state(int num_sites, const Eigen::VectorXd& v);
Eigen::VectorXd real_amplitudes(const StateVector& psi);

/// Norm of the projection of psi onto span(vectors.col(i) for i in cols).
double subspace_overlap(const Eigen::VectorXd& psi, const Eigen::MatrixXd& vectors, const std::vector<int>& cols);

/// Indices of the levels within tol of values(0).
std::vector<int> ground_multiplet(const Eigen::VectorXd& values, double tol = 1e-8);

}  // namespace gspt
