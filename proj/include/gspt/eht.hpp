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
#include <string>
#include <vector>

#include "gspt/optimize.hpp"
#include "gspt/pauli.hpp"
#include "gspt/sim.hpp"

namespace gspt {

/// Coefficients of H_A = -sum b_zz Z Z - sum b_zxz Z X Z - sum b_x X on a
/// window of n sites (window position k is bit k).
struct EntHamCoeffs {
  std::vector<double> zz;   // n - 1
  std::vector<double> zxz;  // n - 2, centered on positions 1..n-2
  std::vector<double> x;    // n

  static EntHamCoeffs zeros(int n);
  static EntHamCoeffs from_vector(int n, const Eigen::VectorXd& v);
  int num_sites() const { return static_cast<int>(x.size()); }
  Eigen::VectorXd to_vector() const;
};

int eht_parameter_count(int n);
PauliSum entanglement_hamiltonian(const EntHamCoeffs& b);
/// exp(-H_A) / Tr exp(-H_A).
Eigen::MatrixXd eht_density(const EntHamCoeffs& b);
/// Same from the `keep` lowest eigenpairs, normalized by their own sum.
Eigen::MatrixXd eht_density_truncated(const EntHamCoeffs& b, int keep = 12);

/// Outcome distributions of one subsystem under many product bases.
struct WindowData {
  std::vector<int> sites;
  /// bases[a][k]: basis of window position k in setting a.
  std::vector<std::vector<Pauli>> bases;
  /// probs[a][s]: probability of outcome s (bit k = position k).
  std::vector<Eigen::VectorXd> probs;
  int num_sites() const { return static_cast<int>(sites.size()); }
};

/// `count` uniformly random {X,Y,Z} strings over L sites.
std::vector<std::vector<Pauli>> random_settings(int L, int count, std::uint64_t seed);

/// Exact outcome distributions of rho on the window for the given global
/// settings (restricted to the window sites).
WindowData window_data_exact(const Eigen::MatrixXcd& rho, std::span<const int> sites,
                             const std::vector<std::vector<Pauli>>& settings);
WindowData window_data_exact(const Eigen::MatrixXd& rho, std::span<const int> sites,
                             const std::vector<std::vector<Pauli>>& settings);

/// Marginal frequencies of the window from global histograms.
WindowData window_data_from_counts(std::span<const int> sites, const std::vector<std::vector<Pauli>>& settings,
                                   const std::vector<Histogram>& counts);

/// Global histograms with every site's outcomes permuted independently across
/// shots, which keeps single-site marginals and destroys correlations.
std::vector<Histogram> shuffle_correlations(const std::vector<Histogram>& counts, int L, std::uint64_t seed);

/// Model outcome distributions of rho for every setting of `data`.
std::vector<Eigen::VectorXd> model_probabilities(const Eigen::MatrixXd& rho, const WindowData& data);

/// sum_a sum_s (P_data - P_model)^2.
double eht_loss(const EntHamCoeffs& b, const WindowData& data);
/// Same with the truncated density.
double eht_loss_truncated(const EntHamCoeffs& b, const WindowData& data, int keep = 12);
/// Loss and analytic gradient with respect to to_vector().
double eht_loss_and_gradient(const EntHamCoeffs& b, const WindowData& data, Eigen::VectorXd* grad);

struct EhtFitOptions {
  int restarts = 3;
  double init_lo = 0.1;
  double init_hi = 1.0;
  std::uint64_t seed = 0xe47ULL;
  BfgsOptions bfgs{};
};

struct EhtFit {
  EntHamCoeffs coeffs;
  double loss = 0.0;
  std::vector<double> trace;
  std::vector<double> restart_losses;
  bool converged = false;
};

/// Best of `restarts` quasi-Newton runs. Throws if every restart fails.
EhtFit fit_eht(const WindowData& data, const EhtFitOptions& opt = {});

/// (Tr sqrt(sqrt(a) b sqrt(a)))^2.
double uhlmann_fidelity(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

struct EhtScore {
  Eigen::MatrixXd rho;
  double fidelity = 0.0;
  std::vector<double> xi;
};

EhtScore reconstruct_and_score(const EntHamCoeffs& b, const Eigen::MatrixXcd& oracle);

/// (xi_2 - xi_1) / (xi_3 - xi_1) of an ascending spectrum.
double degeneracy_ratio(const std::vector<double>& xi);

/// Window starts spaced uniformly around a ring.
std::vector<std::vector<int>> ring_windows(int L, int size, int count);

}  // namespace gspt
