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
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace gspt {

using Objective = std::function<double(const Eigen::VectorXd&)>;
/// Returns f(x) and writes the gradient into *grad when grad is non-null.
using ObjectiveWithGradient = std::function<double(const Eigen::VectorXd&, Eigen::VectorXd* grad)>;

struct BfgsOptions {
  int max_iterations = 300;
  double gradient_tol = 1e-7;
  /// Stop when an accepted step improves f by less than this.
  double value_tol = 1e-13;
  double fd_step = 1e-5;
  double armijo = 1e-4;
  int max_backtracks = 40;
};

struct OptimizeResult {
  Eigen::VectorXd x;
  double value = 0.0;
  Eigen::VectorXd gradient;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
  std::string message;
  /// f after every accepted step, starting with f(x0). Never increasing.
  std::vector<double> trace;
};

Eigen::VectorXd central_difference(const Objective& f, const Eigen::VectorXd& x, double h);

/// Quasi-Newton minimization with a backtracking Armijo line search; a step
/// is accepted only if it lowers f.
OptimizeResult minimize_bfgs(const ObjectiveWithGradient& f, Eigen::VectorXd x0, const BfgsOptions& opt = {});
/// Same, with central finite-difference gradients.
OptimizeResult minimize_bfgs(const Objective& f, Eigen::VectorXd x0, const BfgsOptions& opt = {});

/// f(L) = a (L + d)^b + c.
struct PowerLawFit {
  double a = 0.0, b = -1.0, c = 0.0, d = 0.0;
  double rms = 0.0;
  double operator()(double L) const;
};

/// Least-squares fit with d restricted to the open interval (d_lo, d_hi).
/// For fixed (b, d) the model is linear in (a, c), which is solved exactly;
/// (b, d) are found by a grid search followed by quasi-Newton refinement.
PowerLawFit fit_power_law(std::span<const double> L, std::span<const double> y, double d_lo = -8.0,
                          double d_hi = 50.0);

}  // namespace gspt
