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

#include "gspt/optimize.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace gspt {

Eigen::VectorXd central_difference(const Objective& f, const Eigen::VectorXd& x, double h) {
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd xp = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    xp(i) = x(i) + h;
    const double fp = f(xp);
    xp(i) = x(i) - h;
    const double fm = f(xp);
    xp(i) = x(i);
    g(i) = (fp - fm) / (2 * h);
  }
  return g;
}

OptimizeResult minimize_bfgs(const ObjectiveWithGradient& f, Eigen::VectorXd x0, const BfgsOptions& opt) {
  const Eigen::Index n = x0.size();
  OptimizeResult r;
  r.x = std::move(x0);
  Eigen::VectorXd g(n);
  r.value = f(r.x, &g);
  ++r.evaluations;
  if (!std::isfinite(r.value)) throw std::domain_error("objective is not finite at the starting point");
  r.trace.push_back(r.value);
  Eigen::MatrixXd hinv = Eigen::MatrixXd::Identity(n, n);

  for (r.iterations = 0; r.iterations < opt.max_iterations; ++r.iterations) {
    if (g.norm() < opt.gradient_tol) {
      r.converged = true;
      r.message = "gradient below tolerance";
      break;
    }
    Eigen::VectorXd p = -hinv * g;
    double slope = g.dot(p);
    if (slope >= 0) {
      hinv.setIdentity();
      p = -g;
      slope = -g.squaredNorm();
    }
    double step = 1.0;
    Eigen::VectorXd xn, gn(n);
    double fn = std::numeric_limits<double>::infinity();
    bool accepted = false;
    for (int k = 0; k < opt.max_backtracks; ++k, step *= 0.5) {
      xn = r.x + step * p;
      fn = f(xn, nullptr);
      ++r.evaluations;
      if (std::isfinite(fn) && fn <= r.value + opt.armijo * step * slope && fn < r.value) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (hinv.isIdentity()) {
        r.converged = g.norm() < 1e3 * opt.gradient_tol;
        r.message = "line search found no decrease";
        break;
      }
      hinv.setIdentity();
      continue;
    }
    f(xn, &gn);
    ++r.evaluations;
    const Eigen::VectorXd s = xn - r.x, y = gn - g;
    const double improvement = r.value - fn;
    r.x = xn;
    g = gn;
    r.value = fn;
    r.trace.push_back(fn);
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      const double rho = 1.0 / sy;
      const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
      hinv = (id - rho * s * y.transpose()) * hinv * (id - rho * y * s.transpose()) + rho * s * s.transpose();
    }
    if (improvement < opt.value_tol) {
      r.converged = true;
      r.message = "value change below tolerance";
      ++r.iterations;
      break;
    }
  }
  if (!r.converged && r.message.empty()) r.message = "iteration limit reached";
  r.gradient = g;
  return r;
}

OptimizeResult minimize_bfgs(const Objective& f, Eigen::VectorXd x0, const BfgsOptions& opt) {
  int extra = 0;
  auto fg = [&](const Eigen::VectorXd& x, Eigen::VectorXd* grad) {
    if (grad) {
      *grad = central_difference(f, x, opt.fd_step);
      extra += 2 * static_cast<int>(x.size());
    }
    return f(x);
  };
  auto r = minimize_bfgs(ObjectiveWithGradient(fg), std::move(x0), opt);
  r.evaluations += extra;
  return r;
}

double PowerLawFit::operator()(double L) const { return a * std::pow(L + d, b) + c; }

namespace {

// Best (a, c) for fixed (b, d); returns the sum of squared residuals.
double solve_linear(std::span<const double> L, std::span<const double> y, double b, double d, double* a,
                    double* c) {
  const Eigen::Index n = static_cast<Eigen::Index>(L.size());
  Eigen::MatrixXd m(n, 2);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    m(i, 0) = std::pow(L[i] + d, b);
    m(i, 1) = 1.0;
    v(i) = y[i];
  }
  const Eigen::Vector2d sol = m.completeOrthogonalDecomposition().solve(v);
  *a = sol(0);
  *c = sol(1);
  return (m * sol - v).squaredNorm();
}

}  // namespace

PowerLawFit fit_power_law(std::span<const double> L, std::span<const double> y, double d_lo, double d_hi) {
  if (L.size() != y.size() || L.size() < 3) throw std::invalid_argument("power-law fit needs >= 3 matching points");
  double lmin = L[0];
  for (double l : L) lmin = std::min(lmin, l);
  d_lo = std::max(d_lo, -lmin + 1e-3);
  if (!(d_lo < d_hi)) throw std::invalid_argument("empty interval for d");

  // d = d_lo + (d_hi - d_lo) * sigmoid(u).
  auto d_of = [&](double u) { return d_lo + (d_hi - d_lo) / (1.0 + std::exp(-u)); };
  auto sse = [&](const Eigen::VectorXd& z) {
    double a, c;
    return solve_linear(L, y, z(0), d_of(z(1)), &a, &c);
  };

  Eigen::VectorXd best(2);
  double best_val = std::numeric_limits<double>::infinity();
  for (double b = -4.0; b <= 4.0001; b += 0.25) {
    if (std::abs(b) < 1e-9) continue;
    for (double u = -6.0; u <= 6.0001; u += 0.5) {
      Eigen::VectorXd z(2);
      z << b, u;
      const double v = sse(z);
      if (v < best_val) {
        best_val = v;
        best = z;
      }
    }
  }
  BfgsOptions opt;
  opt.max_iterations = 200;
  opt.gradient_tol = 1e-12;
  opt.fd_step = 1e-6;
  opt.value_tol = 0.0;
  opt.max_iterations = 500;
  const Objective log_sse = [&](const Eigen::VectorXd& z) { return std::log(sse(z) + 1e-300); };
  const auto r = minimize_bfgs(log_sse, best, opt);
  const Eigen::VectorXd z = sse(r.x) < best_val ? r.x : best;

  PowerLawFit fit;
  fit.b = z(0);
  fit.d = d_of(z(1));
  const double s = solve_linear(L, y, fit.b, fit.d, &fit.a, &fit.c);
  fit.rms = std::sqrt(s / static_cast<double>(L.size()));
  return fit;
}

}  // namespace gspt
