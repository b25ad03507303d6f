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

#include <cmath>

#include "doctest.h"
#include "gspt/optimize.hpp"

using namespace gspt;

namespace {

double rosenbrock(const Eigen::VectorXd& x, Eigen::VectorXd* g) {
  const double a = 1 - x(0), b = x(1) - x(0) * x(0);
  if (g) {
    g->resize(2);
    (*g)(0) = -2 * a - 400 * x(0) * b;
    (*g)(1) = 200 * b;
  }
  return a * a + 100 * b * b;
}

}  // namespace

TEST_CASE("BFGS solves Rosenbrock with analytic and numeric gradients") {
  const Eigen::Vector2d x0(-1.2, 1.0);
  const auto r = minimize_bfgs(ObjectiveWithGradient(rosenbrock), x0);
  CHECK(r.converged);
  CHECK(r.x(0) == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(r.x(1) == doctest::Approx(1.0).epsilon(1e-5));
  for (std::size_t k = 1; k < r.trace.size(); ++k) CHECK(r.trace[k] <= r.trace[k - 1]);

  const auto fd = minimize_bfgs(Objective([](const Eigen::VectorXd& x) { return rosenbrock(x, nullptr); }), x0);
  CHECK(fd.value < 1e-9);
}

TEST_CASE("central difference is second order") {
  const Objective f = [](const Eigen::VectorXd& x) { return std::sin(x(0)) * std::exp(x(1)); };
  const Eigen::Vector2d x(0.3, -0.4);
  const auto g = central_difference(f, x, 1e-5);
  CHECK(g(0) == doctest::Approx(std::cos(0.3) * std::exp(-0.4)).epsilon(1e-9));
  CHECK(g(1) == doctest::Approx(std::sin(0.3) * std::exp(-0.4)).epsilon(1e-9));
}

TEST_CASE("power law fit recovers exact parameters") {
  std::vector<double> L{8, 10, 12, 14, 16, 18, 20}, y;
  for (double l : L) y.push_back(0.8 * std::pow(l + 1.5, -1.3) + 0.25);
  const auto fit = fit_power_law(L, y);
  CHECK(fit.rms < 1e-8);
  CHECK(fit(40) == doctest::Approx(0.8 * std::pow(41.5, -1.3) + 0.25).epsilon(1e-5));
  CHECK(fit.c == doctest::Approx(0.25).epsilon(1e-3));
}
