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
#include "gspt/ed.hpp"
#include "gspt/prep.hpp"
#include "gspt/sim.hpp"

using namespace gspt;

TEST_CASE("normalized energy distance") {
  CHECK(normalized_energy_distance(-10.0, -10.0, 10.0) == 0.0);
  CHECK(normalized_energy_distance(0.0, -10.0, 10.0) == doctest::Approx(0.5));
  CHECK_THROWS(normalized_energy_distance(0.0, 1.0, 1.0));
}

TEST_CASE("target weight of a product state") {
  ModelParams p;
  p.L = 6;
  p.boundary = Boundary::Open;
  const auto t = exact_targets(p);
  CHECK(t.states.cols() == 2);
  const Circuit c = build_ansatz(p, ParamSchedule::zero(ScheduleMode::PowerLaw));
  const Eigen::VectorXd v = real_amplitudes(simulate(c));
  CHECK(target_weight(c, t.states) == doctest::Approx((t.states.transpose() * v).norm()).epsilon(1e-12));
}

TEST_CASE("energy phase on a small ring") {
  ModelParams p;
  p.L = 6;
  EnergyPhaseOptions opt;
  opt.restarts = 2;
  const auto r = optimize_energy_phase(p, opt);
  const auto t = exact_targets(p);
  const double e = expectation(simulate(build_ansatz(p, r.schedule)), build_hamiltonian(p));
  CHECK(r.loss == doctest::Approx(e).epsilon(1e-9));
  CHECK(normalized_energy_distance(e, t.energies[0], t.e_max) < 0.015);
  for (std::size_t k = 1; k < r.trace.size(); ++k) CHECK(r.trace[k] <= r.trace[k - 1] + 1e-12);
}

TEST_CASE("overlap variables round trip") {
  ParamSchedule s;
  s.mode = ScheduleMode::PowerLaw;
  for (int j = 0; j < kNumBlocks; ++j) s.blocks[j] = {0.1 * j, -1.0 - 0.1 * j, 0.2};
  Eigen::VectorXd v(kNumBlocks);
  v << 0.01, -0.02, 0.03, 0.0, 0.05;
  const auto moved = apply_overlap_variables(s, v);
  CHECK((overlap_variables(s, moved) - v).norm() < 1e-14);
  // eps shifts angle weight between the power law and the constant.
  CHECK(moved.angle(0, 0) == doctest::Approx(s.angle(0, 0)));
}

TEST_CASE("extrapolation reproduces exact power laws") {
  ParamSchedule base = ParamSchedule::uniform({0.1, 0.2, 0.3, 0.4, 0.5});
  const std::vector<int> sizes{8, 10, 12, 14, 16};
  std::vector<Eigen::VectorXd> vars;
  auto truth = [](int j, double L) { return j == 2 ? 0.7 : 0.3 * std::pow(L + 1.0, -0.8 - 0.1 * j) - 0.05 * j; };
  for (int L : sizes) {
    Eigen::VectorXd v(kNumBlocks);
    for (int j = 0; j < kNumBlocks; ++j) v[j] = truth(j, L);
    vars.push_back(v);
  }
  const auto gen = extrapolate_schedule(Boundary::Periodic, base, sizes, vars);
  CHECK(gen.max_rms() < 1e-6);
  const auto s20 = gen.at(20);
  for (int j = 0; j < kNumBlocks; ++j) CHECK(s20.blocks[j].c == doctest::Approx(truth(j, 20)).epsilon(1e-4));
  CHECK_THROWS(extrapolate_schedule(Boundary::Periodic, base, {8, 10}, {vars[0], vars[1]}));
}
