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
#include "gspt/gfunction.hpp"
#include "gspt/model.hpp"
#include "gspt/sim.hpp"
#include "oracle/dense.hpp"

using namespace gspt;

namespace {

oracle::Vec dense_ground(const PauliSum& h) {
  Eigen::SelfAdjointEigenSolver<oracle::Mat> es(oracle::sum_matrix(h));
  return es.eigenvectors().col(0);
}

}  // namespace

TEST_CASE("g from exact states agrees with a dense complex oracle") {
  ModelParams p;
  p.L = 6;
  const int L = p.L;
  const oracle::Vec s00 = dense_ground(build_hamiltonian(p));
  const oracle::Mat ox = oracle::sum_matrix(spin_flip_operator(L));
  const oracle::Mat proj = 0.5 * (oracle::Mat::Identity(1 << L, 1 << L) + ox);
  double g = 0.0;
  for (auto pin : {CutKind::Up, CutKind::Down}) {
    const oracle::Vec a0 = dense_ground(build_cut_hamiltonian(p, {pin, CutKind::None}).hamiltonian);
    const oracle::Vec aa = dense_ground(build_cut_hamiltonian(p, {pin, pin}).hamiltonian);
    g += std::abs(a0.dot(proj * s00)) / std::sqrt(std::abs(s00.dot(proj * s00))) / std::abs(a0.dot(aa));
  }
  const auto r = g_exact(p);
  CHECK(r.valid);
  CHECK(r.g == doctest::Approx(g).epsilon(1e-8));
  REQUIRE(r.terms.size() == 2);
  CHECK(r.terms[0].contribution == doctest::Approx(r.terms[1].contribution).epsilon(1e-8));
}

TEST_CASE("assemble_g formula and guards") {
  GBrackets b;
  b.n00 = 0.5;
  b.pins.push_back({CutKind::Up, 0.4, 0.2, 0.8});
  const auto r = assemble_g(b);
  CHECK(r.g == doctest::Approx(0.3 / std::sqrt(0.75) / 0.8));
  CHECK(r.terms[0].projected == doctest::Approx(0.3));
  b.pins.push_back({CutKind::Down, 0.4, 0.2, 1e-9});
  CHECK_THROWS_AS(assemble_g(b), std::domain_error);
  GBrackets odd;
  odd.n00 = -1.0;
  CHECK_THROWS_AS(assemble_g(odd), std::domain_error);
}

TEST_CASE("coinciding configurations are flagged") {
  ModelParams p;
  p.L = 6;
  const Eigen::VectorXd v = real_amplitudes(simulate(build_ansatz(p, ParamSchedule::zero(ScheduleMode::Uniform))));
  const auto r = g_from_states({v, v, v, v, v}, p.L);
  CHECK_FALSE(r.valid);
  CHECK_FALSE(r.diagnostic.empty());
}

TEST_CASE("down configurations are spin flips of the up ones") {
  ModelParams p;
  p.L = 8;
  const auto s = ParamSchedule::uniform({0.3, -0.5, 0.7, 0.2, -0.4});
  const auto c = g_circuits(p, s, s, s);
  const oracle::Mat ox = oracle::sum_matrix(spin_flip_operator(p.L));
  const auto vec = [](const StateVector& sv) {
    return Eigen::Map<const oracle::Vec>(sv.amplitudes().data(), static_cast<Eigen::Index>(sv.dim())).eval();
  };
  CHECK(std::abs(vec(simulate(c.d0)).dot(ox * vec(simulate(c.u0)))) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(vec(simulate(c.dd)).dot(ox * vec(simulate(c.uu)))) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("cut distances are counted from the pinned sites") {
  ModelParams p;
  p.L = 8;
  CHECK(boundary_distances(p, {CutKind::Up, CutKind::None}) == std::vector<int>{0, 1, 2, 3, 3, 2, 1, 0});
  CHECK(boundary_distances(p, {CutKind::Up, CutKind::Up}) == std::vector<int>{0, 1, 1, 0, 0, 1, 1, 0});
}

TEST_CASE("noiseless protocol reproduces the brackets of the simulated states") {
  ModelParams p;
  p.L = 6;
  const auto ring = ParamSchedule::uniform({0.4, -0.3, 0.6, 0.1, -0.2});
  const auto cut = ParamSchedule::uniform({0.2, 0.5, -0.4, 0.3, 0.1});
  const auto c = g_circuits(p, ring, cut, cut);
  GStates s{real_amplitudes(simulate(c.s00)), real_amplitudes(simulate(c.u0)), real_amplitudes(simulate(c.d0)),
            real_amplitudes(simulate(c.uu)), real_amplitudes(simulate(c.dd))};
  const auto ref = g_from_states(s, p.L);
  const auto r = g_protocol(c);
  CHECK(r.g == doctest::Approx(ref.g).epsilon(1e-9));
  CHECK(raw_overlap(c) == doctest::Approx(std::abs(s.u0.dot(s.s00))).epsilon(1e-9));
}

TEST_CASE("transverse-field control ratio is close to one") {
  ModelParams p;
  p.L = 10;
  p.J = 0.0;
  p.h = 1.0;
  CHECK(std::abs(g_free_cut_ratio(p) - 1.0) < 0.02);
}
