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

#include <algorithm>
#include <numbers>
#include <set>
#include <random>

#include "doctest.h"
#include "gspt/circuit.hpp"
#include "oracle/dense.hpp"

using namespace gspt;

namespace {

ParamSchedule random_uniform(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  return ParamSchedule::uniform({u(rng), u(rng), u(rng), u(rng), u(rng)});
}

ParamSchedule random_powerlaw(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.5, 1.5), e(-2.0, -0.3);
  ParamSchedule s = ParamSchedule::zero(ScheduleMode::PowerLaw);
  for (auto& b : s.blocks) b = {u(rng), e(rng), u(rng)};
  return s;
}

oracle::Vec run(const Circuit& c) { return oracle::circuit_unitary(c) * oracle::zero_state(c.num_sites()); }

}  // namespace

TEST_CASE("CZ pattern sizes") {
  const ModelParams obc{.L = 8, .boundary = Boundary::Open};
  CHECK(ansatz_cz_pattern(obc, {}, 0).size() == 4);
  CHECK(ansatz_cz_pattern(obc, {}, 1).size() == 3);
  const ModelParams pbc{.L = 8};
  const auto b = ansatz_cz_pattern(pbc, {}, 1);
  CHECK(b.size() == 4);
  CHECK(std::find(b.begin(), b.end(), std::pair{7, 0}) != b.end());
  CHECK(ansatz_cz_pattern(pbc, {}, 0, CzPatternOrder::OddFirst) == b);
}

TEST_CASE("ansatz block structure") {
  for (auto bc : {Boundary::Open, Boundary::Periodic})
    for (int L : {4, 6, 8, 10}) {
      const auto c = build_ansatz({.L = L, .boundary = bc}, ParamSchedule::uniform({0.1, 0.2, 0.3, 0.4, 0.5}));
      CHECK(c.count_y_layers() == 5);
      CHECK(c.count_cz_layers() == 5);
      CHECK(std::holds_alternative<CZLayer>(c.layers().back()));
      const auto energy = simplify_terminal_cz(c, build_hamiltonian({.L = L, .boundary = bc}));
      CHECK(energy.circuit.count_y_layers() == 5);
      CHECK(energy.circuit.count_cz_layers() == 4);
    }
  CHECK_THROWS_AS(build_ansatz({.L = 7}, ParamSchedule::zero(ScheduleMode::Uniform)), std::invalid_argument);
  CHECK_NOTHROW(build_ansatz({.L = 7, .boundary = Boundary::Open}, ParamSchedule::zero(ScheduleMode::Uniform)));
}

TEST_CASE("zero angles leave the register in |0...0>") {
  const auto c = build_ansatz({.L = 6}, ParamSchedule::zero(ScheduleMode::Uniform));
  const auto psi = run(c);
  CHECK(std::abs(psi(0) - 1.0) < 1e-15);
}

TEST_CASE("power-law schedules need decaying exponents") {
  auto s = ParamSchedule::zero(ScheduleMode::PowerLaw);
  s.blocks[2].b = 0.5;
  CHECK_THROWS_AS(build_ansatz({.L = 6, .boundary = Boundary::Open}, s), std::invalid_argument);
}

TEST_CASE("open schedules are mirror symmetric, periodic ones uniform") {
  std::mt19937_64 rng(5);
  const auto s = random_powerlaw(rng);
  const auto c = build_ansatz({.L = 9, .boundary = Boundary::Open}, s);
  for (const auto& l : c.layers())
    if (const auto* y = std::get_if<YLayer>(&l))
      for (int i = 0; i < 9; ++i) CHECK(y->angles[i] == y->angles[8 - i]);
  CHECK(boundary_distances({.L = 9, .boundary = Boundary::Open}, {}) == std::vector<int>{0, 1, 2, 3, 4, 3, 2, 1, 0});

  const auto u = build_ansatz({.L = 8}, random_uniform(rng));
  for (const auto& l : u.layers())
    if (const auto* y = std::get_if<YLayer>(&l))
      CHECK(std::all_of(y->angles.begin(), y->angles.end(), [&](double a) { return a == y->angles[0]; }));
}

TEST_CASE("periodic ansatz is covariant under a shift by two sites") {
  std::mt19937_64 rng(9);
  const int L = 8;
  const auto c = build_ansatz({.L = L}, random_uniform(rng));
  for (const auto& l : c.layers())
    if (const auto* cz = std::get_if<CZLayer>(&l)) {
      std::set<std::pair<int, int>> orig, shifted;
      for (auto [a, b] : cz->pairs) {
        orig.insert(std::minmax(a, b));
        shifted.insert(std::minmax((a + 2) % L, (b + 2) % L));
      }
      CHECK(orig == shifted);
    }
}

TEST_CASE("inversion") {
  std::mt19937_64 rng(2);
  const auto c = build_ansatz({.L = 6}, random_uniform(rng));
  CHECK(invert(invert(c)) == c);
  const Circuit y(2, Boundary::Open, {YLayer{{0.3, -0.2}}});
  CHECK(invert(y) == Circuit(2, Boundary::Open, {YLayer{{-0.3, 0.2}}}));
  const auto u = oracle::circuit_unitary(c.then(invert(c)));
  CHECK((u - oracle::Mat::Identity(64, 64)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("invalid layers are rejected") {
  CHECK_THROWS_AS(Circuit(4, Boundary::Open, {CZLayer{{{0, 1}, {1, 2}}}}), std::invalid_argument);
  CHECK_THROWS_AS(Circuit(4, Boundary::Open, {YLayer{{0.1}}}), std::invalid_argument);
  CHECK_THROWS_AS(Circuit(4, Boundary::Open, {CZLayer{{{0, 4}}}}), std::invalid_argument);
}

TEST_CASE("cut circuits leave pinned sites out of the entangling layers") {
  const ModelParams p{.L = 8};
  std::mt19937_64 rng(4);
  const auto s = random_uniform(rng);
  const auto up = build_ansatz(p, s, {CutKind::Up, CutKind::Up});
  for (std::size_t k = 0; k < up.layers().size(); ++k) {
    if (const auto* cz = std::get_if<CZLayer>(&up.layers()[k]))
      for (auto [a, b] : cz->pairs)
        for (int q : {a, b}) CHECK((q != 0 && q != 7 && q != 3 && q != 4));
    if (const auto* y = std::get_if<YLayer>(&up.layers()[k]))
      for (int q : {0, 3, 4, 7}) CHECK(y->angles[q] == 0.0);
  }
  const auto psi = run(up);
  for (int q : {0, 3, 4, 7}) {
    const auto z = oracle::term_matrix(8, PauliTerm::single(q, Pauli::Z));
    CHECK((psi.adjoint() * z * psi)(0).real() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("down pins give the spin-flipped up state") {
  const ModelParams p{.L = 8};
  std::mt19937_64 rng(8);
  const auto s = random_uniform(rng);
  const auto up = run(build_ansatz(p, s, {CutKind::Up, CutKind::None}));
  const auto down = run(build_ansatz(p, s, {CutKind::Down, CutKind::None}));
  const oracle::Mat flip = oracle::sum_matrix(spin_flip_operator(8));
  CHECK(std::abs(std::abs(down.dot(flip * up)) - 1.0) < 1e-12);

  const auto mixed = build_ansatz(p, s, {CutKind::Down, CutKind::Up});
  const auto& first = std::get<YLayer>(mixed.layers().front());
  CHECK(first.angles[0] == doctest::Approx(std::numbers::pi));
  CHECK(first.angles[3] == 0.0);
}

TEST_CASE("spin flip pushes the Pauli string to the start") {
  std::mt19937_64 rng(12);
  const oracle::Mat flip = oracle::sum_matrix(spin_flip_operator(6));
  for (int trial = 0; trial < 20; ++trial) {
    const auto c = build_ansatz({.L = 6, .boundary = trial % 2 ? Boundary::Open : Boundary::Periodic},
                                trial % 2 ? random_powerlaw(rng) : random_uniform(rng));
    const auto f = spin_flip(c);
    CHECK(f.circuit.depth() == c.depth());
    const oracle::Vec lhs = flip * run(c);
    const oracle::Vec rhs = f.phase * run(f.circuit);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("terminal CZ removal") {
  const Circuit c(4, Boundary::Open, {YLayer{{0.3, 0.1, -0.4, 0.9}}, CZLayer{{{0, 1}, {2, 3}}}});
  const PauliSum zz(4, {PauliTerm(1.0, {{0, Pauli::Z}, {1, Pauli::Z}})});
  const auto a = simplify_terminal_cz(c, zz);
  CHECK(a.observable == zz);
  CHECK(a.circuit.depth() == 1);
  const PauliSum x1(4, {PauliTerm::single(1, Pauli::X)});
  CHECK(simplify_terminal_cz(c, x1).observable == PauliSum(4, {PauliTerm(1.0, {{0, Pauli::Z}, {1, Pauli::X}})}));
  CHECK_THROWS_AS(simplify_terminal_cz(a.circuit, zz), std::invalid_argument);
}

TEST_CASE("terminal CZ removal preserves the energy on random L=8 ansatz states") {
  std::mt19937_64 rng(21);
  for (auto bc : {Boundary::Open, Boundary::Periodic}) {
    const ModelParams p{.L = 8, .boundary = bc};
    const auto c = build_ansatz(p, bc == Boundary::Open ? random_powerlaw(rng) : random_uniform(rng));
    const auto H = build_hamiltonian(p);
    const auto s = simplify_terminal_cz(c, H);
    const auto a = run(c), b = run(s.circuit);
    const double before = (a.adjoint() * oracle::sum_matrix(H) * a)(0).real();
    const double after = (b.adjoint() * oracle::sum_matrix(s.observable) * b)(0).real();
    CHECK(before == doctest::Approx(after).epsilon(1e-12));
  }
}

TEST_CASE("sandwich fusion on the projection circuit") {
  const ModelParams p{.L = 6};
  std::mt19937_64 rng(6);
  const auto prep = build_ansatz(p, random_uniform(rng));
  const auto ref = build_ansatz(p, random_uniform(rng), {CutKind::Up, CutKind::None});
  const auto proj = prep.with_layer(x_layer(6)).then(invert(ref));
  const auto f = fuse_sandwiched_x_layer(proj);
  REQUIRE(f.applied);
  // The pinned pairs differ between the two CZ layers, so one CZ layer stays.
  CHECK(f.circuit.depth() + 1 == proj.depth());
  const auto u1 = oracle::circuit_unitary(proj);
  const oracle::Mat u2 = f.phase * oracle::circuit_unitary(f.circuit);
  CHECK((u1 - u2).cwiseAbs().maxCoeff() < 1e-9);

  const auto same = prep.with_layer(x_layer(6)).then(invert(prep));
  const auto g = fuse_sandwiched_x_layer(same);
  REQUIRE(g.applied);
  CHECK(g.circuit.depth() + 2 == same.depth());
  const oracle::Mat v2 = g.phase * oracle::circuit_unitary(g.circuit);
  CHECK((oracle::circuit_unitary(same) - v2).cwiseAbs().maxCoeff() < 1e-9);
  const auto& fused = std::get<PauliLayer>(g.circuit.layers()[9]);
  // Every site of the last CZ layer is paired, so the layer is all Y.
  CHECK(std::all_of(fused.ops.begin(), fused.ops.end(), [](Pauli q) { return q == Pauli::Y; }));
}

TEST_CASE("fusion without a sandwich is a no-op") {
  const auto c = build_ansatz({.L = 6}, ParamSchedule::uniform({0.1, 0.2, 0.3, 0.4, 0.5}));
  const auto f = fuse_sandwiched_x_layer(c);
  CHECK_FALSE(f.applied);
  CHECK(f.circuit == c);
  CHECK_FALSE(f.diagnostic.empty());
}

TEST_CASE("fusion splits CZ pairs that share a site") {
  const Circuit c(4, Boundary::Open,
                  {YLayer{{0.3, -0.2, 0.7, 1.1}}, CZLayer{{{0, 1}, {2, 3}}}, x_layer(4), CZLayer{{{1, 2}}},
                   YLayer{{0.5, 0.4, -0.9, 0.2}}});
  const auto f = fuse_sandwiched_x_layer(c);
  REQUIRE(f.applied);
  CHECK(f.circuit.count_cz_layers() == 2);
  const oracle::Mat u2 = f.phase * oracle::circuit_unitary(f.circuit);
  CHECK((oracle::circuit_unitary(c) - u2).cwiseAbs().maxCoeff() < 1e-12);
}
