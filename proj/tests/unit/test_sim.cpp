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
#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "gspt/circuit.hpp"
#include "gspt/ed.hpp"
#include "gspt/sim.hpp"
#include "oracle/dense.hpp"

using namespace gspt;
using cd = std::complex<double>;

namespace {

oracle::Vec as_eigen(const StateVector& s) {
  oracle::Vec v(s.dim());
  for (std::size_t i = 0; i < s.dim(); ++i) v(i) = s[i];
  return v;
}

ParamSchedule random_uniform(Rng& rng) {
  std::array<double, kNumBlocks> c;
  for (auto& x : c) x = uniform(rng, -1.5, 1.5);
  return ParamSchedule::uniform(c);
}

Circuit random_mixed_circuit(Rng& rng, int L) {
  std::vector<Layer> layers;
  for (int k = 0; k < 6; ++k) {
    YLayer y{std::vector<double>(L)};
    for (auto& a : y.angles) a = uniform(rng, -3, 3);
    layers.emplace_back(y);
    PauliLayer p{std::vector<Pauli>(L)};
    for (auto& q : p.ops) q = static_cast<Pauli>(uniform_index(rng, 4));
    layers.emplace_back(p);
    CZLayer cz;
    for (int i = k % 2; i + 1 < L; i += 2) cz.pairs.emplace_back(i, i + 1);
    layers.emplace_back(cz);
  }
  return Circuit(L, Boundary::Open, layers);
}

}  // namespace

TEST_CASE("trivial circuits") {
  CHECK(simulate(Circuit(3, Boundary::Open))[0] == cd(1.0));
  const auto s = simulate(Circuit(2, Boundary::Open, {YLayer{{std::numbers::pi, std::numbers::pi}}}));
  CHECK(std::abs(std::abs(s[3]) - 1.0) < 1e-15);
}

TEST_CASE("statevector matches the dense unitary oracle") {
  Rng rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    const int L = 2 + trial % 5;
    const auto c = random_mixed_circuit(rng, L);
    const oracle::Vec expect = oracle::circuit_unitary(c) * oracle::zero_state(L);
    const auto got = simulate(c);
    CHECK((as_eigen(got) - expect).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(got.norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("Pauli sum action matches the dense oracle") {
  Rng rng(2);
  const auto c = random_mixed_circuit(rng, 5);
  const auto psi = simulate(c);
  const PauliSum op(5, {PauliTerm(cd(0.3, 0.2), {{0, Pauli::Y}, {3, Pauli::X}}),
                        PauliTerm(-1.1, {{1, Pauli::Z}, {2, Pauli::Y}, {4, Pauli::Z}}), PauliTerm::identity(0.5)});
  const auto got = apply_pauli_sum(op, psi.amplitudes());
  const oracle::Vec expect = oracle::sum_matrix(op) * as_eigen(psi);
  for (std::size_t i = 0; i < got.size(); ++i) CHECK(std::abs(got[i] - expect(i)) < 1e-12);
}

TEST_CASE("expectation values") {
  const int L = 8;
  const StateVector zero(L);
  const auto zz = build_hamiltonian({.L = L, .J = 0, .g = -1, .boundary = Boundary::Open});
  CHECK(expectation(zero, zz) == doctest::Approx(L - 1));
  CHECK(expectation(zero, build_hamiltonian({.L = L, .boundary = Boundary::Open})) == doctest::Approx(-7.0));

  Rng rng(3);
  const auto psi = simulate(build_ansatz({.L = L}, random_uniform(rng)));
  const auto ox = spin_flip_operator(L);
  CHECK(expectation(psi, ox * ox) == doctest::Approx(1.0).epsilon(1e-12));

  const auto H = build_hamiltonian({.L = L, .boundary = Boundary::Open});
  const auto ep = lowest_eigenpairs(H, 1);
  CHECK(expectation(to_state(L, ep.vectors.col(0)), H) == doctest::Approx(-8.566772233506).epsilon(1e-11));

  const PauliSum bad(2, {PauliTerm::single(0, Pauli::X, cd(1.0, 0.5))}, true);
  CHECK_THROWS_AS(expectation(StateVector(2), bad), std::domain_error);
}

TEST_CASE("density operator without noise is the pure projector") {
  Rng rng(4);
  const auto c = build_ansatz({.L = 6}, random_uniform(rng));
  const auto psi = simulate(c);
  const auto rho = simulate_mixed(c, {});
  double worst = 0;
  for (std::size_t r = 0; r < rho.dim(); ++r)
    for (std::size_t k = 0; k < rho.dim(); ++k) worst = std::max(worst, std::abs(rho(r, k) - psi[r] * std::conj(psi[k])));
  CHECK(worst < 1e-13);
  const auto H = build_hamiltonian({.L = 6});
  CHECK(rho.expectation(H) == doctest::Approx(expectation(psi, H)).epsilon(1e-12));
}

TEST_CASE("pair depolarizing equals the explicit fifteen-Pauli channel") {
  Rng rng(5);
  const auto psi = simulate(random_mixed_circuit(rng, 3));
  DensityMatrix rho(psi);
  const double p = 0.2;
  rho.depolarize_pair(0, 2, p);

  const oracle::Vec v = as_eigen(psi);
  const oracle::Mat r0 = v * v.adjoint();
  oracle::Mat expect = (1 - p) * r0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      if (a == 0 && b == 0) continue;
      const oracle::Mat P = oracle::term_matrix(
          3, PauliTerm(1.0, {{0, static_cast<Pauli>(a)}, {2, static_cast<Pauli>(b)}}));
      expect += (p / 15) * P * r0 * P.adjoint();
    }
  double worst = 0;
  for (int r = 0; r < 8; ++r)
    for (int k = 0; k < 8; ++k) worst = std::max(worst, std::abs(rho(r, k) - expect(r, k)));
  CHECK(worst < 1e-14);
  CHECK(rho.trace() == doctest::Approx(1.0));
}

TEST_CASE("purity decreases with the CZ depolarizing rate") {
  Rng rng(6);
  const auto c = build_ansatz({.L = 6}, random_uniform(rng));
  double last = 1.0 + 1e-12;
  for (double p : {0.0, 0.002, 0.005, 0.01, 0.05}) {
    const double pur = simulate_mixed(c, {.cz_depolarizing = p}).purity();
    CHECK(pur < last);
    last = pur;
  }
  CHECK(simulate_mixed(c, {.global_depolarizing = 1.0}).purity() == doctest::Approx(1.0 / 64));
  CHECK_THROWS_AS(simulate_mixed(c, {.cz_depolarizing = 1.5}), std::invalid_argument);
}

TEST_CASE("trajectories are an unbiased estimate of the channel") {
  Rng rng(7);
  const auto c = build_ansatz({.L = 4}, random_uniform(rng));
  const NoiseSpec noise{.cz_depolarizing = 0.1};
  const double exact = simulate_mixed(c, noise).diagonal()[0];
  const int n = 4000;
  double s = 0, s2 = 0;
  for (int k = 0; k < n; ++k) {
    Rng r(child_seed(99, k));
    const double v = std::norm(simulate_trajectory(c, noise, r)[0]);
    s += v;
    s2 += v * v;
  }
  const double mean = s / n, sd = std::sqrt((s2 / n - mean * mean) / n);
  CHECK(std::abs(mean - exact) < 4 * sd);
}

TEST_CASE("sampling") {
  Rng rng(8);
  const std::vector<Pauli> z4(4, Pauli::Z);
  const auto h0 = sample(StateVector(4), z4, 100, rng);
  REQUIRE(h0.size() == 1);
  CHECK(h0.at(0) == 100);

  // |+> measured in Z.
  const auto plus = simulate(Circuit(1, Boundary::Open, {YLayer{{std::numbers::pi / 2}}}));
  const std::vector<Pauli> z1{Pauli::Z};
  const auto h = sample(plus, z1, 3000, rng);
  const double f = h.at(0) / 3000.0;
  CHECK(std::abs(f - 0.5) < 3 * std::sqrt(0.25 / 3000));
  // ... and in X it is deterministic.
  const std::vector<Pauli> x1{Pauli::X};
  CHECK(sample(plus, x1, 50, rng).at(0) == 50);
}

TEST_CASE("sampling converges in total variation") {
  Rng rng(9);
  const auto psi = simulate(random_mixed_circuit(rng, 4));
  const std::vector<Pauli> bases{Pauli::X, Pauli::Y, Pauli::Z, Pauli::X};
  const auto p = basis_probabilities(psi, bases);
  for (long shots : {1000L, 10000L, 100000L}) {
    const auto h = sample(psi, bases, shots, rng);
    double tv = 0, bound = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double f = h.count(i) ? static_cast<double>(h.at(i)) / shots : 0.0;
      tv += 0.5 * std::abs(f - p[i]);
      bound += 0.5 * 3 * std::sqrt(p[i] * (1 - p[i]) / shots);
    }
    CHECK(tv < bound);
  }
}

TEST_CASE("basis rotations measure the requested Pauli") {
  Rng rng(10);
  const auto psi = simulate(random_mixed_circuit(rng, 3));
  for (Pauli q : {Pauli::X, Pauli::Y, Pauli::Z}) {
    std::vector<Pauli> bases{Pauli::Z, q, Pauli::Z};
    const auto p = basis_probabilities(psi, bases);
    double ev = 0;
    for (std::size_t i = 0; i < p.size(); ++i) ev += (i & 2 ? -1.0 : 1.0) * p[i];
    CHECK(ev == doctest::Approx(expectation(psi, PauliSum(3, {PauliTerm::single(1, q)}))).epsilon(1e-12));
  }
}

TEST_CASE("energy settings of the cluster chain") {
  const auto H = build_hamiltonian({.L = 8});
  const auto settings = measurement_settings(H);
  CHECK(settings.size() == 3);
  for (const auto& t : H.terms()) {
    int n = 0;
    for (const auto& s : settings) n += term_measurable_in(t, s);
    CHECK(n >= 1);
  }
  Rng rng(11);
  const auto psi = simulate(build_ansatz({.L = 8}, random_uniform(rng)));
  double e = 0;
  for (const auto& s : settings) {
    const auto p = basis_probabilities(psi, s);
    Histogram exact;
    // Large integer weights give an essentially exact histogram.
    for (std::size_t i = 0; i < p.size(); ++i) exact[i] = std::lround(p[i] * 1e12);
    for (const auto& t : H.terms())
      if (term_measurable_in(t, s) && &s == &*std::find_if(settings.begin(), settings.end(),
                                                            [&](const auto& x) { return term_measurable_in(t, x); }))
        e += estimate_term(t, s, exact);
  }
  CHECK(e == doctest::Approx(expectation(psi, H)).epsilon(1e-9));
}

TEST_CASE("measurement CSV round trip") {
  std::vector<MeasurementRecord> recs{{0, {Pauli::X, Pauli::Z}, {{0, 10}, {3, 5}}}, {1, {Pauli::Y, Pauli::Y}, {{2, 7}}}};
  std::stringstream ss;
  write_measurement_csv(ss, recs);
  CHECK(ss.str() == "setting_id,basis_string,bitstring,count\n0,XZ,00,10\n0,XZ,11,5\n1,YY,01,7\n");
  const auto back = read_measurement_csv(ss);
  REQUIRE(back.size() == 2);
  CHECK(back[1].counts.at(2) == 7);
  CHECK(back[0].bases == recs[0].bases);
  std::stringstream bad("setting_id,basis_string,bitstring,count\n0,XZ,0,1\n");
  CHECK_THROWS_WITH_AS(read_measurement_csv(bad), doctest::Contains("line 2"), std::invalid_argument);
}

TEST_CASE("overlap protocol is Born consistent") {
  Rng rng(12);
  const ModelParams p{.L = 8};
  const auto prep = build_ansatz(p, random_uniform(rng));
  const auto ref = build_ansatz(p, random_uniform(rng), {CutKind::Up, CutKind::None});
  CHECK(overlap_protocol(prep, prep) == doctest::Approx(1.0).epsilon(1e-12));

  const auto a = simulate(prep), b = simulate(ref);
  CHECK(overlap_protocol(prep, ref) == doctest::Approx(std::norm(b.inner(a))).epsilon(1e-10));

  const double proj = std::norm(matrix_element(b, spin_flip_operator(8), a));
  CHECK(overlap_protocol(prep, ref, {.project = true}) == doctest::Approx(proj).epsilon(1e-10));
  CHECK(overlap_protocol(prep, ref, {.project = true, .fuse = false}) == doctest::Approx(proj).epsilon(1e-10));
  CHECK(overlap_protocol(prep, ref, {.project = true, .route = ProjectionRoute::FlippedReference}) ==
        doctest::Approx(proj).epsilon(1e-10));
}

TEST_CASE("noisy overlap decays with the CZ depolarizing rate") {
  Rng rng(13);
  const ModelParams p{.L = 6};
  const auto prep = build_ansatz(p, random_uniform(rng));
  const double clean = overlap_protocol(prep, prep);
  const double noisy = overlap_protocol(prep, prep, {.noise = {.cz_depolarizing = 0.05}});
  CHECK(noisy < clean);
  const double traj =
      overlap_protocol(prep, prep, {.noise = {.cz_depolarizing = 0.05}, .trajectories = 4000, .seed = 3});
  CHECK(std::abs(traj - noisy) < 0.02);
}

TEST_CASE("Krylov eigensolver matches dense diagonalization") {
  for (auto bc : {Boundary::Open, Boundary::Periodic}) {
    const auto H = build_hamiltonian({.L = 10, .boundary = bc});
    const PauliOperator op(H);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(op.dense());
    const auto kr = krylov_lowest(op.as_function(), op.dim(), 4);
    REQUIRE(kr.converged);
    for (int i = 0; i < 4; ++i) CHECK(kr.values(i) == doctest::Approx(es.eigenvalues()(i)).epsilon(1e-11));
    const Eigen::MatrixXd gram = kr.vectors.transpose() * kr.vectors;
    CHECK((gram - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("open-chain levels come in exact pairs") {
  const auto H = build_hamiltonian({.L = 12, .boundary = Boundary::Open});
  const auto ep = lowest_eigenpairs(H, 4);
  CHECK(ground_multiplet(ep.values).size() == 2);
  CHECK(ep.values(3) - ep.values(2) < 1e-8);
  CHECK(highest_eigenvalue(H) == doctest::Approx(-ep.values(0)).epsilon(1e-9));
}
