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
#include <numeric>
#include <random>

#include "doctest.h"
#include "gspt/pauli.hpp"
#include "oracle/dense.hpp"

using namespace gspt;
using cd = std::complex<double>;

namespace {

PauliTerm random_term(std::mt19937_64& rng, int L) {
  std::uniform_int_distribution<int> op(0, 3);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<PauliTerm::Factor> f;
  for (int i = 0; i < L; ++i) f.emplace_back(i, static_cast<Pauli>(op(rng)));
  return PauliTerm(cd(u(rng), u(rng)), f);
}

std::vector<std::pair<int, int>> random_layer(std::mt19937_64& rng, int L) {
  std::vector<int> sites(L);
  std::iota(sites.begin(), sites.end(), 0);
  std::shuffle(sites.begin(), sites.end(), rng);
  std::vector<std::pair<int, int>> pairs;
  std::bernoulli_distribution keep(0.7);
  for (int k = 0; k + 1 < L; k += 2)
    if (keep(rng)) pairs.emplace_back(sites[k], sites[k + 1]);
  return pairs;
}

}  // namespace

TEST_CASE("single-site products carry the cyclic phase") {
  const auto x = PauliTerm::single(0, Pauli::X);
  const auto z = PauliTerm::single(0, Pauli::Z);
  CHECK(x * z == PauliTerm::single(0, Pauli::Y, cd(0, -1)));
  CHECK(z * x == PauliTerm::single(0, Pauli::Y, cd(0, 1)));
  const PauliTerm zz(1.0, {{0, Pauli::Z}, {1, Pauli::Z}});
  CHECK(zz * zz == PauliTerm::identity());
}

TEST_CASE("three-site product matches matrix multiplication") {
  const PauliTerm a(1.0, {{0, Pauli::Z}, {1, Pauli::X}, {2, Pauli::Z}});
  const PauliTerm b(1.0, {{1, Pauli::Z}, {2, Pauli::Z}});
  const auto p = a * b;
  CHECK(p == PauliTerm(cd(0, -1), {{0, Pauli::Z}, {1, Pauli::Y}}));
  const oracle::Mat dense = oracle::term_matrix(3, a) * oracle::term_matrix(3, b);
  CHECK((dense - oracle::term_matrix(3, p)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("canonical form ignores construction order and identities") {
  const PauliTerm a(2.0, {{3, Pauli::X}, {1, Pauli::I}, {0, Pauli::Z}});
  const PauliTerm b(2.0, {{0, Pauli::Z}, {3, Pauli::X}});
  CHECK(a == b);
  CHECK(a.weight() == 2);
  CHECK_THROWS_AS(PauliTerm(1.0, {{0, Pauli::X}, {0, Pauli::Z}}), std::invalid_argument);
  CHECK_THROWS_AS(PauliTerm(1.0, {{-1, Pauli::X}}), std::invalid_argument);
}

TEST_CASE("CZ conjugation rules") {
  const std::vector<std::pair<int, int>> one{{0, 1}};
  CHECK(conjugate_by_cz_layer(PauliTerm::single(0, Pauli::X), one) ==
        PauliTerm(1.0, {{0, Pauli::X}, {1, Pauli::Z}}));
  CHECK(conjugate_by_cz_layer(PauliTerm::single(0, Pauli::Z), one) == PauliTerm::single(0, Pauli::Z));

  const std::vector<std::pair<int, int>> two{{0, 1}, {2, 3}};
  const PauliTerm zxz(1.0, {{0, Pauli::Z}, {1, Pauli::X}, {2, Pauli::Z}});
  // Z2 commutes with CZ(2,3), so only X1 picks up a Z0.
  const PauliTerm expect(1.0, {{1, Pauli::X}, {2, Pauli::Z}});
  CHECK(conjugate_by_cz_layer(zxz, two) == expect);

  oracle::Mat u = oracle::cz_matrix(4, 0, 1) * oracle::cz_matrix(4, 2, 3);
  const oracle::Mat dense = u * oracle::term_matrix(4, zxz) * u;
  CHECK((dense - oracle::term_matrix(4, expect)).cwiseAbs().maxCoeff() < 1e-14);

  const std::vector<std::pair<int, int>> bad{{0, 1}, {1, 2}};
  CHECK_THROWS_AS(conjugate_by_cz_layer(zxz, bad), std::invalid_argument);
}

TEST_CASE("CZ conjugation equals dense conjugation on random inputs") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    const int L = 2 + trial % 5;
    const auto t = random_term(rng, L);
    const auto layer = random_layer(rng, L);
    oracle::Mat u = oracle::Mat::Identity(1 << L, 1 << L);
    for (const auto& [a, b] : layer) u = oracle::cz_matrix(L, a, b) * u;
    const auto got = conjugate_by_cz_layer(t, layer);
    CHECK(std::abs(std::abs(got.coefficient()) - std::abs(t.coefficient())) < 1e-15);
    const oracle::Mat dense = u * oracle::term_matrix(L, t) * u.adjoint();
    CHECK((dense - oracle::term_matrix(L, got)).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("multiplication is associative with multiplicative magnitudes") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = random_term(rng, 5), b = random_term(rng, 5), c = random_term(rng, 5);
    const auto l = (a * b) * c, r = a * (b * c);
    CHECK(l.same_string(r));
    CHECK(std::abs(l.coefficient() - r.coefficient()) < 1e-14);
    CHECK(std::abs(std::abs((a * b).coefficient()) - std::abs(a.coefficient()) * std::abs(b.coefficient())) < 1e-14);
  }
}

TEST_CASE("sums merge equal strings and drop cancelled terms") {
  PauliSum s(3, {PauliTerm::single(0, Pauli::X, 1.0), PauliTerm::single(0, Pauli::X, 2.0),
                 PauliTerm::single(1, Pauli::Z, 1.0), PauliTerm::single(1, Pauli::Z, -1.0)});
  REQUIRE(s.size() == 1);
  CHECK(s.coefficient_of(PauliTerm::single(0, Pauli::X)) == cd(3.0));
  const PauliSum t(3, {PauliTerm::single(2, Pauli::Y)});
  CHECK((s + t).size() == 2);
  CHECK((s * s).coefficient_of(PauliTerm::identity()) == cd(9.0));
}

TEST_CASE("commutator of anticommuting strings") {
  const PauliSum x(1, {PauliTerm::single(0, Pauli::X)});
  const PauliSum z(1, {PauliTerm::single(0, Pauli::Z)});
  const auto c = commutator(x, z);
  REQUIRE(c.size() == 1);
  CHECK(c.coefficient_of(PauliTerm::single(0, Pauli::Y)) == cd(0, -2));
  CHECK(commutator(x, x).empty());
}

TEST_CASE("Hermitian flag rejects complex coefficients") {
  PauliSum ok(2, {PauliTerm::single(0, Pauli::X, 0.5)}, true);
  CHECK_NOTHROW(ok.check_hermitian());
  PauliSum bad(2, {PauliTerm::single(0, Pauli::X, cd(0.5, 0.1))}, true);
  CHECK_THROWS_AS(bad.check_hermitian(), std::domain_error);
}

TEST_CASE("text round trip") {
  std::mt19937_64 rng(3);
  std::vector<PauliTerm> terms;
  for (int k = 0; k < 12; ++k) terms.push_back(random_term(rng, 6));
  const PauliSum s(6, terms);
  const auto back = PauliSum::from_text(6, s.to_text());
  CHECK(back == s);
  CHECK_THROWS_WITH_AS(PauliSum::from_text(2, "1,0 0:X\n1,0 5:Z\n"), doctest::Contains("line 2"),
                       std::invalid_argument);
}

TEST_CASE("realness of matrix elements") {
  const PauliSum yy(2, {PauliTerm(1.0, {{0, Pauli::Y}, {1, Pauli::Y}})});
  CHECK(yy.is_real_matrix());
  const PauliSum y(2, {PauliTerm::single(0, Pauli::Y)});
  CHECK_FALSE(y.is_real_matrix());
}
