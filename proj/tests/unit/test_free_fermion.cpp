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

#include <tuple>

#include "doctest.h"
#include "gspt/ed.hpp"
#include "gspt/model.hpp"
#include "oracle/free_fermion.hpp"

using namespace gspt;

TEST_CASE("free-fermion extremes match dense spectra") {
  for (auto bc : {Boundary::Open, Boundary::Periodic})
    for (int L : {4, 5, 6, 7, 8, 11, 12})
      for (auto [J, g, h] : {std::tuple{1.0, 1.0, 0.0}, {0.0, 1.0, 1.0}, {1.0, 0.7, 0.3}, {0.4, 1.0, 1.3}}) {
        ModelParams p;
        p.L = L;
        p.J = J;
        p.g = g;
        p.h = h;
        p.boundary = bc;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(PauliOperator(build_hamiltonian(p)).dense(),
                                                          Eigen::EigenvaluesOnly);
        const auto ff = oracle::free_fermion_extremes(p);
        CAPTURE(L);
        CHECK(ff.e_ground == doctest::Approx(es.eigenvalues()(0)).epsilon(1e-11));
        CHECK(ff.e_max == doctest::Approx(es.eigenvalues().tail(1)(0)).epsilon(1e-11));
      }
}

TEST_CASE("Pfaffian sign") {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(4, 4);
  a(0, 1) = 2;
  a(2, 3) = -3;
  a = (a - a.transpose()).eval();
  CHECK(oracle::pfaffian_sign(a) == -1);
  a.row(1).swap(a.row(2));
  a.col(1).swap(a.col(2));
  CHECK(oracle::pfaffian_sign(a) == 1);
}
