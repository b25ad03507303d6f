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
#include "gspt/dmrg.hpp"
#include "gspt/ed.hpp"
#include "gspt/model.hpp"

using namespace gspt;

TEST_CASE("DMRG ground energy matches exact diagonalization") {
  for (auto bc : {Boundary::Open, Boundary::Periodic}) {
    ModelParams p;
    p.L = 10;
    p.boundary = bc;
    const auto h = build_hamiltonian(p);
    const auto ed = lowest_eigenpairs(h, 1);
    DmrgConfig cfg;
    cfg.chi_max = 32;
    const auto r = dmrg_ground(h, cfg);
    CHECK(r.converged);
    CHECK(r.energy == doctest::Approx(ed.values(0)).epsilon(1e-9));
    CHECK(r.state.norm() == doctest::Approx(1.0));
  }
}

TEST_CASE("penalty DMRG finds the first excited level") {
  ModelParams p;
  p.L = 10;
  const auto h = build_hamiltonian(p);
  const auto ed = lowest_eigenpairs(h, 2);
  DmrgConfig cfg;
  cfg.chi_max = 32;
  const auto r = dmrg_lowest(h, 2, cfg);
  CHECK(r[0].energy == doctest::Approx(ed.values(0)).epsilon(1e-8));
  CHECK(r[1].energy == doctest::Approx(ed.values(1)).epsilon(1e-7));
  CHECK(std::abs(overlap(r[0].state, r[1].state)) < 1e-4);
}

TEST_CASE("open chain ground doublet is resolved") {
  ModelParams p;
  p.L = 10;
  p.boundary = Boundary::Open;
  const auto h = build_hamiltonian(p);
  const auto ed = lowest_eigenpairs(h, 3);
  DmrgConfig cfg;
  cfg.chi_max = 32;
  const auto r = dmrg_lowest(h, 2, cfg);
  CHECK(r[1].energy == doctest::Approx(ed.values(1)).epsilon(1e-8));
}

TEST_CASE("pinned cut Hamiltonian") {
  ModelParams p;
  p.L = 10;
  const auto h = build_cut_hamiltonian(p, {CutKind::Up, CutKind::Down}).hamiltonian;
  DmrgConfig cfg;
  cfg.chi_max = 32;
  CHECK(dmrg_ground(h, cfg).energy == doctest::Approx(lowest_eigenpairs(h, 1).values(0)).epsilon(1e-9));
}

TEST_CASE("sweep callback and bond limit") {
  ModelParams p;
  p.L = 12;
  DmrgConfig cfg;
  cfg.chi_max = 4;
  cfg.chi_start = 4;
  int calls = 0;
  const auto r = dmrg(build_hamiltonian(p), {}, cfg, nullptr, [&](int, double, int chi) {
    ++calls;
    CHECK(chi <= 4);
  });
  CHECK(calls == r.sweeps);
  CHECK(r.max_truncation > 0.0);
}
