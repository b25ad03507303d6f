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

#include "gspt/model.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace gspt {

std::string to_string(Boundary b) { return b == Boundary::Open ? "obc" : "pbc"; }

Boundary boundary_from_string(const std::string& s) {
  if (s == "obc" || s == "OBC" || s == "open") return Boundary::Open;
  if (s == "pbc" || s == "PBC" || s == "periodic") return Boundary::Periodic;
  throw std::invalid_argument("unknown boundary '" + s + "' (expected obc or pbc)");
}

void ModelParams::validate() const {
  if (L < 3) throw std::invalid_argument("L must be at least 3, got " + std::to_string(L));
  if (L > 64) throw std::invalid_argument("L must be at most 64, got " + std::to_string(L));
}

std::string to_string(CutKind k) {
  switch (k) {
    case CutKind::None: return "none";
    case CutKind::Up: return "up";
    case CutKind::Down: return "down";
    case CutKind::Free: return "free";
  }
  return "?";
}

CutKind cut_from_string(const std::string& s) {
  if (s == "none" || s == "0") return CutKind::None;
  if (s == "up") return CutKind::Up;
  if (s == "down") return CutKind::Down;
  if (s == "free") return CutKind::Free;
  throw std::invalid_argument("unknown cut '" + s + "' (expected none, up, down or free)");
}

int pin_sign(CutKind k) { return k == CutKind::Up ? 1 : (k == CutKind::Down ? -1 : 0); }

std::string CutConfig::label() const {
  auto sym = [](CutKind k) {
    switch (k) {
      case CutKind::None: return std::string("0");
      case CutKind::Up: return std::string("u");
      case CutKind::Down: return std::string("d");
      case CutKind::Free: return std::string("f");
    }
    return std::string("?");
  };
  return sym(a) + sym(b);
}

std::pair<int, int> cut_pair(int L, int which) {
  return which == 0 ? std::pair{L - 1, 0} : std::pair{L / 2 - 1, L / 2};
}

namespace {

PauliTerm zz(int i, int j, double c) { return PauliTerm(c, {{i, Pauli::Z}, {j, Pauli::Z}}); }

PauliTerm zxz(int l, int m, int r, double c) { return PauliTerm(c, {{l, Pauli::Z}, {m, Pauli::X}, {r, Pauli::Z}}); }

}  // namespace

PauliSum build_hamiltonian(const ModelParams& p) {
  p.validate();
  const int L = p.L;
  const bool pbc = p.boundary == Boundary::Periodic;
  std::vector<PauliTerm> terms;
  const int n_bonds = pbc ? L : L - 1;
  for (int j = 0; j < n_bonds; ++j) terms.push_back(zz(j, (j + 1) % L, -p.g));
  for (int j = pbc ? 0 : 1; j < (pbc ? L : L - 1); ++j) terms.push_back(zxz((j + L - 1) % L, j, (j + 1) % L, -p.J));
  for (int j = 0; j < L; ++j) terms.push_back(PauliTerm::single(j, Pauli::X, -p.h));
  // Zero couplings are dropped by the merge tolerance.
  return PauliSum(L, std::move(terms), true);
}

CutHamiltonian build_cut_hamiltonian(const ModelParams& p, const CutConfig& c) {
  p.validate();
  if (p.boundary != Boundary::Periodic) throw std::invalid_argument("cuts are defined on a periodic chain");
  const int L = p.L;
  if (c.b != CutKind::None && L % 2 != 0) throw std::invalid_argument("cut b needs even L, got " + std::to_string(L));

  CutHamiltonian out{PauliSum(L, true), {}, {}};
  std::set<std::pair<int, int>> cut_bonds;  // stored as (i, i+1 mod L)
  for (int which = 0; which < 2; ++which) {
    const CutKind k = which == 0 ? c.a : c.b;
    if (k == CutKind::None) continue;
    const auto [i, j] = cut_pair(L, which);
    cut_bonds.insert({i, j});
    out.removed_bonds.emplace_back(i, j);
    if (const int s = pin_sign(k); s != 0) {
      out.pinned[i] = s;
      out.pinned[j] = s;
    }
  }
  if (c.b != CutKind::None && c.a != CutKind::None && L < 4)
    throw std::invalid_argument("two cuts need L >= 4");

  // A term straddles a cut when two chain-consecutive sites of its support
  // form a cut bond.
  auto straddles = [&](std::initializer_list<int> chain) {
    const std::vector<int> s(chain);
    for (std::size_t k = 0; k + 1 < s.size(); ++k)
      if (cut_bonds.count({s[k], s[k + 1]})) return true;
    return false;
  };
  auto pinned = [&](int site) { return out.pinned.count(site) > 0; };

  std::vector<PauliTerm> terms;
  for (int j = 0; j < L; ++j) {
    const int r = (j + 1) % L;
    const int l = (j + L - 1) % L;
    if (!straddles({j, r})) terms.push_back(zz(j, r, -p.g));
    if (!straddles({l, j, r}) && !pinned(j)) terms.push_back(zxz(l, j, r, -p.J));
    if (!pinned(j)) terms.push_back(PauliTerm::single(j, Pauli::X, -p.h));
  }
  for (const auto& [site, s] : out.pinned) terms.push_back(PauliTerm::single(site, Pauli::Z, -kPinningField * s));
  out.hamiltonian = PauliSum(L, std::move(terms), true);
  return out;
}

PauliSum spin_flip_operator(int L) {
  std::vector<PauliTerm::Factor> f;
  for (int i = 0; i < L; ++i) f.emplace_back(i, Pauli::X);
  return PauliSum(L, {PauliTerm(1.0, std::move(f))}, true);
}

PauliSum symmetry_projector(int L) {
  return (PauliSum(L, {PauliTerm::identity(1.0)}, true) + spin_flip_operator(L)).scaled(0.5);
}

std::vector<std::vector<int>> segments(int L, const CutHamiltonian& cut) {
  std::set<std::pair<int, int>> cuts(cut.removed_bonds.begin(), cut.removed_bonds.end());
  std::vector<std::vector<int>> out;
  if (cuts.empty()) {
    std::vector<int> all;
    for (int i = 0; i < L; ++i)
      if (!cut.pinned.count(i)) all.push_back(i);
    if (!all.empty()) out.push_back(std::move(all));
    return out;
  }
  // Start right after the first cut bond and walk the ring once.
  const int start = cut.removed_bonds.front().second;
  std::vector<int> current;
  for (int k = 0; k < L; ++k) {
    const int site = (start + k) % L;
    if (!cut.pinned.count(site)) current.push_back(site);
    const bool bond_cut = cuts.count({site, (site + 1) % L}) > 0;
    if (bond_cut || cut.pinned.count(site)) {
      if (!current.empty()) out.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

}  // namespace gspt
