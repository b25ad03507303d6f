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

#pragma once

#include <map>
#include <string>
#include <vector>

#include "gspt/pauli.hpp"

namespace gspt {

enum class Boundary { Open, Periodic };

std::string to_string(Boundary b);
Boundary boundary_from_string(const std::string& s);

/// Couplings of H = -g sum Z_j Z_{j+1} - J sum Z_{j-1} X_j Z_{j+1} - h sum X_j.
/// J = g = 1, h = 0 is the critical cluster Ising point; J = 0, g = h = 1 is
/// the critical transverse-field Ising point.
struct ModelParams {
  int L = 8;
  double J = 1.0;
  double g = 1.0;
  double h = 0.0;
  Boundary boundary = Boundary::Periodic;

  /// Throws std::invalid_argument for L < 3.
  void validate() const;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Boundary condition imposed on a cut site pair. Up/Down remove the couplings
/// across the pair and pin both sites; Free only removes the couplings.
enum class CutKind { None, Up, Down, Free };

std::string to_string(CutKind k);
CutKind cut_from_string(const std::string& s);
/// +1 for Up, -1 for Down, 0 otherwise.
int pin_sign(CutKind k);

/// Cut a acts on the site pair (0, L-1); cut b on (L/2-1, L/2).
struct CutConfig {
  CutKind a = CutKind::None;
  CutKind b = CutKind::None;

  bool any() const { return a != CutKind::None || b != CutKind::None; }
  std::string label() const;
  friend bool operator==(const CutConfig&, const CutConfig&) = default;
};

/// Site pair cut by a (index 0) or b (index 1).
std::pair<int, int> cut_pair(int L, int which);

/// Strength of the local field used to pin a cut site.
inline constexpr double kPinningField = 50.0;

struct CutHamiltonian {
  PauliSum hamiltonian;
  /// Pinned site -> Z eigenvalue (+1 or -1).
  std::map<int, int> pinned;
  /// Bonds (i, i+1 mod L) removed by the cuts.
  std::vector<std::pair<int, int>> removed_bonds;
};

PauliSum build_hamiltonian(const ModelParams& p);

/// Requires a periodic chain, and even L when cut b is active.
CutHamiltonian build_cut_hamiltonian(const ModelParams& p, const CutConfig& c);

/// prod_i X_i.
PauliSum spin_flip_operator(int L);
/// (I + prod_i X_i) / 2.
PauliSum symmetry_projector(int L);

/// Sites of the open segments left after the cuts (pinned sites excluded), in
/// chain order. A periodic chain without cuts yields one segment that wraps.
std::vector<std::vector<int>> segments(int L, const CutHamiltonian& cut);

}  // namespace gspt
