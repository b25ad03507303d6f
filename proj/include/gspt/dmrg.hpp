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

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "gspt/mps.hpp"
#include "gspt/pauli.hpp"

namespace gspt {

struct DmrgConfig {
  int chi_max = 256;
  int max_sweeps = 20;
  int min_sweeps = 3;
  /// Stop when a full sweep changes the energy by less than this.
  double energy_tol = 1e-9;
  /// Weight of the projector onto each previously found state.
  double penalty = 50.0;
  double svd_cutoff = 1e-12;
  /// Bond dimension of the random start; it doubles every sweep up to chi_max.
  int chi_start = 16;
  std::uint64_t seed = 0x646d7267ULL;
};

struct DmrgResult {
  Mps state{1};
  /// <H> of the final state, without penalty terms.
  double energy = 0.0;
  bool converged = false;
  int sweeps = 0;
  std::vector<double> sweep_energies;
  double max_truncation = 0.0;
};

using SweepCallback = std::function<void(int sweep, double energy, int max_bond)>;

/// Two-site DMRG for the lowest state of H orthogonal (through an energy
/// penalty) to `lower`. H must be a real matrix in the computational basis.
DmrgResult dmrg(const PauliSum& h, std::span<const Mps> lower, const DmrgConfig& cfg, const Mps* initial = nullptr,
                const SweepCallback& on_sweep = {});

DmrgResult dmrg_ground(const PauliSum& h, const DmrgConfig& cfg = {});

/// The n lowest states, each found with penalties on the ones before it.
std::vector<DmrgResult> dmrg_lowest(const PauliSum& h, int n, const DmrgConfig& cfg = {});

}  // namespace gspt
