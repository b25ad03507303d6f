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

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "gspt/circuit.hpp"
#include "gspt/model.hpp"
#include "gspt/mps.hpp"
#include "gspt/sim.hpp"

namespace gspt {

/// Raw brackets entering g for one pinning a (up or down).
struct GTerm {
  CutKind pin = CutKind::Up;
  /// <a0|00> and <a0|O_X|00>, signed.
  double plain = 0.0;
  double flipped = 0.0;
  /// <a0|P|00> = (plain + flipped) / 2.
  double projected = 0.0;
  /// |<a0|aa>|.
  double denominator = 0.0;
  double contribution = 0.0;
};

struct GFunctionResult {
  double g = 0.0;
  /// <00|P|00>.
  double projector_norm = 0.0;
  std::vector<GTerm> terms;
  /// Spread of g over shot resamples (0 without sampling).
  double g_err = 0.0;
  bool valid = true;
  std::string diagnostic;
  /// Where the relative signs of the projected brackets came from.
  std::string sign_source = "state";
};

/// Bracket values of the five configurations, in any representation.
struct GBrackets {
  double n00 = 0.0;  // <00|O_X|00>
  struct PerPin {
    CutKind pin;
    double plain, flipped, denominator;
  };
  std::vector<PerPin> pins;
};

/// g = sum_a |<a0|P|00>| / sqrt(<00|P|00>) / |<a0|aa>|. Throws
/// std::domain_error when a denominator is below 1e-6.
GFunctionResult assemble_g(const GBrackets& b);

/// Real amplitudes of the five configurations {00, u0, d0, uu, dd}.
struct GStates {
  Eigen::VectorXd s00, u0, d0, uu, dd;
};

GBrackets brackets_from_states(const GStates& s, int L);
GFunctionResult g_from_states(const GStates& s, int L);

/// Ground states of the cut Hamiltonians by exact diagonalization (L <= 24).
GStates exact_g_states(const ModelParams& p);
GFunctionResult g_exact(const ModelParams& p);

/// Same from DMRG ground states; for chains beyond dense reach.
struct DmrgConfig;
GFunctionResult g_dmrg(const ModelParams& p, const DmrgConfig& cfg);

/// |<f0|00>| / |<f0|ff>| with free (unpinned) cuts; the Ising free boundary
/// has g = 1, so this is the control for the transverse-field chain.
double g_free_cut_ratio(const ModelParams& p);

struct GCircuits {
  Circuit s00, u0, d0, uu, dd;
};

/// Ansatz circuits of the five configurations. Down configurations are spin
/// flips of the up ones; the ring circuit is the spin-flip partner with
/// non-negative total Z magnetization.
GCircuits g_circuits(const ModelParams& p, const ParamSchedule& ring, const ParamSchedule& one_cut,
                     const ParamSchedule& two_cuts);

struct GProtocolOptions {
  NoiseSpec noise;
  long shots = 0;
  /// Shot resamples used for g_err when shots > 0.
  int resamples = 0;
  ProjectionRoute route = ProjectionRoute::CircuitInsertion;
  std::uint64_t seed = 0;
};

/// Every magnitude from overlap_protocol runs (two per projected bracket);
/// relative signs from the noiseless states.
GFunctionResult g_protocol(const GCircuits& c, const GProtocolOptions& opt = {});

/// Raw |<u0|00>| from the protocol, for noise studies.
double raw_overlap(const GCircuits& c, const GProtocolOptions& opt = {});

struct GSchedules {
  ParamSchedule ring, one_cut, two_cuts;
  /// Probability weight of each prepared state on its exact target space.
  double ring_weight = 0.0, one_cut_weight = 0.0, two_cuts_weight = 0.0;
};

/// Overlap-phase schedules of the three circuit families: the ring from the
/// periodic energy-phase schedule, both cut families from the open one.
GSchedules optimize_g_schedules(const ModelParams& p, const ParamSchedule& ring_base, const ParamSchedule& open_base);

}  // namespace gspt
