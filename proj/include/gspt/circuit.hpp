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

#include <array>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "gspt/model.hpp"
#include "gspt/pauli.hpp"

namespace gspt {

/// Y(theta) = exp(-i theta Y / 2) on every site; angle 0 means no gate.
struct YLayer {
  std::vector<double> angles;
  friend bool operator==(const YLayer&, const YLayer&) = default;
};

/// Disjoint CZ gates.
struct CZLayer {
  std::vector<std::pair<int, int>> pairs;
  friend bool operator==(const CZLayer&, const CZLayer&) = default;
};

/// One single-site Pauli gate per site (I for none). An all-X layer is the
/// projection layer of the overlap protocol.
struct PauliLayer {
  std::vector<Pauli> ops;
  friend bool operator==(const PauliLayer&, const PauliLayer&) = default;
  bool is_identity() const;
  /// The layer as an operator with unit coefficient.
  PauliTerm as_term() const;
};

using Layer = std::variant<YLayer, CZLayer, PauliLayer>;

PauliLayer x_layer(int L);

/// Layered gate program acting on |0...0>. Immutable after construction.
class Circuit {
 public:
  /// Throws std::invalid_argument on overlapping CZ pairs or layers whose
  /// width disagrees with num_sites.
  Circuit(int num_sites, Boundary boundary, std::vector<Layer> layers = {});

  int num_sites() const { return num_sites_; }
  Boundary boundary() const { return boundary_; }
  const std::vector<Layer>& layers() const { return layers_; }
  std::size_t depth() const { return layers_.size(); }

  int count_y_layers() const;
  int count_cz_layers() const;
  int count_cz_gates() const;

  /// This circuit followed by `next` (same register).
  Circuit then(const Circuit& next) const;
  Circuit with_layer(Layer layer) const;
  Circuit without_last_layer() const;

  friend bool operator==(const Circuit&, const Circuit&) = default;

 private:
  int num_sites_;
  Boundary boundary_;
  std::vector<Layer> layers_;
};

inline constexpr int kNumBlocks = 5;

enum class ScheduleMode { Uniform, PowerLaw };

/// Rotation angle of one block: theta(D) = a (D+1)^b + c, or c when uniform.
struct BlockParams {
  double a = 0.0;
  double b = -1.0;
  double c = 0.0;
  friend bool operator==(const BlockParams&, const BlockParams&) = default;
};

/// Site- and block-dependent rotation angles of the five-block ansatz. D is
/// the distance of a site to the nearest end of its open segment.
struct ParamSchedule {
  ScheduleMode mode = ScheduleMode::Uniform;
  std::array<BlockParams, kNumBlocks> blocks{};

  static ParamSchedule uniform(const std::array<double, kNumBlocks>& c);
  static ParamSchedule zero(ScheduleMode mode);

  double angle(int block, int distance) const;
  /// Power-law schedules require b < 0 in every block.
  void validate() const;
  friend bool operator==(const ParamSchedule&, const ParamSchedule&) = default;
};

enum class CzPatternOrder { EvenFirst, OddFirst };

/// The five-block ansatz: block j applies a Y layer then a CZ layer, with the
/// CZ patterns alternating A = {(0,1),(2,3),...}, B = {(1,2),(3,4),...}
/// (A,B,A,B,A for EvenFirst). Periodic chains add (L-1,0) to B and need even
/// L. Cut bonds are removed from both patterns, pinned sites take no CZ gate
/// and no rotation except the first layer (0 for up, pi for down). A
/// configuration whose pins are all down is built as the exact spin flip of
/// the all-up configuration.
Circuit build_ansatz(const ModelParams& p, const ParamSchedule& sched, const CutConfig& cut = {},
                     CzPatternOrder order = CzPatternOrder::EvenFirst);

/// Per-site distance to the nearest end of its open segment (0 for pinned
/// sites and for an uncut periodic chain).
std::vector<int> boundary_distances(const ModelParams& p, const CutConfig& cut);

/// CZ pattern used by block j (0-based) of build_ansatz.
std::vector<std::pair<int, int>> ansatz_cz_pattern(const ModelParams& p, const CutConfig& cut, int block,
                                                   CzPatternOrder order = CzPatternOrder::EvenFirst);

/// Reversed layers with negated angles; U(invert(c)) = U(c)^dagger.
Circuit invert(const Circuit& c);

struct PhasedCircuit {
  Circuit circuit;
  Complex phase;  // U(original-with-prefix)|0> = phase * U(circuit)|0>
};

/// Circuit preparing prod_i X_i U|0> from |0>, with the same gate structure:
/// the Pauli string is pushed to the start through every layer and absorbed
/// into the first Y layer.
PhasedCircuit spin_flip(const Circuit& c);

struct SimplifiedMeasurement {
  Circuit circuit;
  PauliSum observable;
};

/// Drops a terminal CZ layer and conjugates the observable through it, so
/// that <obs> on the original circuit equals <obs'> on the shorter one.
/// Throws std::invalid_argument when the last layer is not a CZ layer.
SimplifiedMeasurement simplify_terminal_cz(const Circuit& c, const PauliSum& obs);

struct FuseResult {
  Circuit circuit;
  bool applied = false;
  Complex phase = 1.0;
  std::string diagnostic;
};

/// Replaces the first CZ - X(all sites) - CZ sandwich by a Pauli layer
/// (CZ1 X CZ1 on the first CZ's pairs) followed by a CZ layer on the pairs in
/// exactly one of the two CZ layers (split in two when those pairs share a
/// site), omitted when the two layers agree. The
/// unitary is unchanged up to `phase`. Without a sandwich the circuit is
/// returned unchanged with a diagnostic.
FuseResult fuse_sandwiched_x_layer(const Circuit& c);

}  // namespace gspt
