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

#include "gspt/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <map>
#include <numbers>
#include <set>
#include <stdexcept>

namespace gspt {

bool PauliLayer::is_identity() const {
  return std::all_of(ops.begin(), ops.end(), [](Pauli p) { return p == Pauli::I; });
}

PauliTerm PauliLayer::as_term() const {
  std::vector<PauliTerm::Factor> f;
  for (int i = 0; i < static_cast<int>(ops.size()); ++i) f.emplace_back(i, ops[i]);
  return PauliTerm(1.0, std::move(f));
}

PauliLayer x_layer(int L) { return PauliLayer{std::vector<Pauli>(L, Pauli::X)}; }

Circuit::Circuit(int num_sites, Boundary boundary, std::vector<Layer> layers)
    : num_sites_(num_sites), boundary_(boundary), layers_(std::move(layers)) {
  if (num_sites < 1) throw std::invalid_argument("circuit needs at least one site");
  for (std::size_t k = 0; k < layers_.size(); ++k) {
    const auto where = " (layer " + std::to_string(k) + ")";
    std::visit(
        [&](const auto& layer) {
          using T = std::decay_t<decltype(layer)>;
          if constexpr (std::is_same_v<T, YLayer>) {
            if (static_cast<int>(layer.angles.size()) != num_sites)
              throw std::invalid_argument("Y layer width mismatch" + where);
          } else if constexpr (std::is_same_v<T, PauliLayer>) {
            if (static_cast<int>(layer.ops.size()) != num_sites)
              throw std::invalid_argument("Pauli layer width mismatch" + where);
          } else {
            std::set<int> used;
            for (const auto& [a, b] : layer.pairs) {
              if (a < 0 || b < 0 || a >= num_sites || b >= num_sites || a == b)
                throw std::invalid_argument("invalid CZ pair" + where);
              if (!used.insert(a).second || !used.insert(b).second)
                throw std::invalid_argument("overlapping CZ pairs" + where);
            }
          }
        },
        layers_[k]);
  }
}

int Circuit::count_y_layers() const {
  return static_cast<int>(
      std::count_if(layers_.begin(), layers_.end(), [](const Layer& l) { return std::holds_alternative<YLayer>(l); }));
}

int Circuit::count_cz_layers() const {
  return static_cast<int>(
      std::count_if(layers_.begin(), layers_.end(), [](const Layer& l) { return std::holds_alternative<CZLayer>(l); }));
}

int Circuit::count_cz_gates() const {
  int n = 0;
  for (const auto& l : layers_)
    if (const auto* cz = std::get_if<CZLayer>(&l)) n += static_cast<int>(cz->pairs.size());
  return n;
}

Circuit Circuit::then(const Circuit& next) const {
  if (next.num_sites_ != num_sites_) throw std::invalid_argument("cannot compose circuits of different width");
  std::vector<Layer> all = layers_;
  all.insert(all.end(), next.layers_.begin(), next.layers_.end());
  return Circuit(num_sites_, boundary_, std::move(all));
}

Circuit Circuit::with_layer(Layer layer) const {
  std::vector<Layer> all = layers_;
  all.push_back(std::move(layer));
  return Circuit(num_sites_, boundary_, std::move(all));
}

Circuit Circuit::without_last_layer() const {
  if (layers_.empty()) throw std::invalid_argument("circuit has no layers");
  return Circuit(num_sites_, boundary_, std::vector<Layer>(layers_.begin(), layers_.end() - 1));
}

// ---------------------------------------------------------------------------

ParamSchedule ParamSchedule::uniform(const std::array<double, kNumBlocks>& c) {
  ParamSchedule s;
  s.mode = ScheduleMode::Uniform;
  for (int j = 0; j < kNumBlocks; ++j) s.blocks[j] = {0.0, -1.0, c[j]};
  return s;
}

ParamSchedule ParamSchedule::zero(ScheduleMode mode) {
  ParamSchedule s;
  s.mode = mode;
  return s;
}

double ParamSchedule::angle(int block, int distance) const {
  const auto& p = blocks.at(block);
  if (mode == ScheduleMode::Uniform) return p.c;
  return p.a * std::pow(distance + 1.0, p.b) + p.c;
}

void ParamSchedule::validate() const {
  if (mode != ScheduleMode::PowerLaw) return;
  for (int j = 0; j < kNumBlocks; ++j)
    if (!(blocks[j].b < 0.0))
      throw std::invalid_argument("power-law exponent of block " + std::to_string(j) + " must be negative");
}

namespace {

struct AnsatzGeometry {
  std::set<std::pair<int, int>> cut_bonds;
  std::map<int, int> pinned;
};

AnsatzGeometry geometry(const ModelParams& p, const CutConfig& cut) {
  AnsatzGeometry g;
  if (!cut.any()) return g;
  const auto ch = build_cut_hamiltonian(p, cut);
  g.cut_bonds.insert(ch.removed_bonds.begin(), ch.removed_bonds.end());
  g.pinned = ch.pinned;
  return g;
}

std::vector<std::pair<int, int>> pattern(const ModelParams& p, const AnsatzGeometry& g, bool pattern_a) {
  const int L = p.L;
  std::vector<std::pair<int, int>> pairs;
  for (int i = pattern_a ? 0 : 1; i + 1 < L; i += 2) pairs.emplace_back(i, i + 1);
  if (!pattern_a && p.boundary == Boundary::Periodic) pairs.emplace_back(L - 1, 0);
  std::erase_if(pairs, [&](const auto& pr) {
    return g.cut_bonds.count(pr) || g.pinned.count(pr.first) || g.pinned.count(pr.second);
  });
  return pairs;
}

bool uses_pattern_a(int block, CzPatternOrder order) {
  return (block % 2 == 0) == (order == CzPatternOrder::EvenFirst);
}

bool all_pins_down(const CutConfig& c) {
  const bool any_down = c.a == CutKind::Down || c.b == CutKind::Down;
  const bool any_up = c.a == CutKind::Up || c.b == CutKind::Up;
  return any_down && !any_up;
}

CutKind flipped(CutKind k) { return k == CutKind::Down ? CutKind::Up : k; }

}  // namespace

std::vector<int> boundary_distances(const ModelParams& p, const CutConfig& cut) {
  std::vector<int> d(p.L, 0);
  if (!cut.any()) {
    if (p.boundary == Boundary::Open)
      for (int i = 0; i < p.L; ++i) d[i] = std::min(i, p.L - 1 - i);
    return d;
  }
  // A pinned site closes the open chain it belongs to, so distances count
  // from it rather than from the first free site.
  const auto ch = build_cut_hamiltonian(p, cut);
  const int L = p.L;
  for (const auto& seg : segments(L, ch)) {
    const int n = static_cast<int>(seg.size());
    const int lp = ch.pinned.count((seg.front() + L - 1) % L) ? 1 : 0;
    const int rp = ch.pinned.count((seg.back() + 1) % L) ? 1 : 0;
    for (int k = 0; k < n; ++k) d[seg[k]] = std::min(k + lp, n - 1 - k + rp);
  }
  return d;
}

std::vector<std::pair<int, int>> ansatz_cz_pattern(const ModelParams& p, const CutConfig& cut, int block,
                                                   CzPatternOrder order) {
  return pattern(p, geometry(p, cut), uses_pattern_a(block, order));
}

Circuit build_ansatz(const ModelParams& p, const ParamSchedule& sched, const CutConfig& cut, CzPatternOrder order) {
  p.validate();
  sched.validate();
  if (p.boundary == Boundary::Periodic && p.L % 2 != 0)
    throw std::invalid_argument("periodic ansatz needs even L: the wraparound CZ would collide with pattern A");
  if (cut.any() && p.boundary != Boundary::Periodic) throw std::invalid_argument("cuts need a periodic chain");

  if (all_pins_down(cut)) {
    const CutConfig up{flipped(cut.a), flipped(cut.b)};
    return spin_flip(build_ansatz(p, sched, up, order)).circuit;
  }

  const auto g = geometry(p, cut);
  const auto dist = boundary_distances(p, cut);
  std::vector<Layer> layers;
  for (int j = 0; j < kNumBlocks; ++j) {
    YLayer y{std::vector<double>(p.L, 0.0)};
    for (int i = 0; i < p.L; ++i) {
      if (auto it = g.pinned.find(i); it != g.pinned.end())
        y.angles[i] = (j == 0 && it->second < 0) ? std::numbers::pi : 0.0;
      else
        y.angles[i] = sched.angle(j, dist[i]);
    }
    layers.emplace_back(std::move(y));
    layers.emplace_back(CZLayer{pattern(p, g, uses_pattern_a(j, order))});
  }
  return Circuit(p.L, p.boundary, std::move(layers));
}

Circuit invert(const Circuit& c) {
  std::vector<Layer> out;
  out.reserve(c.depth());
  for (auto it = c.layers().rbegin(); it != c.layers().rend(); ++it) {
    if (const auto* y = std::get_if<YLayer>(&*it)) {
      YLayer neg = *y;
      for (auto& a : neg.angles) a = -a;
      out.emplace_back(std::move(neg));
    } else {
      out.push_back(*it);
    }
  }
  return Circuit(c.num_sites(), c.boundary(), std::move(out));
}

PhasedCircuit spin_flip(const Circuit& c) {
  const int L = c.num_sites();
  PauliTerm p = x_layer(L).as_term();
  std::vector<Layer> out(c.layers().begin(), c.layers().end());
  for (auto it = out.rbegin(); it != out.rend(); ++it) {
    if (auto* y = std::get_if<YLayer>(&*it)) {
      // X and Z anticommute with Y, so P Y(t) = Y(-t) P on those sites.
      for (int i = 0; i < L; ++i) {
        const Pauli f = p.at(i);
        if (f == Pauli::X || f == Pauli::Z) y->angles[i] = -y->angles[i];
      }
    } else if (const auto* cz = std::get_if<CZLayer>(&*it)) {
      p = conjugate_by_cz_layer(p, cz->pairs);
    } else {
      const PauliTerm q = std::get<PauliLayer>(*it).as_term();
      p = multiply(multiply(q, p), q);
    }
  }
  // p|0> = coeff * i^{#Y} |x-bits>; the flips are absorbed as Y(pi) rotations.
  Complex phase = p.coefficient();
  for (int k = 0; k < p.y_count(); ++k) phase *= Complex{0.0, 1.0};
  std::vector<int> flips;
  for (const auto& [site, f] : p.factors())
    if (f == Pauli::X || f == Pauli::Y) flips.push_back(site);
  if (!flips.empty()) {
    if (!out.empty() && std::holds_alternative<YLayer>(out.front())) {
      auto& y = std::get<YLayer>(out.front());
      for (int s : flips) y.angles[s] += std::numbers::pi;
    } else {
      PauliLayer xs{std::vector<Pauli>(L, Pauli::I)};
      for (int s : flips) xs.ops[s] = Pauli::X;
      out.insert(out.begin(), std::move(xs));
    }
  }
  return {Circuit(L, c.boundary(), std::move(out)), phase};
}

SimplifiedMeasurement simplify_terminal_cz(const Circuit& c, const PauliSum& obs) {
  if (c.layers().empty() || !std::holds_alternative<CZLayer>(c.layers().back()))
    throw std::invalid_argument("simplify_terminal_cz: last layer is not a CZ layer");
  if (obs.num_sites() != c.num_sites()) throw std::invalid_argument("observable width differs from circuit");
  const auto& cz = std::get<CZLayer>(c.layers().back());
  return {c.without_last_layer(), obs.conjugated_by_cz_layer(cz.pairs)};
}

FuseResult fuse_sandwiched_x_layer(const Circuit& c) {
  const auto& layers = c.layers();
  const int L = c.num_sites();
  for (std::size_t k = 1; k + 1 < layers.size(); ++k) {
    const auto* before = std::get_if<CZLayer>(&layers[k - 1]);
    const auto* mid = std::get_if<PauliLayer>(&layers[k]);
    const auto* after = std::get_if<CZLayer>(&layers[k + 1]);
    if (!before || !mid || !after || !(*mid == x_layer(L))) continue;

    // CZ2 X CZ1 = (CZ2 CZ1)(CZ1 X CZ1); CZ2 CZ1 keeps the pairs in exactly
    // one of the two layers.
    const PauliTerm image = conjugate_by_cz_layer(mid->as_term(), before->pairs);
    PauliLayer fused{std::vector<Pauli>(L, Pauli::I)};
    for (const auto& [site, f] : image.factors()) fused.ops[site] = f;

    auto norm = [](std::pair<int, int> pr) { return std::minmax(pr.first, pr.second); };
    std::set<std::pair<int, int>> a, b;
    for (const auto& pr : before->pairs) a.insert(norm(pr));
    for (const auto& pr : after->pairs) b.insert(norm(pr));
    CZLayer only_a, only_b;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(only_a.pairs));
    std::set_difference(b.begin(), b.end(), a.begin(), a.end(), std::back_inserter(only_b.pairs));
    // The two differences are matchings; together they are one only when no
    // site appears in both.
    std::set<int> sites_a;
    for (const auto& [x, y] : only_a.pairs) sites_a.insert({x, y});
    const bool disjoint = std::none_of(only_b.pairs.begin(), only_b.pairs.end(),
                                       [&](const auto& pr) { return sites_a.count(pr.first) || sites_a.count(pr.second); });
    std::vector<Layer> out(layers.begin(), layers.begin() + (k - 1));
    out.emplace_back(std::move(fused));
    if (disjoint) {
      CZLayer rest = only_a;
      rest.pairs.insert(rest.pairs.end(), only_b.pairs.begin(), only_b.pairs.end());
      std::sort(rest.pairs.begin(), rest.pairs.end());
      if (!rest.pairs.empty()) out.emplace_back(std::move(rest));
    } else {
      out.emplace_back(std::move(only_a));
      out.emplace_back(std::move(only_b));
    }
    out.insert(out.end(), layers.begin() + (k + 2), layers.end());
    return {Circuit(L, c.boundary(), std::move(out)), true, image.coefficient(), {}};
  }
  return {c, false, 1.0, "no CZ - X - CZ sandwich found"};
}

}  // namespace gspt
