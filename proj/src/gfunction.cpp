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

#include "gspt/gfunction.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "gspt/dmrg.hpp"
#include "gspt/ed.hpp"
#include "gspt/prep.hpp"
#include "gspt/rng.hpp"
#include "gspt/sim.hpp"

namespace gspt {

namespace {

constexpr double kMinDenominator = 1e-6;

Eigen::VectorXd flip_all(const Eigen::VectorXd& v) {
  const Eigen::Index n = v.size();
  Eigen::VectorXd out(n);
  for (Eigen::Index i = 0; i < n; ++i) out(i) = v((n - 1) ^ i);
  return out;
}

Eigen::VectorXd ground(const PauliSum& h) {
  KrylovOptions ko;
  ko.tol = 1e-10;
  return lowest_eigenpairs(h, 1, ko).vectors.col(0);
}

Mps flip_all(const Mps& m) {
  Mps out = m;
  Eigen::Matrix2d x;
  x << 0, 1, 1, 0;
  for (int i = 0; i < out.num_sites(); ++i) out.apply_single(i, x);
  return out;
}

}  // namespace

GFunctionResult assemble_g(const GBrackets& b) {
  GFunctionResult r;
  r.projector_norm = 0.5 * (1.0 + b.n00);
  if (!(r.projector_norm > kMinDenominator))
    throw std::domain_error("ring state has no weight in the symmetric sector");
  for (const auto& p : b.pins) {
    if (p.denominator < kMinDenominator)
      throw std::domain_error("degenerate configuration: |<a0|aa>| = " + std::to_string(p.denominator));
    GTerm t;
    t.pin = p.pin;
    t.plain = p.plain;
    t.flipped = p.flipped;
    t.projected = 0.5 * (p.plain + p.flipped);
    t.denominator = p.denominator;
    t.contribution = std::abs(t.projected) / std::sqrt(r.projector_norm) / p.denominator;
    r.g += t.contribution;
    r.terms.push_back(t);
  }
  return r;
}

GBrackets brackets_from_states(const GStates& s, int L) {
  const Eigen::Index n = Eigen::Index{1} << L;
  for (const auto* v : {&s.s00, &s.u0, &s.d0, &s.uu, &s.dd})
    if (v->size() != n) throw std::invalid_argument("configuration state has the wrong size");
  GBrackets b;
  const Eigen::VectorXd x00 = flip_all(s.s00);
  b.n00 = s.s00.dot(x00);
  b.pins.push_back({CutKind::Up, s.u0.dot(s.s00), s.u0.dot(x00), std::abs(s.u0.dot(s.uu))});
  b.pins.push_back({CutKind::Down, s.d0.dot(s.s00), s.d0.dot(x00), std::abs(s.d0.dot(s.dd))});
  return b;
}

GFunctionResult g_from_states(const GStates& s, int L) {
  auto r = assemble_g(brackets_from_states(s, L));
  // Identical configurations make every ratio trivial.
  const double same = std::min({std::abs(s.s00.dot(s.u0)), std::abs(s.u0.dot(s.uu)), std::abs(s.d0.dot(s.dd))});
  if (same > 1.0 - 1e-9) {
    r.valid = false;
    r.diagnostic = "configurations coincide; the cut states are not distinct from the ring state";
  }
  return r;
}

GStates exact_g_states(const ModelParams& p) {
  if (p.boundary != Boundary::Periodic) throw std::invalid_argument("g needs a periodic chain");
  if (p.L % 2 != 0) throw std::invalid_argument("g needs even L");
  GStates s;
  s.s00 = ground(build_hamiltonian(p));
  s.u0 = ground(build_cut_hamiltonian(p, {CutKind::Up, CutKind::None}).hamiltonian);
  s.d0 = ground(build_cut_hamiltonian(p, {CutKind::Down, CutKind::None}).hamiltonian);
  s.uu = ground(build_cut_hamiltonian(p, {CutKind::Up, CutKind::Up}).hamiltonian);
  s.dd = ground(build_cut_hamiltonian(p, {CutKind::Down, CutKind::Down}).hamiltonian);
  return s;
}

GFunctionResult g_exact(const ModelParams& p) { return g_from_states(exact_g_states(p), p.L); }

GFunctionResult g_dmrg(const ModelParams& p, const DmrgConfig& cfg) {
  if (p.boundary != Boundary::Periodic || p.L % 2 != 0) throw std::invalid_argument("g needs a periodic chain of even L");
  auto solve = [&](const CutConfig& c) {
    const PauliSum h = c.any() ? build_cut_hamiltonian(p, c).hamiltonian : build_hamiltonian(p);
    return dmrg_ground(h, cfg).state;
  };
  const Mps s00 = solve({}), u0 = solve({CutKind::Up, CutKind::None}), d0 = solve({CutKind::Down, CutKind::None});
  const Mps uu = solve({CutKind::Up, CutKind::Up}), dd = solve({CutKind::Down, CutKind::Down});
  const Mps x00 = flip_all(s00);
  GBrackets b;
  b.n00 = overlap(s00, x00).real();
  b.pins.push_back({CutKind::Up, overlap(u0, s00).real(), overlap(u0, x00).real(), std::abs(overlap(u0, uu))});
  b.pins.push_back({CutKind::Down, overlap(d0, s00).real(), overlap(d0, x00).real(), std::abs(overlap(d0, dd))});
  return assemble_g(b);
}

double g_free_cut_ratio(const ModelParams& p) {
  const Eigen::VectorXd s00 = ground(build_hamiltonian(p));
  const Eigen::VectorXd f0 = ground(build_cut_hamiltonian(p, {CutKind::Free, CutKind::None}).hamiltonian);
  const Eigen::VectorXd ff = ground(build_cut_hamiltonian(p, {CutKind::Free, CutKind::Free}).hamiltonian);
  const double den = std::abs(f0.dot(ff));
  if (den < kMinDenominator) throw std::domain_error("degenerate free-cut configuration");
  return std::abs(f0.dot(s00)) / den;
}

GCircuits g_circuits(const ModelParams& p, const ParamSchedule& ring, const ParamSchedule& one_cut,
                     const ParamSchedule& two_cuts) {
  // The schedule fixes the ring state only up to the global spin flip. Take
  // the representative polarized along +Z, the side of the up-pinned states.
  Circuit s00 = build_ansatz(p, ring);
  std::vector<PauliTerm> zs;
  for (int i = 0; i < p.L; ++i) zs.push_back(PauliTerm::single(i, Pauli::Z, 1.0));
  if (expectation(simulate(s00), PauliSum(p.L, std::move(zs), true)) < 0) s00 = spin_flip(s00).circuit;
  return {std::move(s00),
          build_ansatz(p, one_cut, {CutKind::Up, CutKind::None}),
          build_ansatz(p, one_cut, {CutKind::Down, CutKind::None}),
          build_ansatz(p, two_cuts, {CutKind::Up, CutKind::Up}),
          build_ansatz(p, two_cuts, {CutKind::Down, CutKind::Down})};
}

namespace {

struct ProtocolRun {
  const Circuit* prep;
  const Circuit* ref;
  bool project;
};

double sign_of(double x) { return x < 0 ? -1.0 : 1.0; }

}  // namespace

GFunctionResult g_protocol(const GCircuits& c, const GProtocolOptions& opt) {
  const int L = c.s00.num_sites();
  // Signs from the noiseless states.
  GStates st{real_amplitudes(simulate(c.s00)), real_amplitudes(simulate(c.u0)), real_amplitudes(simulate(c.d0)),
             real_amplitudes(simulate(c.uu)), real_amplitudes(simulate(c.dd))};
  const GBrackets exact = brackets_from_states(st, L);

  const std::vector<ProtocolRun> runs{{&c.s00, &c.s00, true}, {&c.s00, &c.u0, false}, {&c.s00, &c.u0, true},
                                      {&c.uu, &c.u0, false},  {&c.s00, &c.d0, false}, {&c.s00, &c.d0, true},
                                      {&c.dd, &c.d0, false}};
  std::vector<double> probs;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    OverlapOptions oo;
    oo.project = runs[k].project;
    oo.route = opt.route;
    oo.noise = opt.noise;
    oo.seed = child_seed(opt.seed, k);
    probs.push_back(overlap_protocol(*runs[k].prep, *runs[k].ref, oo));
  }
  auto build = [&](const std::vector<double>& p) {
    GBrackets b;
    b.n00 = sign_of(exact.n00) * std::sqrt(p[0]);
    b.pins.push_back({CutKind::Up, sign_of(exact.pins[0].plain) * std::sqrt(p[1]),
                      sign_of(exact.pins[0].flipped) * std::sqrt(p[2]), std::sqrt(p[3])});
    b.pins.push_back({CutKind::Down, sign_of(exact.pins[1].plain) * std::sqrt(p[4]),
                      sign_of(exact.pins[1].flipped) * std::sqrt(p[5]), std::sqrt(p[6])});
    return b;
  };
  if (opt.shots <= 0) {
    auto r = assemble_g(build(probs));
    r.sign_source = "noiseless simulation";
    return r;
  }
  // Binomial shot sampling of every run; resamples give the spread of g.
  Rng rng(child_seed(opt.seed, 0x5a11ULL));
  auto draw = [&](double p) {
    std::binomial_distribution<long> bin(opt.shots, std::clamp(p, 0.0, 1.0));
    return static_cast<double>(bin(rng)) / static_cast<double>(opt.shots);
  };
  std::vector<double> measured;
  for (double p : probs) measured.push_back(draw(p));
  auto r = assemble_g(build(measured));
  r.sign_source = "noiseless simulation";
  if (opt.resamples > 1) {
    std::vector<double> gs;
    for (int k = 0; k < opt.resamples; ++k) {
      std::vector<double> re;
      for (double p : measured) re.push_back(draw(p));
      gs.push_back(assemble_g(build(re)).g);
    }
    double mean = 0, var = 0;
    for (double g : gs) mean += g;
    mean /= static_cast<double>(gs.size());
    for (double g : gs) var += (g - mean) * (g - mean);
    r.g_err = std::sqrt(var / static_cast<double>(gs.size() - 1));
  }
  return r;
}

double raw_overlap(const GCircuits& c, const GProtocolOptions& opt) {
  OverlapOptions oo;
  oo.noise = opt.noise;
  oo.seed = opt.seed;
  return std::sqrt(overlap_protocol(c.s00, c.u0, oo));
}

GSchedules optimize_g_schedules(const ModelParams& p, const ParamSchedule& ring_base, const ParamSchedule& open_base) {
  GSchedules out;
  const auto ring = optimize_overlap_phase(p, ring_base, exact_targets(p).states);
  const CutConfig one{CutKind::Up, CutKind::None}, two{CutKind::Up, CutKind::Up};
  const auto r1 = optimize_overlap_phase(p, open_base, exact_targets(p, one).states, one);
  const auto r2 = optimize_overlap_phase(p, open_base, exact_targets(p, two).states, two);
  out.ring = ring.schedule;
  out.one_cut = r1.schedule;
  out.two_cuts = r2.schedule;
  out.ring_weight = std::pow(1.0 - ring.loss, 2);
  out.one_cut_weight = std::pow(1.0 - r1.loss, 2);
  out.two_cuts_weight = std::pow(1.0 - r2.loss, 2);
  return out;
}

}  // namespace gspt
