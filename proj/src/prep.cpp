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

#include "gspt/prep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "gspt/ed.hpp"
#include "gspt/rng.hpp"
#include "gspt/sim.hpp"

namespace gspt {

double normalized_energy_distance(double energy, double e_ground, double e_max) {
  if (!(e_max > e_ground)) throw std::invalid_argument("empty spectral range");
  return (energy - e_ground) / (e_max - e_ground);
}

TargetStates exact_targets(const ModelParams& p, const CutConfig& cut) {
  const PauliSum h = cut.any() ? build_cut_hamiltonian(p, cut).hamiltonian : build_hamiltonian(p);
  KrylovOptions ko;
  ko.tol = 1e-8;
  const int k = 2;
  const Eigenpairs ev = lowest_eigenpairs(h, k, ko);
  TargetStates t;
  t.energies = ev.values;
  std::vector<int> cols;
  if (p.boundary == Boundary::Periodic && !cut.any()) {
    cols = {0, 1};
  } else {
    cols = ground_multiplet(ev.values, 1e-6);
  }
  t.states.resize(ev.vectors.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) t.states.col(static_cast<Eigen::Index>(j)) = ev.vectors.col(cols[j]);
  t.e_max = highest_eigenvalue(h, ko);
  return t;
}

double target_weight(const Circuit& c, const Eigen::MatrixXd& states) {
  const Eigen::VectorXd psi = real_amplitudes(simulate(c));
  return (states.transpose() * psi).norm();
}

namespace {

constexpr int kEnergyVarsOpen = 3 * kNumBlocks;

ParamSchedule energy_schedule(Boundary b, const Eigen::VectorXd& x) {
  if (b == Boundary::Periodic) {
    std::array<double, kNumBlocks> c{};
    for (int j = 0; j < kNumBlocks; ++j) c[j] = x(j);
    return ParamSchedule::uniform(c);
  }
  ParamSchedule s = ParamSchedule::zero(ScheduleMode::PowerLaw);
  for (int j = 0; j < kNumBlocks; ++j) s.blocks[j] = {x(3 * j), -std::exp(x(3 * j + 1)), x(3 * j + 2)};
  return s;
}

}  // namespace

PhaseResult optimize_energy_phase(const ModelParams& p, const EnergyPhaseOptions& opt) {
  const PauliSum h = build_hamiltonian(p);
  const PauliOperator hop(h);
  const bool pbc = p.boundary == Boundary::Periodic;
  const int n = pbc ? kNumBlocks : kEnergyVarsOpen;
  int evals = 0;
  const Objective f = [&](const Eigen::VectorXd& x) {
    ++evals;
    return hop.expectation(real_amplitudes(simulate(build_ansatz(p, energy_schedule(p.boundary, x)))));
  };
  PhaseResult best;
  best.loss = std::numeric_limits<double>::infinity();
  Rng rng(opt.seed);
  for (int r = 0; r < std::max(1, opt.restarts); ++r) {
    Eigen::VectorXd x0(n);
    for (int k = 0; k < n; ++k) x0(k) = uniform(rng, -std::numbers::pi / 4, std::numbers::pi / 4);
    if (!pbc)
      for (int j = 0; j < kNumBlocks; ++j) x0(3 * j + 1) = std::log(uniform(rng, 0.5, 2.0));
    const auto res = minimize_bfgs(f, x0, opt.bfgs);
    if (res.value < best.loss) {
      best.loss = res.value;
      best.variables = res.x;
      best.trace = res.trace;
      best.converged = res.converged;
      best.message = res.message;
    }
  }
  best.schedule = energy_schedule(p.boundary, best.variables);
  best.evaluations = evals;
  return best;
}

ParamSchedule apply_overlap_variables(const ParamSchedule& base, const Eigen::VectorXd& v) {
  if (v.size() != kNumBlocks) throw std::invalid_argument("overlap phase has five variables");
  ParamSchedule s = base;
  for (int j = 0; j < kNumBlocks; ++j) {
    if (base.mode == ScheduleMode::Uniform) {
      s.blocks[j].c = v(j);
    } else {
      s.blocks[j].a = base.blocks[j].a + v(j);
      s.blocks[j].c = base.blocks[j].c - v(j);
    }
  }
  return s;
}

Eigen::VectorXd overlap_variables(const ParamSchedule& base, const ParamSchedule& s) {
  Eigen::VectorXd v(kNumBlocks);
  for (int j = 0; j < kNumBlocks; ++j)
    v(j) = base.mode == ScheduleMode::Uniform ? s.blocks[j].c : s.blocks[j].a - base.blocks[j].a;
  return v;
}

PhaseResult optimize_overlap_phase(const ModelParams& p, const ParamSchedule& base, const Eigen::MatrixXd& targets,
                                   const CutConfig& cut, const OverlapPhaseOptions& opt) {
  if (targets.rows() != (Eigen::Index{1} << p.L)) throw std::invalid_argument("target states have the wrong size");
  int evals = 0;
  const Objective f = [&](const Eigen::VectorXd& v) {
    ++evals;
    return 1.0 - target_weight(build_ansatz(p, apply_overlap_variables(base, v), cut), targets);
  };
  std::vector<Eigen::VectorXd> starts{overlap_variables(base, base)};
  if (opt.warm_start.size() == kNumBlocks) starts.push_back(opt.warm_start);
  PhaseResult best;
  best.loss = std::numeric_limits<double>::infinity();
  for (const auto& x0 : starts) {
    const auto res = minimize_bfgs(f, x0, opt.bfgs);
    if (res.value < best.loss) {
      best.loss = res.value;
      best.variables = res.x;
      best.trace = res.trace;
      best.converged = res.converged;
      best.message = res.message;
    }
  }
  best.schedule = apply_overlap_variables(base, best.variables);
  best.evaluations = evals;
  return best;
}

ParamSchedule ScheduleGenerator::at(int L) const {
  Eigen::VectorXd v(kNumBlocks);
  for (int j = 0; j < kNumBlocks; ++j) v(j) = fits[j](L);
  return apply_overlap_variables(base, v);
}

double ScheduleGenerator::max_rms() const {
  double m = 0;
  for (const auto& f : fits) m = std::max(m, f.rms);
  return m;
}

ScheduleGenerator extrapolate_schedule(Boundary boundary, const ParamSchedule& base, const std::vector<int>& sizes,
                                       const std::vector<Eigen::VectorXd>& variables) {
  if (sizes.size() < 4) throw std::invalid_argument("extrapolation needs at least four sizes");
  if (sizes.size() != variables.size()) throw std::invalid_argument("one variable vector per size expected");
  ScheduleGenerator g;
  g.boundary = boundary;
  g.base = base;
  g.sizes = sizes;
  std::vector<double> Ls(sizes.begin(), sizes.end());
  for (int j = 0; j < kNumBlocks; ++j) {
    std::vector<double> y;
    for (const auto& v : variables) y.push_back(v(j));
    const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
    if (*hi - *lo < 1e-12) {
      g.fits[j] = PowerLawFit{0.0, -1.0, *lo, 0.0, 0.0};
      continue;
    }
    g.fits[j] = fit_power_law(Ls, y);
  }
  return g;
}

namespace {

std::vector<double> level_weights(const Eigen::MatrixXd& states, const Eigen::VectorXd& psi) {
  const Eigen::VectorXd a = states.transpose() * psi;
  std::vector<double> w(a.size());
  for (Eigen::Index k = 0; k < a.size(); ++k) w[k] = a(k) * a(k);
  return w;
}

}  // namespace

PrepReport run_prep(Boundary boundary, const std::vector<int>& fit_sizes, const std::vector<int>& check_sizes,
                    const EnergyPhaseOptions& energy) {
  PrepReport rep;
  rep.boundary = boundary;
  ModelParams p;
  p.L = 8;
  p.boundary = boundary;
  rep.energy_phase = optimize_energy_phase(p, energy);
  const ParamSchedule& base = rep.energy_phase.schedule;

  std::vector<Eigen::VectorXd> vars;
  Eigen::VectorXd warm;
  for (int L : fit_sizes) {
    p.L = L;
    const auto t = exact_targets(p);
    OverlapPhaseOptions oo;
    oo.warm_start = warm;
    const auto r = optimize_overlap_phase(p, base, t.states, {}, oo);
    warm = r.variables;
    vars.push_back(r.variables);
    PrepPoint pt;
    pt.L = L;
    pt.schedule = r.schedule;
    pt.loss = r.loss;
    pt.trace = r.trace;
    const auto c = build_ansatz(p, r.schedule);
    const Eigen::VectorXd psi = real_amplitudes(simulate(c));
    pt.weight = (t.states.transpose() * psi).squaredNorm();
    pt.level_weights = level_weights(t.states, psi);
    const double e = PauliOperator(build_hamiltonian(p)).expectation(psi);
    pt.epsilon_energy = normalized_energy_distance(e, t.energies(0), t.e_max);
    rep.points.push_back(std::move(pt));
  }
  rep.generator = extrapolate_schedule(boundary, base, fit_sizes, vars);
  for (int L : check_sizes) {
    p.L = L;
    const auto t = exact_targets(p);
    PrepPoint pt;
    pt.L = L;
    pt.extrapolated = true;
    pt.schedule = rep.generator.at(L);
    const auto c = build_ansatz(p, pt.schedule);
    const Eigen::VectorXd psi = real_amplitudes(simulate(c));
    pt.weight = (t.states.transpose() * psi).squaredNorm();
    pt.level_weights = level_weights(t.states, psi);
    pt.loss = 1.0 - std::sqrt(pt.weight);
    pt.epsilon_energy =
        normalized_energy_distance(PauliOperator(build_hamiltonian(p)).expectation(psi), t.energies(0), t.e_max);
    rep.points.push_back(std::move(pt));
  }
  return rep;
}

}  // namespace gspt
