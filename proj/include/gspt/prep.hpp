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
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "gspt/circuit.hpp"
#include "gspt/model.hpp"
#include "gspt/optimize.hpp"

namespace gspt {

/// (E - E0) / (Emax - E0).
double normalized_energy_distance(double energy, double e_ground, double e_max);

/// Exact low-lying data of a chain Hamiltonian used as optimization target.
struct TargetStates {
  /// Orthonormal columns spanning the target space: the ground multiplet
  /// for open chains and cut chains, the two lowest levels for rings.
  Eigen::MatrixXd states;
  Eigen::VectorXd energies;
  double e_max = 0.0;
};

/// Dense or Krylov diagonalization; needs L <= 24.
TargetStates exact_targets(const ModelParams& p, const CutConfig& cut = {});

/// |projection of the ansatz state onto span(states)|.
/// Overlap ||P psi|| of the circuit state with the span of `states`; the
/// overlap-phase loss is one minus this.
double target_weight(const Circuit& c, const Eigen::MatrixXd& states);

struct PhaseResult {
  ParamSchedule schedule;
  /// Free variables of the phase at the optimum.
  Eigen::VectorXd variables;
  double loss = 0.0;
  std::vector<double> trace;
  bool converged = false;
  int evaluations = 0;
  std::string message;
};

struct EnergyPhaseOptions {
  int restarts = 3;
  std::uint64_t seed = 20240611;
  BfgsOptions bfgs{};
};

/// Minimizes <H> over the schedule. Periodic chains vary the five uniform
/// angles, open chains vary (a, b, c) of every block with b = -exp(u) kept
/// negative. Starts: angles uniform in [-pi/4, pi/4], b in [-2, -0.5].
PhaseResult optimize_energy_phase(const ModelParams& p, const EnergyPhaseOptions& opt = {});

struct OverlapPhaseOptions {
  BfgsOptions bfgs{};
  /// Extra start for the free variables (e.g. the optimum at a smaller L).
  Eigen::VectorXd warm_start;
};

/// Variables of the overlap phase: eps_j for power-law schedules
/// (a_j + eps_j, c_j - eps_j), c_j for uniform ones.
ParamSchedule apply_overlap_variables(const ParamSchedule& base, const Eigen::VectorXd& v);
Eigen::VectorXd overlap_variables(const ParamSchedule& base, const ParamSchedule& s);

/// Minimizes 1 - |P_target psi| over the overlap-phase variables.
PhaseResult optimize_overlap_phase(const ModelParams& p, const ParamSchedule& base, const Eigen::MatrixXd& targets,
                                   const CutConfig& cut = {}, const OverlapPhaseOptions& opt = {});

/// Per-variable fits f(L) = a (L + d)^b + c of the overlap-phase variables.
struct ScheduleGenerator {
  Boundary boundary = Boundary::Open;
  ParamSchedule base;
  std::array<PowerLawFit, kNumBlocks> fits{};
  std::vector<int> sizes;

  ParamSchedule at(int L) const;
  double max_rms() const;
};

/// Needs at least four sizes. Variables that do not change with L are fitted
/// as constants.
ScheduleGenerator extrapolate_schedule(Boundary boundary, const ParamSchedule& base, const std::vector<int>& sizes,
                                       const std::vector<Eigen::VectorXd>& variables);

struct PrepPoint {
  int L = 0;
  ParamSchedule schedule;
  double loss = 0.0;
  /// Probability ||P psi||^2 on the target space.
  double weight = 0.0;
  /// |<target_k|psi>|^2 for each target column.
  std::vector<double> level_weights;
  double epsilon_energy = 0.0;
  std::vector<double> trace;
  bool extrapolated = false;
};

struct PrepReport {
  Boundary boundary = Boundary::Open;
  PhaseResult energy_phase;
  std::vector<PrepPoint> points;
  ScheduleGenerator generator;
};

/// Energy phase at L = 8, overlap phase on `fit_sizes` (warm-started in
/// order), extrapolation, and validation at `check_sizes` with the
/// extrapolated schedules.
PrepReport run_prep(Boundary boundary, const std::vector<int>& fit_sizes, const std::vector<int>& check_sizes,
                    const EnergyPhaseOptions& energy = {});

}  // namespace gspt
