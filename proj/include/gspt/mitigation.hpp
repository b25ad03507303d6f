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
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gspt/circuit.hpp"
#include "gspt/rng.hpp"
#include "gspt/sim.hpp"

namespace gspt {

enum class ZneModel { Linear, Exponential };

std::string to_string(ZneModel m);
ZneModel zne_model_from_string(const std::string& s);

struct ZneConfig {
  std::vector<double> factors{1.0, 1.5, 2.0, 2.5, 3.0};
  int twirls = 25;
  ZneModel model = ZneModel::Linear;
  /// Shots per measurement setting and circuit; 0 uses exact expectations.
  long shots = 0;
  int bootstrap = 100;
  std::uint64_t seed = 0x2e3ULL;

  void validate() const;
};

struct FoldResult {
  Circuit circuit;
  double factor = 1.0;  // achieved CZ-layer ratio
  std::vector<int> folds;  // per CZ layer, in circuit order
};

/// Unitary folding at CZ-layer granularity. A CZ layer together with a single
/// site layer right before it forms a unit U that is replaced by
/// U (U^dagger U)^m. The folded layers are drawn at random; the achieved factor
/// is the nearest one reachable.
FoldResult fold_circuit(const Circuit& c, double factor, std::uint64_t seed);

/// Surrounds every CZ layer with a random Pauli layer P before and CZ P CZ
/// after, so the noiseless unitary is unchanged up to a global phase.
Circuit pauli_twirl(const Circuit& c, std::uint64_t seed);
/// Same with the Pauli layer before each CZ layer given explicitly; identity
/// layers insert nothing.
Circuit pauli_twirl(const Circuit& c, std::span<const PauliLayer> before);

/// CZ P CZ restricted to the sites touched by `pairs`, as a Pauli layer.
PauliLayer conjugate_through_cz(const PauliLayer& p, const std::vector<std::pair<int, int>>& pairs);

struct ZnePoint {
  double factor = 1.0;
  double value = 0.0;
  double sigma = 0.0;
};

struct ZneFit {
  double value = 0.0;  // extrapolated to zero noise
  double sigma = 0.0;
  Eigen::VectorXd coeffs;
  ZneModel model = ZneModel::Linear;
  /// Set for the exponential model, whose fit is less stable.
  std::string warning;
};

/// Weighted least squares in F. Linear: v = c0 + c1 F. Exponential:
/// log|v| = c0 + c1 F. All-zero sigmas mean unit weights with the residual
/// variance as error scale. Throws for fewer than two distinct factors.
ZneFit extrapolate_zne(std::span<const ZnePoint> points, ZneModel model);

/// Shot-based estimator of a Pauli sum over qubit-wise compatible settings.
class ShotEstimator {
 public:
  explicit ShotEstimator(const PauliSum& op);
  const std::vector<std::vector<Pauli>>& settings() const { return settings_; }
  double constant() const { return constant_; }
  struct Estimate {
    double value = 0.0;
    double sigma = 0.0;
  };
  /// One histogram per setting.
  Estimate estimate(const std::vector<Histogram>& counts) const;

 private:
  int num_sites_;
  double constant_ = 0.0;
  std::vector<std::vector<Pauli>> settings_;
  /// Terms read from each setting as (x|z support mask, coefficient).
  std::vector<std::vector<std::pair<std::uint64_t, double>>> readout_;
};

/// Multinomial resample of a histogram with the same total.
Histogram resample(const Histogram& h, Rng& rng);

struct ZneSample {
  double factor = 1.0;
  int twirl = 0;
  double exact = 0.0;
  double value = 0.0;  // shot estimate, or exact when shots = 0
};

struct ZneRun {
  std::vector<ZnePoint> points;
  std::vector<ZneSample> samples;
  ZneFit fit;
  double noiseless = 0.0;
  double raw = 0.0;  // value at F = 1
  double bootstrap_sigma = 0.0;
  std::vector<double> bootstrap_values;
};

/// Folds and twirls `prep`, simulates every variant under `noise` and
/// extrapolates <obs>. Shots are pooled across twirls per factor; the
/// bootstrap resamples those pooled shots.
ZneRun run_zne(const Circuit& prep, const PauliSum& obs, const NoiseSpec& noise, const ZneConfig& cfg);

}  // namespace gspt
