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
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "gspt/circuit.hpp"
#include "gspt/pauli.hpp"
#include "gspt/rng.hpp"

namespace gspt {

inline constexpr int kDensePureLimit = 24;
inline constexpr int kDenseMixedLimit = 12;

/// Dense amplitude vector; bit i of the basis index is site i.
class StateVector {
 public:
  /// |0...0>.
  explicit StateVector(int num_sites);
  StateVector(int num_sites, std::vector<Complex> amplitudes);

  int num_sites() const { return num_sites_; }
  std::size_t dim() const { return amps_.size(); }
  const std::vector<Complex>& amplitudes() const { return amps_; }
  std::vector<Complex>& amplitudes() { return amps_; }
  Complex operator[](std::size_t i) const { return amps_[i]; }

  void apply_y(int site, double theta);
  void apply_cz(int a, int b);
  /// diag(1, 1, 1, e^{i phi}) on (a, b).
  void apply_cphase(int a, int b, double phi);
  void apply_pauli(int site, Pauli p);
  void apply_pauli(const PauliTerm& t);
  void apply_hadamard(int site);
  void apply_sdg(int site);
  void apply_layer(const Layer& layer);
  void apply(const Circuit& c);
  /// Rotates so that a Z-basis measurement measures `bases[i]` on site i.
  void rotate_to_basis(std::span<const Pauli> bases);

  double norm() const;
  void normalize();
  /// <this|other>.
  Complex inner(const StateVector& other) const;
  std::vector<double> probabilities() const;

 private:
  int num_sites_;
  std::vector<Complex> amps_;
};

/// op|psi>, accumulated into a fresh vector.
std::vector<Complex> apply_pauli_sum(const PauliSum& op, const std::vector<Complex>& psi);
/// <bra|op|ket>.
Complex matrix_element(const StateVector& bra, const PauliSum& op, const StateVector& ket);
/// <psi|op|psi>. For a Hermitian-flagged op, an imaginary residue above 1e-10
/// throws std::domain_error; below it is discarded.
double expectation(const StateVector& psi, const PauliSum& op);

/// Two-qubit depolarizing after each CZ gate, an optional coherent phase error
/// on each CZ, and a global depolarizing channel on the final state.
struct NoiseSpec {
  double cz_depolarizing = 0.0;
  double global_depolarizing = 0.0;
  /// Extra controlled phase applied after every CZ (coherent overrotation).
  double cz_phase_error = 0.0;

  bool any() const { return cz_depolarizing > 0 || global_depolarizing > 0 || cz_phase_error != 0; }
  bool stochastic() const { return cz_depolarizing > 0 || global_depolarizing > 0; }
  void validate() const;
};

/// Dense density operator rho, stored row-major as a 2L-qubit vector.
class DensityMatrix {
 public:
  explicit DensityMatrix(int num_sites);
  explicit DensityMatrix(const StateVector& pure);

  int num_sites() const { return num_sites_; }
  std::size_t dim() const { return std::size_t{1} << num_sites_; }
  Complex operator()(std::size_t row, std::size_t col) const { return data_[row * dim() + col]; }

  void apply_layer(const Layer& layer, const NoiseSpec& noise = {});
  void apply(const Circuit& c, const NoiseSpec& noise = {});
  /// Symmetric two-qubit depolarizing: each non-identity Pauli on the pair
  /// with probability p / 15.
  void depolarize_pair(int a, int b, double p);
  void depolarize_global(double p);
  void rotate_to_basis(std::span<const Pauli> bases);

  double trace() const;
  double purity() const;
  std::vector<double> diagonal() const;
  double expectation(const PauliSum& op) const;

 private:
  void apply_single(int site, const Complex g[2][2]);
  void apply_diag_pair(int a, int b, Complex phase11);

  int num_sites_;
  std::vector<Complex> data_;
};

/// Pure noiseless run of c from |0...0>.
StateVector simulate(const Circuit& c);
/// Density-operator run; throws std::invalid_argument above kDenseMixedLimit.
DensityMatrix simulate_mixed(const Circuit& c, const NoiseSpec& noise);
/// One stochastic trajectory: each CZ is followed, with probability p, by a
/// uniformly random non-identity two-qubit Pauli.
StateVector simulate_trajectory(const Circuit& c, const NoiseSpec& noise, Rng& rng);

/// Outcome probabilities of the computational basis (site 0 = bit 0) after
/// rotating into `bases`.
std::vector<double> basis_probabilities(const StateVector& psi, std::span<const Pauli> bases);
std::vector<double> basis_probabilities(const DensityMatrix& rho, std::span<const Pauli> bases);

/// Bitstring (as basis index) -> count.
using Histogram = std::map<std::uint64_t, long>;

/// Multinomial sample of `shots` outcomes from a probability vector.
Histogram sample_counts(std::span<const double> probs, long shots, Rng& rng);
Histogram sample(const StateVector& psi, std::span<const Pauli> bases, long shots, Rng& rng);

/// Estimate of <t> from counts taken in `bases`; each non-identity factor of t
/// must match the basis of its site.
double estimate_term(const PauliTerm& t, std::span<const Pauli> bases, const Histogram& counts);
bool term_measurable_in(const PauliTerm& t, std::span<const Pauli> bases);
/// Greedy grouping of the terms into qubit-wise compatible settings; unused
/// sites are measured in Z.
std::vector<std::vector<Pauli>> measurement_settings(const PauliSum& op);

/// Per-site bases as a string such as "XZY".
std::string basis_string(std::span<const Pauli> bases);
/// Bits of `index` with site 0 first.
std::string bitstring(std::uint64_t index, int num_sites);
std::uint64_t bitstring_index(const std::string& bits);

/// One row of the measurement-record CSV.
struct MeasurementRecord {
  int setting_id = 0;
  std::vector<Pauli> bases;
  Histogram counts;
};

void write_measurement_csv(std::ostream& os, std::span<const MeasurementRecord> records);
std::vector<MeasurementRecord> read_measurement_csv(std::istream& is);

/// How the O_X insertion of a projected overlap is realised.
enum class ProjectionRoute {
  /// An X layer between U_prep and U_ref^dagger.
  CircuitInsertion,
  /// A separate run against the spin-flipped reference circuit.
  FlippedReference,
};

struct OverlapOptions {
  bool project = false;
  ProjectionRoute route = ProjectionRoute::CircuitInsertion;
  /// Fuse the CZ - X - CZ sandwich before running.
  bool fuse = true;
  NoiseSpec noise;
  /// Trajectories used for noisy runs above kDenseMixedLimit.
  int trajectories = 200;
  /// 0 returns the exact probability; otherwise a binomial estimate.
  long shots = 0;
  std::uint64_t seed = 0;
};

/// Circuit U_ref^dagger (X) U_prep of the overlap protocol.
Circuit overlap_circuit(const Circuit& prep, const Circuit& ref, bool project);

/// Probability of 0...0 after the overlap circuit. Noiselessly this is
/// |<ref|prep>|^2, or |<ref|O_X|prep>|^2 when projecting.
double overlap_protocol(const Circuit& prep, const Circuit& ref, const OverlapOptions& opt = {});

}  // namespace gspt
