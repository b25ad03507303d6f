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

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace gspt {

using Complex = std::complex<double>;

/// Single-site Pauli operator. The numeric encoding is the (x, z) symplectic
/// pair packed as x | z << 1, so that I=0, X=1, Z=2, Y=3.
enum class Pauli : std::uint8_t { I = 0, X = 1, Z = 2, Y = 3 };

char to_char(Pauli p);
Pauli pauli_from_char(char c);

/// Tolerance below which merged coefficients are dropped.
inline constexpr double kMergeTolerance = 1e-12;

/// A weighted tensor product of single-site Pauli operators.
///
/// Factors are kept sorted by site and identity factors are never stored, so
/// two terms built in different orders compare equal.
class PauliTerm {
 public:
  using Factor = std::pair<int, Pauli>;

  PauliTerm() = default;
  PauliTerm(Complex coefficient, std::vector<Factor> factors);

  static PauliTerm identity(Complex coefficient = 1.0);
  static PauliTerm single(int site, Pauli p, Complex coefficient = 1.0);

  Complex coefficient() const { return coefficient_; }
  const std::vector<Factor>& factors() const { return factors_; }
  Pauli at(int site) const;
  bool is_identity() const { return factors_.empty(); }
  /// Largest site index acted on, or -1 for the identity.
  int max_site() const;
  int weight() const { return static_cast<int>(factors_.size()); }

  PauliTerm with_coefficient(Complex c) const;
  /// Same factors, coefficient 1.
  PauliTerm string() const { return with_coefficient(1.0); }

  /// Bit masks over sites (requires every site < 64).
  std::uint64_t x_mask() const;
  std::uint64_t z_mask() const;
  int y_count() const;

  bool same_string(const PauliTerm& other) const { return factors_ == other.factors_; }
  bool commutes_with(const PauliTerm& other) const;

  /// Human readable label such as "-1*Z0 X1 Z2".
  std::string label() const;

  friend bool operator==(const PauliTerm& a, const PauliTerm& b) {
    return a.coefficient_ == b.coefficient_ && a.factors_ == b.factors_;
  }

 private:
  Complex coefficient_ = 1.0;
  std::vector<Factor> factors_;
};

/// Product a*b with the exact phase from single-site Pauli multiplication.
PauliTerm multiply(const PauliTerm& a, const PauliTerm& b);
inline PauliTerm operator*(const PauliTerm& a, const PauliTerm& b) { return multiply(a, b); }

/// U_CZ * op * U_CZ for a layer of disjoint CZ gates. Throws
/// std::invalid_argument when two pairs share a site.
PauliTerm conjugate_by_cz_layer(const PauliTerm& op, std::span<const std::pair<int, int>> layer);

/// A sum of PauliTerms on a register of num_sites sites. Terms with equal
/// strings are always merged; merged coefficients below kMergeTolerance are
/// dropped.
class PauliSum {
 public:
  explicit PauliSum(int num_sites, bool hermitian = false);
  PauliSum(int num_sites, std::vector<PauliTerm> terms, bool hermitian = false);

  int num_sites() const { return num_sites_; }
  bool hermitian() const { return hermitian_; }
  const std::vector<PauliTerm>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  /// Coefficient of the given string (zero when absent).
  Complex coefficient_of(const PauliTerm& string) const;
  /// True if every coefficient is real to within tol.
  bool has_real_coefficients(double tol = kMergeTolerance) const;
  /// True if every term has real matrix elements in the computational basis
  /// (no imaginary phase from an odd number of Y factors).
  bool is_real_matrix(double tol = kMergeTolerance) const;

  PauliSum plus(const PauliSum& other) const;
  PauliSum times(const PauliSum& other) const;
  PauliSum scaled(Complex s) const;
  PauliSum plus_term(const PauliTerm& t) const;
  PauliSum with_hermitian(bool flag) const;
  PauliSum conjugated_by_cz_layer(std::span<const std::pair<int, int>> layer) const;
  /// Subset of terms for which pred(term) holds.
  template <class Pred>
  PauliSum filtered(Pred pred) const {
    std::vector<PauliTerm> kept;
    for (const auto& t : terms_)
      if (pred(t)) kept.push_back(t);
    return PauliSum(num_sites_, std::move(kept), hermitian_);
  }

  /// Throws std::domain_error when the Hermitian flag is set but a merged
  /// coefficient has an imaginary part above tol.
  void check_hermitian(double tol = 1e-10) const;

  /// One term per line: "<re>,<im> <site>:<P> <site>:<P> ...".
  std::string to_text() const;
  static PauliSum from_text(int num_sites, const std::string& text, bool hermitian = false);

  friend PauliSum operator+(const PauliSum& a, const PauliSum& b) { return a.plus(b); }
  friend PauliSum operator*(const PauliSum& a, const PauliSum& b) { return a.times(b); }
  friend PauliSum operator*(Complex s, const PauliSum& a) { return a.scaled(s); }
  friend bool operator==(const PauliSum& a, const PauliSum& b);

 private:
  void add(const PauliTerm& t);

  int num_sites_;
  bool hermitian_;
  std::vector<PauliTerm> terms_;  // sorted by factor list
};

/// a*b - b*a.
PauliSum commutator(const PauliSum& a, const PauliSum& b);

std::ostream& operator<<(std::ostream& os, const PauliTerm& t);

}  // namespace gspt
