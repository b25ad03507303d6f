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

#include "gspt/pauli.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace gspt {

namespace {

constexpr Complex kI{0.0, 1.0};

// Phase of the single-site product a*b; the resulting Pauli is a XOR b.
Complex product_phase(Pauli a, Pauli b) {
  if (a == Pauli::I || b == Pauli::I || a == b) return 1.0;
  // Cyclic order X -> Y -> Z gives +i.
  auto cyc = [](Pauli p) {
    switch (p) {
      case Pauli::X: return 0;
      case Pauli::Y: return 1;
      case Pauli::Z: return 2;
      default: return -1;
    }
  };
  return ((cyc(b) - cyc(a) + 3) % 3 == 1) ? kI : -kI;
}

Pauli xor_pauli(Pauli a, Pauli b) {
  return static_cast<Pauli>(static_cast<std::uint8_t>(a) ^ static_cast<std::uint8_t>(b));
}

void require_mask_range(const PauliTerm& t) {
  if (t.max_site() >= 64) throw std::out_of_range("Pauli bit masks support sites < 64");
}

}  // namespace

char to_char(Pauli p) {
  switch (p) {
    case Pauli::I: return 'I';
    case Pauli::X: return 'X';
    case Pauli::Y: return 'Y';
    case Pauli::Z: return 'Z';
  }
  return '?';
}

Pauli pauli_from_char(char c) {
  switch (c) {
    case 'I': case 'i': return Pauli::I;
    case 'X': case 'x': return Pauli::X;
    case 'Y': case 'y': return Pauli::Y;
    case 'Z': case 'z': return Pauli::Z;
  }
  throw std::invalid_argument(std::string("not a Pauli label: '") + c + "'");
}

PauliTerm::PauliTerm(Complex coefficient, std::vector<Factor> factors) : coefficient_(coefficient) {
  std::sort(factors.begin(), factors.end(), [](const Factor& a, const Factor& b) { return a.first < b.first; });
  for (const auto& [site, p] : factors) {
    if (site < 0) throw std::invalid_argument("negative site index in PauliTerm");
    if (!factors_.empty() && factors_.back().first == site)
      throw std::invalid_argument("duplicate site " + std::to_string(site) + " in PauliTerm");
    if (p != Pauli::I) factors_.emplace_back(site, p);
  }
}

PauliTerm PauliTerm::identity(Complex coefficient) { return PauliTerm(coefficient, {}); }

PauliTerm PauliTerm::single(int site, Pauli p, Complex coefficient) { return PauliTerm(coefficient, {{site, p}}); }

Pauli PauliTerm::at(int site) const {
  auto it = std::lower_bound(factors_.begin(), factors_.end(), site,
                             [](const Factor& f, int s) { return f.first < s; });
  return (it != factors_.end() && it->first == site) ? it->second : Pauli::I;
}

int PauliTerm::max_site() const { return factors_.empty() ? -1 : factors_.back().first; }

PauliTerm PauliTerm::with_coefficient(Complex c) const {
  PauliTerm t = *this;
  t.coefficient_ = c;
  return t;
}

std::uint64_t PauliTerm::x_mask() const {
  require_mask_range(*this);
  std::uint64_t m = 0;
  for (const auto& [site, p] : factors_)
    if (p == Pauli::X || p == Pauli::Y) m |= std::uint64_t{1} << site;
  return m;
}

std::uint64_t PauliTerm::z_mask() const {
  require_mask_range(*this);
  std::uint64_t m = 0;
  for (const auto& [site, p] : factors_)
    if (p == Pauli::Z || p == Pauli::Y) m |= std::uint64_t{1} << site;
  return m;
}

int PauliTerm::y_count() const {
  return static_cast<int>(std::count_if(factors_.begin(), factors_.end(),
                                        [](const Factor& f) { return f.second == Pauli::Y; }));
}

bool PauliTerm::commutes_with(const PauliTerm& other) const {
  int anti = 0;
  auto a = factors_.begin();
  auto b = other.factors_.begin();
  while (a != factors_.end() && b != other.factors_.end()) {
    if (a->first < b->first) {
      ++a;
    } else if (b->first < a->first) {
      ++b;
    } else {
      if (a->second != b->second) ++anti;
      ++a;
      ++b;
    }
  }
  return anti % 2 == 0;
}

std::string PauliTerm::label() const {
  std::ostringstream os;
  os << *this;
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const PauliTerm& t) {
  const Complex c = t.coefficient();
  if (c.imag() == 0.0)
    os << c.real();
  else
    os << '(' << c.real() << (c.imag() < 0 ? "" : "+") << c.imag() << "i)";
  if (t.is_identity()) return os << "*I";
  os << '*';
  bool first = true;
  for (const auto& [site, p] : t.factors()) {
    if (!first) os << ' ';
    os << to_char(p) << site;
    first = false;
  }
  return os;
}

PauliTerm multiply(const PauliTerm& a, const PauliTerm& b) {
  Complex phase = a.coefficient() * b.coefficient();
  std::vector<PauliTerm::Factor> out;
  auto ia = a.factors().begin();
  auto ib = b.factors().begin();
  while (ia != a.factors().end() || ib != b.factors().end()) {
    if (ib == b.factors().end() || (ia != a.factors().end() && ia->first < ib->first)) {
      out.push_back(*ia++);
    } else if (ia == a.factors().end() || ib->first < ia->first) {
      out.push_back(*ib++);
    } else {
      phase *= product_phase(ia->second, ib->second);
      out.emplace_back(ia->first, xor_pauli(ia->second, ib->second));
      ++ia;
      ++ib;
    }
  }
  return PauliTerm(phase, std::move(out));
}

PauliTerm conjugate_by_cz_layer(const PauliTerm& op, std::span<const std::pair<int, int>> layer) {
  std::map<int, int> partner;
  for (const auto& [a, b] : layer) {
    if (a == b) throw std::invalid_argument("CZ pair acts twice on site " + std::to_string(a));
    for (int s : {a, b}) {
      if (partner.count(s)) throw std::invalid_argument("CZ layer pairs overlap on site " + std::to_string(s));
    }
    partner[a] = b;
    partner[b] = a;
  }
  // CZ X_a CZ = X_a Z_b, CZ Y_a CZ = Y_a Z_b, Z commutes. The images of
  // distinct-site factors commute with each other, so the product order is
  // irrelevant.
  PauliTerm result = PauliTerm::identity(op.coefficient());
  for (const auto& [site, p] : op.factors()) {
    PauliTerm image = PauliTerm::single(site, p);
    auto it = partner.find(site);
    if (it != partner.end() && (p == Pauli::X || p == Pauli::Y))
      image = multiply(image, PauliTerm::single(it->second, Pauli::Z));
    result = multiply(result, image);
  }
  return result;
}

// ---------------------------------------------------------------------------

namespace {

bool factor_less(const PauliTerm& a, const PauliTerm& b) {
  return std::lexicographical_compare(
      a.factors().begin(), a.factors().end(), b.factors().begin(), b.factors().end(),
      [](const auto& x, const auto& y) {
        return x.first != y.first ? x.first < y.first
                                  : static_cast<int>(x.second) < static_cast<int>(y.second);
      });
}

}  // namespace

PauliSum::PauliSum(int num_sites, bool hermitian) : num_sites_(num_sites), hermitian_(hermitian) {
  if (num_sites < 1) throw std::invalid_argument("PauliSum needs at least one site");
}

PauliSum::PauliSum(int num_sites, std::vector<PauliTerm> terms, bool hermitian) : PauliSum(num_sites, hermitian) {
  for (const auto& t : terms) add(t);
}

void PauliSum::add(const PauliTerm& t) {
  if (t.max_site() >= num_sites_)
    throw std::out_of_range("term " + t.label() + " exceeds register of " + std::to_string(num_sites_) + " sites");
  auto it = std::lower_bound(terms_.begin(), terms_.end(), t, factor_less);
  if (it != terms_.end() && it->same_string(t)) {
    const Complex c = it->coefficient() + t.coefficient();
    if (std::abs(c) < kMergeTolerance)
      terms_.erase(it);
    else
      *it = it->with_coefficient(c);
  } else if (std::abs(t.coefficient()) >= kMergeTolerance) {
    terms_.insert(it, t);
  }
}

Complex PauliSum::coefficient_of(const PauliTerm& string) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), string, factor_less);
  return (it != terms_.end() && it->same_string(string)) ? it->coefficient() : Complex{0.0};
}

bool PauliSum::has_real_coefficients(double tol) const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [tol](const PauliTerm& t) { return std::abs(t.coefficient().imag()) <= tol; });
}

bool PauliSum::is_real_matrix(double tol) const {
  // Y = i X Z, so a term's matrix is real iff coefficient * i^{#Y} is real.
  return std::all_of(terms_.begin(), terms_.end(), [tol](const PauliTerm& t) {
    Complex c = t.coefficient();
    for (int k = 0; k < t.y_count() % 4; ++k) c *= kI;
    return std::abs(c.imag()) <= tol;
  });
}

PauliSum PauliSum::plus(const PauliSum& other) const {
  if (other.num_sites_ != num_sites_) throw std::invalid_argument("PauliSum register size mismatch");
  PauliSum r = *this;
  for (const auto& t : other.terms_) r.add(t);
  r.hermitian_ = hermitian_ && other.hermitian_;
  return r;
}

PauliSum PauliSum::times(const PauliSum& other) const {
  if (other.num_sites_ != num_sites_) throw std::invalid_argument("PauliSum register size mismatch");
  PauliSum r(num_sites_, false);
  for (const auto& a : terms_)
    for (const auto& b : other.terms_) r.add(multiply(a, b));
  return r;
}

PauliSum PauliSum::scaled(Complex s) const {
  PauliSum r(num_sites_, hermitian_ && s.imag() == 0.0);
  for (const auto& t : terms_) r.add(t.with_coefficient(t.coefficient() * s));
  return r;
}

PauliSum PauliSum::plus_term(const PauliTerm& t) const {
  PauliSum r = *this;
  r.add(t);
  return r;
}

PauliSum PauliSum::with_hermitian(bool flag) const {
  PauliSum r = *this;
  r.hermitian_ = flag;
  return r;
}

PauliSum PauliSum::conjugated_by_cz_layer(std::span<const std::pair<int, int>> layer) const {
  PauliSum r(num_sites_, hermitian_);
  for (const auto& t : terms_) r.add(conjugate_by_cz_layer(t, layer));
  return r;
}

void PauliSum::check_hermitian(double tol) const {
  if (!hermitian_) return;
  for (const auto& t : terms_)
    if (std::abs(t.coefficient().imag()) > tol)
      throw std::domain_error("Hermitian PauliSum has complex coefficient on " + t.label());
}

std::string PauliSum::to_text() const {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& t : terms_) {
    os << t.coefficient().real() << ',' << t.coefficient().imag();
    for (const auto& [site, p] : t.factors()) os << ' ' << site << ':' << to_char(p);
    os << '\n';
  }
  return os.str();
}

PauliSum PauliSum::from_text(int num_sites, const std::string& text, bool hermitian) {
  PauliSum r(num_sites, hermitian);
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string coeff_tok;
    ls >> coeff_tok;
    const auto comma = coeff_tok.find(',');
    if (comma == std::string::npos)
      throw std::invalid_argument("line " + std::to_string(line_no) + ": expected '<re>,<im>'");
    Complex c;
    try {
      c = {std::stod(coeff_tok.substr(0, comma)), std::stod(coeff_tok.substr(comma + 1))};
    } catch (const std::exception&) {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": bad coefficient '" + coeff_tok + "'");
    }
    std::vector<PauliTerm::Factor> factors;
    std::string tok;
    while (ls >> tok) {
      const auto colon = tok.find(':');
      if (colon == std::string::npos || colon + 2 != tok.size())
        throw std::invalid_argument("line " + std::to_string(line_no) + ": bad factor '" + tok + "'");
      try {
        factors.emplace_back(std::stoi(tok.substr(0, colon)), pauli_from_char(tok[colon + 1]));
      } catch (const std::invalid_argument& e) {
        throw std::invalid_argument("line " + std::to_string(line_no) + ": " + e.what());
      }
    }
    try {
      r.add(PauliTerm(c, std::move(factors)));
    } catch (const std::logic_error& e) {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return r;
}

bool operator==(const PauliSum& a, const PauliSum& b) {
  return a.num_sites_ == b.num_sites_ && a.terms_ == b.terms_;
}

PauliSum commutator(const PauliSum& a, const PauliSum& b) { return (a * b) + (b * a).scaled(-1.0); }

}  // namespace gspt
