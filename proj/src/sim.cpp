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

#include "gspt/sim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace gspt {

namespace {

constexpr Complex kI{0.0, 1.0};

Complex i_power(int n) {
  switch (n & 3) {
    case 0: return 1.0;
    case 1: return kI;
    case 2: return -1.0;
    default: return -kI;
  }
}

inline double parity_sign(std::uint64_t x) { return (std::popcount(x) & 1) ? -1.0 : 1.0; }

void check_site(int site, int L) {
  if (site < 0 || site >= L) throw std::out_of_range("site " + std::to_string(site) + " outside register");
}

// Applies a 2x2 gate on bit `bit` of a vector of length n.
void apply_2x2(std::vector<Complex>& v, int bit, const Complex g[2][2]) {
  const std::size_t m = std::size_t{1} << bit;
  const std::size_t n = v.size();
  for (std::size_t block = 0; block < n; block += 2 * m)
    for (std::size_t i = block; i < block + m; ++i) {
      const Complex a0 = v[i], a1 = v[i | m];
      v[i] = g[0][0] * a0 + g[0][1] * a1;
      v[i | m] = g[1][0] * a0 + g[1][1] * a1;
    }
}

struct Gate2 {
  Complex g[2][2];
};

Gate2 y_gate(double theta) {
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  return {{{c, -s}, {s, c}}};
}

Gate2 pauli_gate(Pauli p) {
  switch (p) {
    case Pauli::I: return {{{1.0, 0.0}, {0.0, 1.0}}};
    case Pauli::X: return {{{0.0, 1.0}, {1.0, 0.0}}};
    case Pauli::Y: return {{{0.0, -kI}, {kI, 0.0}}};
    case Pauli::Z: return {{{1.0, 0.0}, {0.0, -1.0}}};
  }
  return {};
}

const Gate2 kHadamard{{{std::numbers::sqrt2 / 2, std::numbers::sqrt2 / 2},
                       {std::numbers::sqrt2 / 2, -std::numbers::sqrt2 / 2}}};
const Gate2 kSdg{{{1.0, 0.0}, {0.0, -kI}}};

Gate2 conj(const Gate2& g) {
  Gate2 c;
  for (int r = 0; r < 2; ++r)
    for (int k = 0; k < 2; ++k) c.g[r][k] = std::conj(g.g[r][k]);
  return c;
}

struct TermAction {
  std::uint64_t x, z;
  Complex phase;
};

TermAction action_of(const PauliTerm& t) { return {t.x_mask(), t.z_mask(), t.coefficient() * i_power(t.y_count())}; }

}  // namespace

// ---------------------------------------------------------------------------

StateVector::StateVector(int num_sites) : num_sites_(num_sites) {
  if (num_sites < 1 || num_sites > kDensePureLimit)
    throw std::invalid_argument("dense state supports 1.." + std::to_string(kDensePureLimit) + " sites, got " +
                                std::to_string(num_sites));
  amps_.assign(std::size_t{1} << num_sites, 0.0);
  amps_[0] = 1.0;
}

StateVector::StateVector(int num_sites, std::vector<Complex> amplitudes)
    : num_sites_(num_sites), amps_(std::move(amplitudes)) {
  if (num_sites < 1 || num_sites > kDensePureLimit || amps_.size() != (std::size_t{1} << num_sites))
    throw std::invalid_argument("amplitude vector does not match the register size");
}

void StateVector::apply_y(int site, double theta) {
  check_site(site, num_sites_);
  if (theta == 0.0) return;
  apply_2x2(amps_, site, y_gate(theta).g);
}

void StateVector::apply_cz(int a, int b) { apply_cphase(a, b, std::numbers::pi); }

void StateVector::apply_cphase(int a, int b, double phi) {
  check_site(a, num_sites_);
  check_site(b, num_sites_);
  const std::uint64_t mask = (std::uint64_t{1} << a) | (std::uint64_t{1} << b);
  const Complex ph = phi == std::numbers::pi ? Complex(-1.0) : std::polar(1.0, phi);
  for (std::size_t i = 0; i < amps_.size(); ++i)
    if ((i & mask) == mask) amps_[i] *= ph;
}

void StateVector::apply_pauli(int site, Pauli p) {
  check_site(site, num_sites_);
  if (p != Pauli::I) apply_2x2(amps_, site, pauli_gate(p).g);
}

void StateVector::apply_pauli(const PauliTerm& t) {
  for (const auto& [site, p] : t.factors()) apply_pauli(site, p);
  if (t.coefficient() != Complex(1.0))
    for (auto& a : amps_) a *= t.coefficient();
}

void StateVector::apply_hadamard(int site) {
  check_site(site, num_sites_);
  apply_2x2(amps_, site, kHadamard.g);
}

void StateVector::apply_sdg(int site) {
  check_site(site, num_sites_);
  apply_2x2(amps_, site, kSdg.g);
}

void StateVector::apply_layer(const Layer& layer) {
  if (const auto* y = std::get_if<YLayer>(&layer)) {
    for (int i = 0; i < num_sites_; ++i) apply_y(i, y->angles[i]);
  } else if (const auto* cz = std::get_if<CZLayer>(&layer)) {
    for (const auto& [a, b] : cz->pairs) apply_cz(a, b);
  } else {
    const auto& p = std::get<PauliLayer>(layer);
    for (int i = 0; i < num_sites_; ++i) apply_pauli(i, p.ops[i]);
  }
}

void StateVector::apply(const Circuit& c) {
  if (c.num_sites() != num_sites_) throw std::invalid_argument("circuit width differs from state");
  for (const auto& l : c.layers()) apply_layer(l);
}

void StateVector::rotate_to_basis(std::span<const Pauli> bases) {
  if (static_cast<int>(bases.size()) != num_sites_) throw std::invalid_argument("one basis per site expected");
  for (int i = 0; i < num_sites_; ++i) {
    if (bases[i] == Pauli::Y) apply_sdg(i);
    if (bases[i] == Pauli::X || bases[i] == Pauli::Y) apply_hadamard(i);
  }
}

double StateVector::norm() const {
  double s = 0;
  for (const auto& a : amps_) s += std::norm(a);
  return std::sqrt(s);
}

void StateVector::normalize() {
  const double n = norm();
  if (n == 0) throw std::domain_error("cannot normalize the zero vector");
  for (auto& a : amps_) a /= n;
}

Complex StateVector::inner(const StateVector& other) const {
  if (other.num_sites_ != num_sites_) throw std::invalid_argument("inner product of different registers");
  Complex s = 0;
  for (std::size_t i = 0; i < amps_.size(); ++i) s += std::conj(amps_[i]) * other.amps_[i];
  return s;
}

std::vector<double> StateVector::probabilities() const {
  std::vector<double> p(amps_.size());
  for (std::size_t i = 0; i < amps_.size(); ++i) p[i] = std::norm(amps_[i]);
  return p;
}

std::vector<Complex> apply_pauli_sum(const PauliSum& op, const std::vector<Complex>& psi) {
  if (psi.size() != (std::size_t{1} << op.num_sites())) throw std::invalid_argument("vector size mismatch");
  std::vector<Complex> out(psi.size(), 0.0);
  for (const auto& t : op.terms()) {
    const auto a = action_of(t);
    for (std::size_t i = 0; i < psi.size(); ++i) out[i ^ a.x] += a.phase * parity_sign(i & a.z) * psi[i];
  }
  return out;
}

Complex matrix_element(const StateVector& bra, const PauliSum& op, const StateVector& ket) {
  if (bra.num_sites() != op.num_sites() || ket.num_sites() != op.num_sites())
    throw std::invalid_argument("operator and states act on different registers");
  const auto& b = bra.amplitudes();
  const auto& k = ket.amplitudes();
  Complex total = 0;
  for (const auto& t : op.terms()) {
    const auto a = action_of(t);
    Complex s = 0;
    for (std::size_t i = 0; i < k.size(); ++i) s += std::conj(b[i ^ a.x]) * parity_sign(i & a.z) * k[i];
    total += a.phase * s;
  }
  return total;
}

double expectation(const StateVector& psi, const PauliSum& op) {
  if (op.hermitian()) op.check_hermitian();
  const Complex v = matrix_element(psi, op, psi);
  if (op.hermitian() && std::abs(v.imag()) > 1e-10)
    throw std::domain_error("Hermitian expectation has imaginary part " + std::to_string(v.imag()));
  return v.real();
}

// ---------------------------------------------------------------------------

void NoiseSpec::validate() const {
  auto in01 = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!in01(cz_depolarizing) || !in01(global_depolarizing))
    throw std::invalid_argument("noise probabilities must lie in [0, 1]");
}

DensityMatrix::DensityMatrix(int num_sites) : num_sites_(num_sites) {
  if (num_sites < 1 || num_sites > kDenseMixedLimit)
    throw std::invalid_argument("density operator supports 1.." + std::to_string(kDenseMixedLimit) + " sites");
  data_.assign(dim() * dim(), 0.0);
  data_[0] = 1.0;
}

DensityMatrix::DensityMatrix(const StateVector& pure) : DensityMatrix(pure.num_sites()) {
  const auto& a = pure.amplitudes();
  const std::size_t d = dim();
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) data_[r * d + c] = a[r] * std::conj(a[c]);
}

void DensityMatrix::apply_single(int site, const Complex g[2][2]) {
  check_site(site, num_sites_);
  Gate2 gate;
  for (int r = 0; r < 2; ++r)
    for (int k = 0; k < 2; ++k) gate.g[r][k] = g[r][k];
  apply_2x2(data_, site + num_sites_, gate.g);
  apply_2x2(data_, site, conj(gate).g);
}

void DensityMatrix::apply_diag_pair(int a, int b, Complex phase11) {
  check_site(a, num_sites_);
  check_site(b, num_sites_);
  const std::uint64_t mask = (std::uint64_t{1} << a) | (std::uint64_t{1} << b);
  const std::size_t d = dim();
  for (std::size_t r = 0; r < d; ++r) {
    const Complex pr = (r & mask) == mask ? phase11 : Complex(1.0);
    for (std::size_t c = 0; c < d; ++c) {
      const Complex pc = (c & mask) == mask ? std::conj(phase11) : Complex(1.0);
      data_[r * d + c] *= pr * pc;
    }
  }
}

void DensityMatrix::depolarize_pair(int a, int b, double p) {
  if (p == 0.0) return;
  check_site(a, num_sites_);
  check_site(b, num_sites_);
  const double q = 16.0 * p / 15.0;
  const std::size_t d = dim();
  const std::size_t ma = std::size_t{1} << a, mb = std::size_t{1} << b, mask = ma | mb;
  const std::size_t off[4] = {0, ma, mb, ma | mb};
  for (std::size_t r = 0; r < d; ++r) {
    if (r & mask) continue;
    for (std::size_t c = 0; c < d; ++c) {
      if (c & mask) continue;
      Complex t = 0;
      for (int x = 0; x < 4; ++x) t += data_[(r | off[x]) * d + (c | off[x])];
      for (int x = 0; x < 4; ++x)
        for (int y = 0; y < 4; ++y) {
          Complex& e = data_[(r | off[x]) * d + (c | off[y])];
          e = (1.0 - q) * e + (x == y ? q * t / 4.0 : Complex(0.0));
        }
    }
  }
}

void DensityMatrix::depolarize_global(double p) {
  if (p == 0.0) return;
  const std::size_t d = dim();
  for (auto& e : data_) e *= 1.0 - p;
  for (std::size_t r = 0; r < d; ++r) data_[r * d + r] += p / static_cast<double>(d);
}

void DensityMatrix::apply_layer(const Layer& layer, const NoiseSpec& noise) {
  if (const auto* y = std::get_if<YLayer>(&layer)) {
    for (int i = 0; i < num_sites_; ++i)
      if (y->angles[i] != 0.0) apply_single(i, y_gate(y->angles[i]).g);
  } else if (const auto* cz = std::get_if<CZLayer>(&layer)) {
    for (const auto& [a, b] : cz->pairs) {
      apply_diag_pair(a, b, std::polar(1.0, std::numbers::pi + noise.cz_phase_error));
      depolarize_pair(a, b, noise.cz_depolarizing);
    }
  } else {
    const auto& p = std::get<PauliLayer>(layer);
    for (int i = 0; i < num_sites_; ++i)
      if (p.ops[i] != Pauli::I) apply_single(i, pauli_gate(p.ops[i]).g);
  }
}

void DensityMatrix::apply(const Circuit& c, const NoiseSpec& noise) {
  if (c.num_sites() != num_sites_) throw std::invalid_argument("circuit width differs from state");
  for (const auto& l : c.layers()) apply_layer(l, noise);
  depolarize_global(noise.global_depolarizing);
}

void DensityMatrix::rotate_to_basis(std::span<const Pauli> bases) {
  if (static_cast<int>(bases.size()) != num_sites_) throw std::invalid_argument("one basis per site expected");
  for (int i = 0; i < num_sites_; ++i) {
    if (bases[i] == Pauli::Y) apply_single(i, kSdg.g);
    if (bases[i] == Pauli::X || bases[i] == Pauli::Y) apply_single(i, kHadamard.g);
  }
}

double DensityMatrix::trace() const {
  double t = 0;
  for (std::size_t r = 0; r < dim(); ++r) t += data_[r * dim() + r].real();
  return t;
}

double DensityMatrix::purity() const {
  double s = 0;
  for (const auto& e : data_) s += std::norm(e);
  return s;
}

std::vector<double> DensityMatrix::diagonal() const {
  std::vector<double> p(dim());
  for (std::size_t r = 0; r < dim(); ++r) p[r] = data_[r * dim() + r].real();
  return p;
}

double DensityMatrix::expectation(const PauliSum& op) const {
  if (op.num_sites() != num_sites_) throw std::invalid_argument("operator acts on a different register");
  const std::size_t d = dim();
  Complex total = 0;
  for (const auto& t : op.terms()) {
    const auto a = action_of(t);
    Complex s = 0;
    for (std::size_t c = 0; c < d; ++c) s += data_[c * d + (c ^ a.x)] * parity_sign(c & a.z);
    total += a.phase * s;
  }
  if (op.hermitian() && std::abs(total.imag()) > 1e-10)
    throw std::domain_error("Hermitian expectation has imaginary part " + std::to_string(total.imag()));
  return total.real();
}

// ---------------------------------------------------------------------------

StateVector simulate(const Circuit& c) {
  StateVector psi(c.num_sites());
  psi.apply(c);
  return psi;
}

DensityMatrix simulate_mixed(const Circuit& c, const NoiseSpec& noise) {
  noise.validate();
  if (c.num_sites() > kDenseMixedLimit)
    throw std::invalid_argument("density-operator simulation is limited to " + std::to_string(kDenseMixedLimit) +
                                " sites; use trajectories");
  DensityMatrix rho(c.num_sites());
  rho.apply(c, noise);
  return rho;
}

StateVector simulate_trajectory(const Circuit& c, const NoiseSpec& noise, Rng& rng) {
  noise.validate();
  StateVector psi(c.num_sites());
  for (const auto& layer : c.layers()) {
    const auto* cz = std::get_if<CZLayer>(&layer);
    if (!cz) {
      psi.apply_layer(layer);
      continue;
    }
    for (const auto& [a, b] : cz->pairs) {
      psi.apply_cphase(a, b, std::numbers::pi + noise.cz_phase_error);
      if (noise.cz_depolarizing > 0 && uniform01(rng) < noise.cz_depolarizing) {
        const auto k = 1 + uniform_index(rng, 15);
        psi.apply_pauli(a, static_cast<Pauli>(k & 3));
        psi.apply_pauli(b, static_cast<Pauli>(k >> 2));
      }
    }
  }
  if (noise.global_depolarizing > 0 && uniform01(rng) < noise.global_depolarizing) {
    std::vector<Complex> amps(psi.dim(), 0.0);
    amps[uniform_index(rng, psi.dim())] = 1.0;
    psi = StateVector(c.num_sites(), std::move(amps));
  }
  return psi;
}

std::vector<double> basis_probabilities(const StateVector& psi, std::span<const Pauli> bases) {
  StateVector r = psi;
  r.rotate_to_basis(bases);
  return r.probabilities();
}

std::vector<double> basis_probabilities(const DensityMatrix& rho, std::span<const Pauli> bases) {
  DensityMatrix r = rho;
  r.rotate_to_basis(bases);
  return r.diagonal();
}

Histogram sample_counts(std::span<const double> probs, long shots, Rng& rng) {
  if (shots < 1) throw std::invalid_argument("shots must be positive");
  std::vector<double> cdf(probs.size());
  double acc = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) cdf[i] = acc += std::max(0.0, probs[i]);
  if (acc <= 0) throw std::domain_error("probability vector has no mass");
  Histogram h;
  for (long s = 0; s < shots; ++s) {
    const double u = uniform01(rng) * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) --it;
    ++h[static_cast<std::uint64_t>(it - cdf.begin())];
  }
  return h;
}

Histogram sample(const StateVector& psi, std::span<const Pauli> bases, long shots, Rng& rng) {
  const auto p = basis_probabilities(psi, bases);
  return sample_counts(p, shots, rng);
}

bool term_measurable_in(const PauliTerm& t, std::span<const Pauli> bases) {
  for (const auto& [site, p] : t.factors())
    if (site >= static_cast<int>(bases.size()) || bases[site] != p) return false;
  return true;
}

double estimate_term(const PauliTerm& t, std::span<const Pauli> bases, const Histogram& counts) {
  if (!term_measurable_in(t, bases)) throw std::invalid_argument("term " + t.label() + " not measurable in setting");
  std::uint64_t support = 0;
  for (const auto& f : t.factors()) support |= std::uint64_t{1} << f.first;
  double s = 0;
  long total = 0;
  for (const auto& [idx, n] : counts) {
    s += n * parity_sign(idx & support);
    total += n;
  }
  if (total == 0) throw std::invalid_argument("empty histogram");
  return t.coefficient().real() * s / static_cast<double>(total);
}

std::vector<std::vector<Pauli>> measurement_settings(const PauliSum& op) {
  std::vector<const PauliTerm*> order;
  for (const auto& t : op.terms())
    if (!t.is_identity()) order.push_back(&t);
  std::stable_sort(order.begin(), order.end(), [](auto* a, auto* b) { return a->weight() > b->weight(); });
  std::vector<std::vector<Pauli>> settings;
  for (const auto* t : order) {
    bool placed = false;
    for (auto& s : settings) {
      const bool fits = std::all_of(t->factors().begin(), t->factors().end(), [&](const auto& f) {
        return s[f.first] == Pauli::I || s[f.first] == f.second;
      });
      if (!fits) continue;
      for (const auto& [site, p] : t->factors()) s[site] = p;
      placed = true;
      break;
    }
    if (!placed) {
      settings.emplace_back(op.num_sites(), Pauli::I);
      for (const auto& [site, p] : t->factors()) settings.back()[site] = p;
    }
  }
  for (auto& s : settings) std::replace(s.begin(), s.end(), Pauli::I, Pauli::Z);
  return settings;
}

std::string basis_string(std::span<const Pauli> bases) {
  std::string s;
  for (auto p : bases) s += to_char(p);
  return s;
}

std::string bitstring(std::uint64_t index, int num_sites) {
  std::string s(num_sites, '0');
  for (int i = 0; i < num_sites; ++i)
    if (index >> i & 1) s[i] = '1';
  return s;
}

std::uint64_t bitstring_index(const std::string& bits) {
  if (bits.size() > 64) throw std::invalid_argument("bitstring longer than 64 sites");
  std::uint64_t x = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1')
      x |= std::uint64_t{1} << i;
    else if (bits[i] != '0')
      throw std::invalid_argument("bitstring has a character other than 0/1: '" + bits + "'");
  }
  return x;
}

void write_measurement_csv(std::ostream& os, std::span<const MeasurementRecord> records) {
  os << "setting_id,basis_string,bitstring,count\n";
  for (const auto& r : records) {
    const auto bases = basis_string(r.bases);
    for (const auto& [idx, n] : r.counts)
      os << r.setting_id << ',' << bases << ',' << bitstring(idx, static_cast<int>(r.bases.size())) << ',' << n
         << '\n';
  }
}

std::vector<MeasurementRecord> read_measurement_csv(std::istream& is) {
  std::vector<MeasurementRecord> out;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line.rfind("setting_id", 0) == 0) continue;
    std::stringstream ss(line);
    std::string id, bases, bits, count;
    if (!std::getline(ss, id, ',') || !std::getline(ss, bases, ',') || !std::getline(ss, bits, ',') ||
        !std::getline(ss, count))
      throw std::invalid_argument("measurement CSV line " + std::to_string(line_no) + ": expected 4 fields");
    try {
      const int sid = std::stoi(id);
      if (out.empty() || out.back().setting_id != sid) {
        MeasurementRecord r;
        r.setting_id = sid;
        for (char c : bases) r.bases.push_back(pauli_from_char(c));
        out.push_back(std::move(r));
      }
      if (bits.size() != out.back().bases.size()) throw std::invalid_argument("bitstring length differs from bases");
      out.back().counts[bitstring_index(bits)] += std::stol(count);
    } catch (const std::exception& e) {
      throw std::invalid_argument("measurement CSV line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

Circuit overlap_circuit(const Circuit& prep, const Circuit& ref, bool project) {
  if (prep.num_sites() != ref.num_sites()) throw std::invalid_argument("overlap of circuits on different registers");
  Circuit c = project ? prep.with_layer(x_layer(prep.num_sites())) : prep;
  return c.then(invert(ref));
}

double overlap_protocol(const Circuit& prep, const Circuit& ref, const OverlapOptions& opt) {
  opt.noise.validate();
  Circuit c = [&] {
    if (opt.project && opt.route == ProjectionRoute::FlippedReference)
      return overlap_circuit(prep, spin_flip(ref).circuit, false);
    Circuit full = overlap_circuit(prep, ref, opt.project);
    if (opt.project && opt.fuse) full = fuse_sandwiched_x_layer(full).circuit;
    return full;
  }();

  double p0;
  if (!opt.noise.any()) {
    p0 = std::norm(simulate(c)[0]);
  } else if (!opt.noise.stochastic() || c.num_sites() > kDenseMixedLimit) {
    const int n = opt.noise.stochastic() ? opt.trajectories : 1;
    double acc = 0;
    for (int k = 0; k < n; ++k) {
      Rng rng(child_seed(opt.seed, static_cast<std::uint64_t>(k)));
      acc += std::norm(simulate_trajectory(c, opt.noise, rng)[0]);
    }
    p0 = acc / n;
  } else {
    p0 = simulate_mixed(c, opt.noise).diagonal()[0];
  }
  p0 = std::clamp(p0, 0.0, 1.0);
  if (opt.shots <= 0) return p0;
  Rng rng(child_seed(opt.seed, 0xb1a5ULL));
  const double probs[2] = {p0, 1.0 - p0};
  const auto h = sample_counts(probs, opt.shots, rng);
  const auto it = h.find(0);
  return it == h.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(opt.shots);
}

}  // namespace gspt
