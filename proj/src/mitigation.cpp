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

#include "gspt/mitigation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace gspt {

std::string to_string(ZneModel m) { return m == ZneModel::Linear ? "linear" : "exponential"; }

ZneModel zne_model_from_string(const std::string& s) {
  if (s == "linear") return ZneModel::Linear;
  if (s == "exponential" || s == "exp") return ZneModel::Exponential;
  throw std::invalid_argument("unknown extrapolation model '" + s + "' (expected linear or exponential)");
}

void ZneConfig::validate() const {
  if (factors.size() < 2) throw std::invalid_argument("ZNE needs at least two noise factors");
  for (double f : factors)
    if (!(f >= 1.0)) throw std::invalid_argument("noise factors must be >= 1, got " + std::to_string(f));
  if (twirls < 1) throw std::invalid_argument("twirls must be positive");
  if (shots < 0) throw std::invalid_argument("shots must be non-negative");
  if (bootstrap < 0) throw std::invalid_argument("bootstrap count must be non-negative");
}

namespace {

bool is_single_site(const Layer& l) { return !std::holds_alternative<CZLayer>(l); }

Layer inverse_layer(const Layer& l) {
  if (const auto* y = std::get_if<YLayer>(&l)) {
    YLayer inv = *y;
    for (auto& a : inv.angles) a = -a;
    return inv;
  }
  return l;  // CZ and Pauli layers are self-inverse
}

}  // namespace

FoldResult fold_circuit(const Circuit& c, double factor, std::uint64_t seed) {
  if (!(factor >= 1.0)) throw std::invalid_argument("fold factor must be >= 1");
  const auto& layers = c.layers();
  std::vector<std::size_t> cz;
  for (std::size_t i = 0; i < layers.size(); ++i)
    if (std::holds_alternative<CZLayer>(layers[i])) cz.push_back(i);
  if (cz.empty()) throw std::invalid_argument("circuit has no CZ layer to fold");
  const int n = static_cast<int>(cz.size());

  const int total = static_cast<int>(std::lround((factor - 1.0) * n / 2.0));
  std::vector<int> folds(n, total / n);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  for (int k = 0; k < total % n; ++k) ++folds[order[k]];

  FoldResult out{c, 1.0 + 2.0 * total / n, folds};
  if (total == 0) return out;

  std::vector<Layer> result;
  std::size_t next = 0;
  for (int u = 0; u < n; ++u) {
    const std::size_t end = cz[u];
    std::size_t begin = end;
    if (end > next && is_single_site(layers[end - 1])) begin = end - 1;
    for (; next < begin; ++next) result.push_back(layers[next]);
    const std::vector<Layer> unit(layers.begin() + static_cast<long>(begin), layers.begin() + static_cast<long>(end) + 1);
    std::vector<Layer> inv;
    for (auto it = unit.rbegin(); it != unit.rend(); ++it) inv.push_back(inverse_layer(*it));
    result.insert(result.end(), unit.begin(), unit.end());
    for (int m = 0; m < folds[u]; ++m) {
      result.insert(result.end(), inv.begin(), inv.end());
      result.insert(result.end(), unit.begin(), unit.end());
    }
    next = end + 1;
  }
  for (; next < layers.size(); ++next) result.push_back(layers[next]);
  out.circuit = Circuit(c.num_sites(), c.boundary(), std::move(result));
  return out;
}

PauliLayer conjugate_through_cz(const PauliLayer& p, const std::vector<std::pair<int, int>>& pairs) {
  PauliLayer out = p;
  auto bits = [](Pauli q) { return static_cast<unsigned>(q); };
  for (const auto& [a, b] : pairs) {
    const unsigned pa = bits(p.ops[a]), pb = bits(p.ops[b]);
    const unsigned xa = pa & 1U, za = (pa >> 1) & 1U, xb = pb & 1U, zb = (pb >> 1) & 1U;
    out.ops[a] = static_cast<Pauli>(xa | ((za ^ xb) << 1));
    out.ops[b] = static_cast<Pauli>(xb | ((zb ^ xa) << 1));
  }
  return out;
}

Circuit pauli_twirl(const Circuit& c, std::span<const PauliLayer> before) {
  std::vector<Layer> result;
  std::size_t k = 0;
  for (const auto& l : c.layers()) {
    const auto* cz = std::get_if<CZLayer>(&l);
    if (!cz) {
      result.push_back(l);
      continue;
    }
    if (k >= before.size()) throw std::invalid_argument("one twirl layer per CZ layer expected");
    const PauliLayer& p = before[k++];
    if (static_cast<int>(p.ops.size()) != c.num_sites()) throw std::invalid_argument("twirl layer width mismatch");
    if (p.is_identity()) {
      result.push_back(l);
      continue;
    }
    result.push_back(p);
    result.push_back(l);
    result.push_back(conjugate_through_cz(p, cz->pairs));
  }
  if (k != before.size()) throw std::invalid_argument("one twirl layer per CZ layer expected");
  return Circuit(c.num_sites(), c.boundary(), std::move(result));
}

Circuit pauli_twirl(const Circuit& c, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<PauliLayer> before;
  for (const auto& l : c.layers()) {
    const auto* cz = std::get_if<CZLayer>(&l);
    if (!cz) continue;
    PauliLayer p{std::vector<Pauli>(c.num_sites(), Pauli::I)};
    for (const auto& [a, b] : cz->pairs) {
      p.ops[a] = static_cast<Pauli>(uniform_index(rng, 4));
      p.ops[b] = static_cast<Pauli>(uniform_index(rng, 4));
    }
    before.push_back(std::move(p));
  }
  return pauli_twirl(c, before);
}

ZneFit extrapolate_zne(std::span<const ZnePoint> points, ZneModel model) {
  std::vector<double> fs;
  for (const auto& p : points) fs.push_back(p.factor);
  std::sort(fs.begin(), fs.end());
  if (std::unique(fs.begin(), fs.end()) - fs.begin() < 2)
    throw std::invalid_argument("extrapolation needs at least two distinct noise factors");

  const auto n = static_cast<Eigen::Index>(points.size());
  const bool weighted = std::all_of(points.begin(), points.end(), [](const ZnePoint& p) { return p.sigma > 0; });
  Eigen::MatrixXd a(n, 2);
  Eigen::VectorXd y(n), w(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& p = points[static_cast<std::size_t>(i)];
    a(i, 0) = 1.0;
    a(i, 1) = p.factor;
    double s = p.sigma;
    if (model == ZneModel::Linear) {
      y[i] = p.value;
    } else {
      if (p.value == 0.0 || std::signbit(p.value) != std::signbit(points[0].value))
        throw std::domain_error("exponential extrapolation needs values of one sign");
      y[i] = std::log(std::abs(p.value));
      s = p.sigma / std::abs(p.value);
    }
    w[i] = weighted ? 1.0 / (s * s) : 1.0;
  }
  const Eigen::MatrixXd atw = a.transpose() * w.asDiagonal();
  const Eigen::Matrix2d normal = atw * a;
  Eigen::FullPivLU<Eigen::Matrix2d> lu(normal);
  if (!lu.isInvertible()) throw std::domain_error("singular extrapolation fit");
  Eigen::Matrix2d cov = lu.inverse();
  const Eigen::Vector2d c = cov * (atw * y);
  if (!weighted) {
    const double rss = (y - a * c).squaredNorm();
    cov *= n > 2 ? rss / static_cast<double>(n - 2) : 0.0;
  }

  ZneFit fit;
  fit.model = model;
  fit.coeffs = c;
  if (model == ZneModel::Linear) {
    fit.value = c[0];
    fit.sigma = std::sqrt(std::max(0.0, cov(0, 0)));
  } else {
    const double sign = std::signbit(points[0].value) ? -1.0 : 1.0;
    fit.value = sign * std::exp(c[0]);
    fit.sigma = std::abs(fit.value) * std::sqrt(std::max(0.0, cov(0, 0)));
    fit.warning = "exponential extrapolation is less stable than linear";
  }
  return fit;
}

ShotEstimator::ShotEstimator(const PauliSum& op) : num_sites_(op.num_sites()), settings_(measurement_settings(op)) {
  readout_.resize(settings_.size());
  for (const auto& t : op.terms()) {
    if (std::abs(t.coefficient().imag()) > 1e-12) throw std::invalid_argument("observable must be Hermitian");
    if (t.is_identity()) {
      constant_ += t.coefficient().real();
      continue;
    }
    std::uint64_t support = 0;
    for (const auto& f : t.factors()) support |= std::uint64_t{1} << f.first;
    bool placed = false;
    for (std::size_t s = 0; s < settings_.size() && !placed; ++s)
      if (term_measurable_in(t, settings_[s])) {
        readout_[s].emplace_back(support, t.coefficient().real());
        placed = true;
      }
    if (!placed) throw std::logic_error("term without a measurement setting: " + t.label());
  }
}

ShotEstimator::Estimate ShotEstimator::estimate(const std::vector<Histogram>& counts) const {
  if (counts.size() != settings_.size()) throw std::invalid_argument("one histogram per setting expected");
  Estimate e{constant_, 0.0};
  double var = 0.0;
  for (std::size_t s = 0; s < settings_.size(); ++s) {
    if (readout_[s].empty()) continue;
    double sum = 0, sum2 = 0;
    long total = 0;
    for (const auto& [idx, n] : counts[s]) {
      double v = 0;
      for (const auto& [mask, c] : readout_[s]) v += (std::popcount(idx & mask) & 1) ? -c : c;
      sum += static_cast<double>(n) * v;
      sum2 += static_cast<double>(n) * v * v;
      total += n;
    }
    if (total == 0) throw std::invalid_argument("empty histogram");
    const double mean = sum / static_cast<double>(total);
    e.value += mean;
    if (total > 1) var += (sum2 / static_cast<double>(total) - mean * mean) / static_cast<double>(total - 1);
  }
  e.sigma = std::sqrt(std::max(0.0, var));
  return e;
}

Histogram resample(const Histogram& h, Rng& rng) {
  std::vector<std::uint64_t> keys;
  std::vector<double> cum;
  double total = 0;
  for (const auto& [k, n] : h) {
    keys.push_back(k);
    total += static_cast<double>(n);
    cum.push_back(total);
  }
  Histogram out;
  const long shots = static_cast<long>(total);
  for (long i = 0; i < shots; ++i) {
    const double r = uniform01(rng) * total;
    const auto it = std::upper_bound(cum.begin(), cum.end(), r);
    ++out[keys[static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - cum.begin(), keys.size() - 1))]];
  }
  return out;
}

ZneRun run_zne(const Circuit& prep, const PauliSum& obs, const NoiseSpec& noise, const ZneConfig& cfg) {
  cfg.validate();
  noise.validate();
  ZneRun run;
  run.noiseless = expectation(simulate(prep), obs);
  const ShotEstimator est(obs);

  // Pooled histograms per factor and setting.
  std::vector<std::vector<Histogram>> pooled(cfg.factors.size(), std::vector<Histogram>(est.settings().size()));
  for (std::size_t fi = 0; fi < cfg.factors.size(); ++fi) {
    const double f = cfg.factors[fi];
    std::vector<double> values;
    double achieved = f;
    for (int t = 0; t < cfg.twirls; ++t) {
      const std::uint64_t base = child_seed(cfg.seed, fi * 100003ULL + static_cast<std::uint64_t>(t));
      const FoldResult folded = fold_circuit(prep, f, child_seed(base, 1));
      achieved = folded.factor;
      const Circuit circuit = cfg.twirls > 1 ? pauli_twirl(folded.circuit, child_seed(base, 2)) : folded.circuit;
      const DensityMatrix rho = simulate_mixed(circuit, noise);
      ZneSample s{achieved, t, rho.expectation(obs), 0.0};
      s.value = s.exact;
      if (cfg.shots > 0) {
        Rng rng(child_seed(base, 3));
        std::vector<Histogram> counts;
        for (std::size_t k = 0; k < est.settings().size(); ++k) {
          const auto probs = basis_probabilities(rho, est.settings()[k]);
          counts.push_back(sample_counts(probs, cfg.shots, rng));
          for (const auto& [key, n] : counts.back()) pooled[fi][k][key] += n;
        }
        s.value = est.estimate(counts).value;
      }
      values.push_back(s.value);
      run.samples.push_back(s);
    }
    ZnePoint p{achieved, 0.0, 0.0};
    if (cfg.shots > 0) {
      const auto e = est.estimate(pooled[fi]);
      p.value = e.value;
      p.sigma = e.sigma;
    } else {
      p.value = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
      if (values.size() > 1) {
        double ss = 0;
        for (double v : values) ss += (v - p.value) * (v - p.value);
        p.sigma = std::sqrt(ss / static_cast<double>(values.size() - 1) / static_cast<double>(values.size()));
      }
    }
    run.points.push_back(p);
  }
  run.fit = extrapolate_zne(run.points, cfg.model);
  for (const auto& p : run.points)
    if (p.factor == 1.0) run.raw = p.value;

  if (cfg.shots > 0 && cfg.bootstrap > 1) {
    Rng rng(child_seed(cfg.seed, 0xb007ULL));
    for (int b = 0; b < cfg.bootstrap; ++b) {
      std::vector<ZnePoint> pts;
      for (std::size_t fi = 0; fi < cfg.factors.size(); ++fi) {
        std::vector<Histogram> counts;
        for (const auto& h : pooled[fi]) counts.push_back(resample(h, rng));
        pts.push_back({run.points[fi].factor, est.estimate(counts).value, 0.0});
      }
      run.bootstrap_values.push_back(extrapolate_zne(pts, cfg.model).value);
    }
    const double mean = std::accumulate(run.bootstrap_values.begin(), run.bootstrap_values.end(), 0.0) /
                        static_cast<double>(run.bootstrap_values.size());
    double ss = 0;
    for (double v : run.bootstrap_values) ss += (v - mean) * (v - mean);
    run.bootstrap_sigma = std::sqrt(ss / static_cast<double>(run.bootstrap_values.size() - 1));
  }
  return run;
}

}  // namespace gspt
