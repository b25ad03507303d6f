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

#include <CLI11.hpp>

#include <cmath>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "gspt/app.hpp"
#include "gspt/ed.hpp"
#include "gspt/eht.hpp"
#include "gspt/gfunction.hpp"
#include "gspt/mitigation.hpp"
#include "gspt/mps.hpp"
#include "gspt/prep.hpp"
#include "gspt/rng.hpp"
#include "gspt/sim.hpp"

namespace gspt {
namespace {

namespace fs = std::filesystem;

/// A stage threw; the manifest already records it.
struct StageFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Context {
  AppConfig cfg;
  fs::path out_dir;
  std::ostream& out;
  std::ostream& err;
  Manifest manifest;

  void write(const std::string& rel, const Json& j) {
    write_json(out_dir / rel, j);
    manifest.add_output(rel);
  }
  void write(const std::string& rel, const std::string& text) {
    write_text(out_dir / rel, text);
    manifest.add_output(rel);
  }

  template <class F>
  auto stage(const std::string& name, F&& f) {
    try {
      if constexpr (std::is_void_v<decltype(f())>) {
        f();
        manifest.stage(name, "complete");
      } else {
        auto r = f();
        manifest.stage(name, "complete");
        return r;
      }
    } catch (const std::exception& e) {
      manifest.stage(name, "failed", e.what());
      throw StageFailed(name + ": " + e.what());
    }
  }
};

std::string bc_tag(const ModelParams& p) { return to_string(p.boundary); }

std::string model_tag(const AppConfig& c) {
  std::string t = "L" + std::to_string(c.model.L) + "_" + bc_tag(c.model);
  if (c.cut.any()) t += "_cut" + c.cut.label();
  return t;
}

Json model_json(const AppConfig& c) {
  Json j = to_json(c.model);
  j["cut_a"] = to_string(c.cut.a);
  j["cut_b"] = to_string(c.cut.b);
  return j;
}

DmrgConfig dmrg_config(const AppConfig& c) {
  DmrgConfig d;
  d.chi_max = c.run.chi_max;
  d.max_sweeps = c.oracle.max_sweeps;
  d.energy_tol = c.oracle.energy_tol;
  d.seed = c.run.seed;
  return d;
}

EnergyPhaseOptions energy_options(const AppConfig& c) {
  EnergyPhaseOptions o;
  o.restarts = c.prepare.restarts;
  o.seed = c.run.seed;
  return o;
}

PauliSum hamiltonian_of(const AppConfig& c) {
  return c.cut.any() ? build_cut_hamiltonian(c.model, c.cut).hamiltonian : build_hamiltonian(c.model);
}

ParamSchedule schedule_from_report(const PrepReport& r, const ModelParams& p) {
  if (r.boundary != p.boundary)
    throw std::invalid_argument("report is for " + to_string(r.boundary) + " but the model is " + to_string(p.boundary));
  for (const auto& pt : r.points)
    if (pt.L == p.L) return pt.schedule;
  return r.generator.at(p.L);
}

std::vector<double> head(const std::vector<double>& v, std::size_t n) {
  return {v.begin(), v.begin() + static_cast<long>(std::min(n, v.size()))};
}

// ---------------------------------------------------------------- prepare

void cmd_prepare(Context& ctx) {
  const AppConfig& c = ctx.cfg;
  if (c.cut.any()) throw std::invalid_argument("prepare works on uncut chains");
  const std::string tag = ctx.manifest.tag();
  std::optional<PrepReport> report;
  std::string source = "optimized";
  if (!c.prepare.from_report.empty()) {
    report = ctx.stage("load_report", [&] { return prep_report_from_json(read_json(c.prepare.from_report)); });
    source = "report";
  }
  if (c.prepare.dry_run) {
    const ParamSchedule s =
        report ? schedule_from_report(*report, c.model)
               : ParamSchedule::zero(c.model.boundary == Boundary::Open ? ScheduleMode::PowerLaw : ScheduleMode::Uniform);
    const Circuit circ = ctx.stage("circuit", [&] { return build_ansatz(c.model, s); });
    ctx.write(tag + "_circuit.json", to_json(circ));
    ctx.out << to_json(circ).dump(2) << "\n";
    return;
  }
  if (!report) {
    report = ctx.stage("optimize", [&] {
      return run_prep(c.model.boundary, c.prepare.fit_sizes, c.prepare.check_sizes, energy_options(c));
    });
    ctx.write(tag + "_report.json", to_json(*report));
  }
  const ParamSchedule sched = schedule_from_report(*report, c.model);
  const Circuit circ = build_ansatz(c.model, sched);
  ctx.write(tag + "_circuit.json", to_json(circ));

  Json summary = ctx.stage("evaluate", [&] {
    const PauliSum h = build_hamiltonian(c.model);
    double energy, e0, emax, weight;
    std::string method;
    Json keys = Json::array();
    if (c.model.L <= 20) {
      method = "dense";
      const TargetStates t = exact_targets(c.model);
      energy = expectation(simulate(circ), h);
      e0 = t.energies(0);
      emax = t.e_max;
      weight = std::pow(target_weight(circ, t.states), 2);
    } else {
      method = "mps";
      const Mps psi = apply_circuit_mps(circ, c.run.chi_max);
      energy = expectation(psi, h);
      const auto oracle = oracle_states(c.model, {}, 2, dmrg_config(c), ctx.out_dir / "cache", c.oracle.use_cache);
      for (std::size_t k = 0; k < oracle.keys.size(); ++k) {
        ctx.manifest.add_cache_key(oracle.keys[k], "cache/" + oracle.keys[k] + ".mps");
        ctx.manifest.add_output("cache/" + oracle.keys[k] + ".mps");
        ctx.manifest.add_output("cache/" + oracle.keys[k] + ".json");
      }
      e0 = oracle.states[0].energy;
      emax = -dmrg_ground(h.scaled(-1.0), dmrg_config(c)).energy;
      weight = 0.0;
      for (const auto& s : oracle.states) weight += std::norm(overlap(s.state, psi));
    }
    return Json{{"schema", schema_tag("prep_summary")},
                {"model", to_json(c.model)},
                {"source", source},
                {"method", method},
                {"schedule", to_json(sched)},
                {"circuit", Json{{"y_layers", circ.count_y_layers()},
                                 {"cz_layers", circ.count_cz_layers()},
                                 {"cz_gates", circ.count_cz_gates()}}},
                {"energy", energy},
                {"e_ground", e0},
                {"e_max", emax},
                {"epsilon_E", normalized_energy_distance(energy, e0, emax)},
                {"weight", weight}};
  });
  ctx.write(tag + ".json", summary);
  ctx.out << summary.dump(2) << "\n";
}

// ---------------------------------------------------------------- oracle

void cmd_oracle(Context& ctx) {
  const AppConfig& c = ctx.cfg;
  const int idx = c.oracle.state_index;
  const auto res = ctx.stage("dmrg", [&] {
    return oracle_states(c.model, c.cut, idx + 1, dmrg_config(c), ctx.out_dir / "cache", c.oracle.use_cache);
  });
  std::vector<double> energies;
  for (const auto& s : res.states) energies.push_back(s.energy);
  for (std::size_t k = 0; k < res.keys.size(); ++k) {
    ctx.manifest.add_cache_key(res.keys[k], "cache/" + res.keys[k] + ".mps");
    ctx.manifest.add_output("cache/" + res.keys[k] + ".mps");
    ctx.manifest.add_output("cache/" + res.keys[k] + ".json");
  }
  const DmrgResult& r = res.states.back();
  const Json j{{"schema", schema_tag("oracle_result")},
               {"model", model_json(c)},
               {"state_index", idx},
               {"energy", r.energy},
               {"energies", energies},
               {"converged", r.converged},
               {"sweeps", r.sweeps},
               {"max_truncation", r.max_truncation},
               {"bond_dims", r.state.bond_dims()},
               {"entropies", entanglement_entropies(r.state)},
               {"checkpoint", "cache/" + res.keys.back() + ".mps"},
               {"cache_key", res.keys.back()}};
  ctx.write(ctx.manifest.tag() + ".json", j);
  ctx.out << j.dump(2) << "\n";
}

// ---------------------------------------------------------------- gfunction

void cmd_gfunction(Context& ctx) {
  const AppConfig& c = ctx.cfg;
  const ModelParams& p = c.model;
  if (p.boundary != Boundary::Periodic || p.L % 2 != 0) throw std::invalid_argument("gfunction needs pbc and even L");
  const std::string& mode = c.gfunction.mode;
  Json records = Json::array();
  Json extra = Json::object();
  CsvTable csv({"L", "mode", "p_cz", "g", "g_err", "raw_overlap"});
  auto add = [&](double pz, const GFunctionResult& r, std::optional<double> raw) {
    Json rec{{"p_cz", pz}, {"result", to_json(r)}};
    if (raw) rec["raw_overlap"] = *raw;
    records.push_back(rec);
    csv.row({std::to_string(p.L), mode, fmt(pz), fmt(r.g), fmt(r.g_err), raw ? fmt(*raw) : ""});
  };
  if (mode == "exact") {
    add(0.0, ctx.stage("exact", [&] { return g_exact(p); }), std::nullopt);
  } else if (mode == "dmrg") {
    add(0.0, ctx.stage("dmrg", [&] { return g_dmrg(p, dmrg_config(c)); }), std::nullopt);
  } else {
    const GSchedules sched = ctx.stage("schedules", [&] {
      ModelParams small = p;
      small.L = c.gfunction.base_L;
      small.boundary = Boundary::Open;
      const PhaseResult obc = optimize_energy_phase(small, energy_options(c));
      small.boundary = Boundary::Periodic;
      const PhaseResult pbc = optimize_energy_phase(small, energy_options(c));
      return optimize_g_schedules(p, pbc.schedule, obc.schedule);
    });
    extra["schedules"] = Json{{"ring", to_json(sched.ring)},
                              {"one_cut", to_json(sched.one_cut)},
                              {"two_cuts", to_json(sched.two_cuts)},
                              {"ring_weight", sched.ring_weight},
                              {"one_cut_weight", sched.one_cut_weight},
                              {"two_cuts_weight", sched.two_cuts_weight}};
    const GCircuits gc = g_circuits(p, sched.ring, sched.one_cut, sched.two_cuts);
    const auto& noise = c.gfunction.noise;
    std::vector<GFunctionResult> results(noise.size());
    std::vector<double> raw(noise.size());
    ctx.stage("protocol", [&] {
      parallel_for(static_cast<int>(noise.size()), c.run.workers, [&](int i) {
        GProtocolOptions o;
        o.noise.cz_depolarizing = noise[i];
        o.shots = c.gfunction.shots;
        o.resamples = c.gfunction.shots > 0 ? c.gfunction.resamples : 0;
        o.seed = child_seed(c.run.seed, static_cast<std::uint64_t>(i));
        results[i] = g_protocol(gc, o);
        raw[i] = raw_overlap(gc, o);
      });
    });
    for (std::size_t i = 0; i < noise.size(); ++i) add(noise[i], results[i], raw[i]);
  }
  Json j{{"schema", schema_tag("gfunction_result")}, {"model", to_json(p)}, {"mode", mode}, {"reference", std::sqrt(2.0)}};
  j.update(extra);
  j["records"] = records;
  ctx.write(ctx.manifest.tag() + ".json", j);
  ctx.write(ctx.manifest.tag() + ".csv", csv.str());
  ctx.out << j.dump(2) << "\n";
}

// ---------------------------------------------------------------- eht

void cmd_eht(Context& ctx) {
  const AppConfig& c = ctx.cfg;
  const ModelParams& p = c.model;
  if (p.boundary != Boundary::Periodic || c.cut.any()) throw std::invalid_argument("eht works on an uncut ring");
  if (p.L > 20) throw std::invalid_argument("eht uses dense states; L must be at most 20");
  const auto& e = c.eht;
  const TargetStates targets = ctx.stage("oracle", [&] { return exact_targets(p); });
  const StateVector ground = to_state(p.L, targets.states.col(0));
  Json state_info{{"source", e.source}};
  const StateVector measured = ctx.stage("state", [&] {
    if (e.source != "prepared") return ground;
    ModelParams small = p;
    small.L = c.gfunction.base_L;
    const PhaseResult ep = optimize_energy_phase(small, energy_options(c));
    const PhaseResult op = optimize_overlap_phase(p, ep.schedule, targets.states);
    const StateVector s = simulate(build_ansatz(p, op.schedule));
    const Eigen::VectorXd v = real_amplitudes(s);
    state_info["schedule"] = to_json(op.schedule);
    state_info["weights"] = {std::pow(v.dot(targets.states.col(0)), 2), std::pow(v.dot(targets.states.col(1)), 2)};
    return s;
  });
  const auto settings = random_settings(p.L, e.settings, child_seed(c.run.seed, 1));
  const bool exact_probs = e.source == "exact" || e.shots == 0;
  std::vector<Histogram> counts;
  if (!exact_probs) {
    counts.resize(settings.size());
    ctx.stage("sample", [&] {
      parallel_for(static_cast<int>(settings.size()), c.run.workers, [&](int k) {
        Rng rng(child_seed(c.run.seed, 1000 + static_cast<std::uint64_t>(k)));
        counts[k] = sample(measured, settings[k], e.shots, rng);
      });
    });
    std::vector<MeasurementRecord> rec;
    for (std::size_t k = 0; k < settings.size(); ++k) rec.push_back({static_cast<int>(k), settings[k], counts[k]});
    std::ostringstream os;
    write_measurement_csv(os, rec);
    ctx.write(ctx.manifest.tag() + "_dataset.csv", os.str());
  }
  const auto windows = ring_windows(p.L, e.window_size, e.windows);
  Json records = Json::array();
  std::vector<Json> recs(windows.size());
  ctx.stage("fit", [&] {
    parallel_for(static_cast<int>(windows.size()), c.run.workers, [&](int w) {
      const auto& sites = windows[w];
      const Eigen::MatrixXcd oracle = reduced_density(ground, sites);
      const WindowData data = exact_probs ? window_data_exact(reduced_density(measured, sites), sites, settings)
                                          : window_data_from_counts(sites, settings, counts);
      EhtFitOptions fo;
      fo.restarts = e.restarts;
      fo.seed = child_seed(c.run.seed, 2000 + static_cast<std::uint64_t>(w));
      const EhtFit fit = fit_eht(data, fo);
      const EhtScore score = reconstruct_and_score(fit.coeffs, oracle);
      const auto oxi = entanglement_spectrum(oracle);
      recs[w] = Json{{"window", sites},
                     {"beta", to_json(fit.coeffs)},
                     {"xi", head(score.xi, 8)},
                     {"fidelity", score.fidelity},
                     {"degeneracy_ratio", degeneracy_ratio(score.xi)},
                     {"loss", fit.loss},
                     {"converged", fit.converged},
                     {"oracle_xi", head(oxi, 8)},
                     {"oracle_degeneracy_ratio", degeneracy_ratio(oxi)}};
    });
  });
  double mean_f = 0.0;
  for (auto& r : recs) {
    mean_f += r.at("fidelity").get<double>() / static_cast<double>(recs.size());
    records.push_back(std::move(r));
  }
  const Json j{{"schema", schema_tag("eht_result")},
               {"model", to_json(p)},
               {"window_size", e.window_size},
               {"settings", e.settings},
               {"shots", exact_probs ? 0L : e.shots},
               {"state", state_info},
               {"mean_fidelity", mean_f},
               {"records", records}};
  ctx.write(ctx.manifest.tag() + ".json", j);
  ctx.out << "windows " << records.size() << " mean fidelity " << fmt(mean_f) << "\n";
}

// ---------------------------------------------------------------- zne

void cmd_zne(Context& ctx) {
  const AppConfig& c = ctx.cfg;
  const ModelParams& p = c.model;
  if (c.cut.any()) throw std::invalid_argument("zne works on uncut chains");
  const auto& z = c.zne;
  const PhaseResult ep = ctx.stage("prepare", [&] { return optimize_energy_phase(p, energy_options(c)); });
  const SimplifiedMeasurement sm = simplify_terminal_cz(build_ansatz(p, ep.schedule), build_hamiltonian(p));
  ZneConfig zc;
  zc.factors = z.factors;
  zc.twirls = z.twirls;
  zc.model = zne_model_from_string(z.model);
  zc.shots = z.shots;
  zc.bootstrap = z.bootstrap;
  zc.seed = child_seed(c.run.seed, 3);
  NoiseSpec noise;
  noise.cz_depolarizing = z.p_cz;
  const ZneRun run = ctx.stage("zne", [&] { return run_zne(sm.circuit, sm.observable, noise, zc); });
  CsvTable csv({"F", "twirl_id", "value"});
  for (const auto& s : run.samples) csv.row({fmt(s.factor), std::to_string(s.twirl), fmt(s.value)});
  Json points = Json::array();
  for (const auto& q : run.points) points.push_back(Json{{"F", q.factor}, {"value", q.value}, {"sigma", q.sigma}});
  const ZneModel other = zc.model == ZneModel::Linear ? ZneModel::Exponential : ZneModel::Linear;
  const double err_raw = std::abs(run.raw - run.noiseless);
  const double err_zne = std::abs(run.fit.value - run.noiseless);
  Json j{{"schema", schema_tag("zne_result")},
         {"model", to_json(p)},
         {"observable", z.observable},
         {"p_cz", z.p_cz},
         {"twirls", z.twirls},
         {"shots", z.shots},
         {"points", points},
         {"fit", to_json(run.fit)},
         {"alternative_fit", to_json(extrapolate_zne(run.points, other))},
         {"noiseless", run.noiseless},
         {"raw", run.raw},
         {"error_reduction", err_zne > 0 ? err_raw / err_zne : 0.0}};
  if (z.shots > 0) j["bootstrap_sigma"] = run.bootstrap_sigma;
  ctx.write(ctx.manifest.tag() + ".json", j);
  ctx.write(ctx.manifest.tag() + ".csv", csv.str());
  ctx.out << j.dump(2) << "\n";
}

// ---------------------------------------------------------------- entropy

void cmd_entropy(Context& ctx) {
  const AppConfig& c = ctx.cfg;
  std::vector<double> s;
  if (c.entropy.method == "exact") {
    s = ctx.stage("exact", [&] {
      const Eigenpairs e = lowest_eigenpairs(hamiltonian_of(c), 1);
      return entanglement_entropies(Mps::from_dense(e.vectors.col(0), c.model.L));
    });
  } else {
    const auto res = ctx.stage("dmrg", [&] {
      return oracle_states(c.model, c.cut, 1, dmrg_config(c), ctx.out_dir / "cache", c.oracle.use_cache);
    });
    ctx.manifest.add_cache_key(res.keys[0], "cache/" + res.keys[0] + ".mps");
    ctx.manifest.add_output("cache/" + res.keys[0] + ".mps");
    ctx.manifest.add_output("cache/" + res.keys[0] + ".json");
    s = entanglement_entropies(res.states[0].state);
  }
  const CentralChargeFit fit = fit_central_charge(s, c.model.L, c.model.boundary);
  CsvTable csv({"l", "S"});
  for (std::size_t k = 0; k < s.size(); ++k) csv.row({std::to_string(k + 1), fmt(s[k])});
  const Json j{{"schema", schema_tag("entropy_result")},
               {"model", model_json(c)},
               {"method", c.entropy.method},
               {"entropies", s},
               {"central_charge", Json{{"c", fit.c}, {"offset", fit.offset}, {"rms", fit.rms}, {"points", fit.points}}}};
  ctx.write(ctx.manifest.tag() + ".json", j);
  ctx.write(ctx.manifest.tag() + ".csv", csv.str());
  ctx.out << j.dump(2) << "\n";
}

// ---------------------------------------------------------------- emit-plotdata

const std::map<std::string, std::vector<std::string>>& figure_inputs() {
  static const std::map<std::string, std::vector<std::string>> m{
      {"fig2c", {"prep_report", "prep_summary"}}, {"fig2d", {"prep_report", "prep_summary"}},
      {"fig3c", {"gfunction_result"}},            {"fig4c", {"eht_result"}},
      {"zne", {"zne_result"}},                    {"noise-robustness", {"gfunction_result"}}};
  return m;
}

std::string emit_figure(const std::string& figure, const fs::path& dir) {
  const auto it = figure_inputs().find(figure);
  if (it == figure_inputs().end()) throw std::invalid_argument("unknown figure '" + figure + "'");
  std::map<std::string, std::vector<Json>> by_kind;
  if (fs::is_directory(dir)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
      if (entry.path().extension() == ".json" && entry.path().string().find(".manifest.") == std::string::npos)
        files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      const Json j = read_json(f);
      if (!j.is_object() || !j.contains("schema")) continue;
      const std::string s = j["schema"].get<std::string>();
      for (const auto& kind : it->second)
        if (s == schema_tag(kind)) by_kind[kind].push_back(j);
    }
  }
  bool any = false;
  for (const auto& kind : it->second) any = any || !by_kind[kind].empty();
  if (!any) {
    std::string need;
    for (const auto& kind : it->second) need += (need.empty() ? "" : " or ") + schema_tag(kind);
    throw std::runtime_error("missing inputs for " + figure + " in " + dir.string() + ": need " + need);
  }

  if (figure == "fig2c" || figure == "fig2d") {
    const bool eps = figure == "fig2c";
    std::map<std::pair<std::string, int>, double> rows;
    for (const auto& r : by_kind["prep_report"])
      for (const auto& pt : r["points"])
        rows[{r["boundary"].get<std::string>(), pt["L"].get<int>()}] = pt[eps ? "epsilon_E" : "weight"].get<double>();
    for (const auto& s : by_kind["prep_summary"])
      rows[{s["model"]["boundary"].get<std::string>(), s["model"]["L"].get<int>()}] =
          s[eps ? "epsilon_E" : "weight"].get<double>();
    CsvTable t({"L", "boundary", eps ? "epsilon_E" : "overlap"});
    for (const auto& [k, v] : rows) t.row({std::to_string(k.second), k.first, fmt(v)});
    return t.str();
  }
  if (figure == "fig3c" || figure == "noise-robustness") {
    const bool noise = figure == "noise-robustness";
    CsvTable t(noise ? std::vector<std::string>{"p_cz", "g", "raw_overlap"} : std::vector<std::string>{"L", "g", "g_err"});
    for (const auto& r : by_kind["gfunction_result"])
      for (const auto& rec : r["records"]) {
        if (noise) {
          if (!rec.contains("raw_overlap")) continue;
          t.row({fmt(rec["p_cz"].get<double>()), fmt(rec["result"]["g"].get<double>()),
                 fmt(rec["raw_overlap"].get<double>())});
        } else if (rec["p_cz"].get<double>() == 0.0) {
          t.row({std::to_string(r["model"]["L"].get<int>()), fmt(rec["result"]["g"].get<double>()),
                 fmt(rec["result"]["g_err"].get<double>())});
        }
      }
    if (noise && t.rows() == 0) throw std::runtime_error("missing inputs for noise-robustness: no protocol-mode results");
    return t.str();
  }
  if (figure == "fig4c") {
    CsvTable t({"window_size", "level_index", "xi_mean", "xi_std", "source"});
    for (const auto& r : by_kind["eht_result"]) {
      for (const std::string src : {"eht", "oracle"}) {
        const std::string key = src == "eht" ? "xi" : "oracle_xi";
        std::size_t levels = SIZE_MAX;
        for (const auto& rec : r["records"]) levels = std::min(levels, rec[key].size());
        for (std::size_t k = 0; k < levels; ++k) {
          double m = 0, m2 = 0;
          const double n = static_cast<double>(r["records"].size());
          for (const auto& rec : r["records"]) {
            const double x = rec[key][k].get<double>();
            m += x / n;
            m2 += x * x / n;
          }
          t.row({std::to_string(r["window_size"].get<int>()), std::to_string(k + 1), fmt(m),
                 fmt(std::sqrt(std::max(0.0, m2 - m * m))), src});
        }
      }
    }
    return t.str();
  }
  CsvTable t({"F", "value", "sigma"});
  for (const auto& r : by_kind["zne_result"])
    for (const auto& q : r["points"])
      t.row({fmt(q["F"].get<double>()), fmt(q["value"].get<double>()), fmt(q["sigma"].get<double>())});
  return t.str();
}

// ---------------------------------------------------------------- driver

struct Flags {
  std::string config;
  std::vector<std::string> sets;
  std::vector<std::pair<std::string, std::string>> direct;  // key -> YAML value
};

void add_flag(CLI::App* app, Flags& f, const std::string& name, const std::string& key, const std::string& help,
              bool list = false) {
  app->add_option_function<std::string>(
         name,
         [&f, key, list](const std::string& v) { f.direct.emplace_back(key, list ? "[" + v + "]" : v); }, help)
      ->trigger_on_parse();
}

void add_model_flags(CLI::App* app, Flags& f) {
  add_flag(app, f, "--L", "model.L", "number of sites");
  add_flag(app, f, "--J", "model.J", "ZXZ coupling");
  add_flag(app, f, "--g", "model.g", "ZZ coupling");
  add_flag(app, f, "--field", "model.h", "transverse field h");
  add_flag(app, f, "--boundary", "model.boundary", "obc or pbc");
  add_flag(app, f, "--cut-a", "model.cut_a", "cut at bond (L-1, 0)");
  add_flag(app, f, "--cut-b", "model.cut_b", "cut at bond (L/2-1, L/2)");
}

AppConfig resolve(const Flags& f) {
  AppConfig cfg = f.config.empty() ? AppConfig{} : load_config(f.config);
  for (const auto& s : f.sets) apply_override(cfg, s);
  for (const auto& [k, v] : f.direct) apply_override(cfg, k + "=" + v);
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("<command line>", 0, 0, e.what());
  }
  return cfg;
}

std::string tag_for(const std::string& cmd, const AppConfig& c, const std::string& figure) {
  if (cmd == "emit-plotdata") return "plotdata_" + figure;
  std::string t = cmd + "_" + model_tag(c);
  if (cmd == "oracle") t += "_s" + std::to_string(c.oracle.state_index);
  if (cmd == "gfunction") t += "_" + c.gfunction.mode;
  if (cmd == "eht") t += "_n" + std::to_string(c.eht.window_size) + "_" + c.eht.source;
  if (cmd == "prepare" && c.prepare.dry_run) t += "_dry";
  return t;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"gspt: gapless SPT boundary-state toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", GSPT_VERSION);
  Flags flags;
  app.add_option("--config", flags.config, "YAML config file")->check(CLI::ExistingFile);
  app.add_option("--set", flags.sets, "override section.key=value (repeatable)");
  add_flag(&app, flags, "--seed", "run.seed", "master seed");
  add_flag(&app, flags, "--workers", "run.workers", "worker threads");
  add_flag(&app, flags, "--out-dir", "run.out_dir", "output directory");
  add_flag(&app, flags, "--chi-max", "run.chi_max", "MPS bond dimension cap");
  app.fallthrough();

  auto* prepare = app.add_subcommand("prepare", "optimize (or load) ansatz schedules and emit the circuit");
  add_model_flags(prepare, flags);
  add_flag(prepare, flags, "--from-report", "prepare.from_report", "prep report to take schedules from");
  prepare->add_flag_callback("--dry-run", [&] { flags.direct.emplace_back("prepare.dry_run", "true"); },
                             "emit the circuit only");

  auto* oracle = app.add_subcommand("oracle", "DMRG eigenstates with checkpoint cache");
  add_model_flags(oracle, flags);
  add_flag(oracle, flags, "--state-index", "oracle.state_index", "0 ground, 1 first excited, ...");
  oracle->add_flag_callback("--no-cache", [&] { flags.direct.emplace_back("oracle.use_cache", "false"); },
                            "ignore cached checkpoints");

  auto* gfun = app.add_subcommand("gfunction", "boundary g-function");
  add_model_flags(gfun, flags);
  add_flag(gfun, flags, "--mode", "gfunction.mode", "exact, dmrg or protocol");
  add_flag(gfun, flags, "--noise", "gfunction.noise", "comma-separated CZ depolarizing rates", true);
  add_flag(gfun, flags, "--shots", "gfunction.shots", "shots per circuit");

  auto* eht = app.add_subcommand("eht", "entanglement Hamiltonian tomography");
  add_model_flags(eht, flags);
  add_flag(eht, flags, "--window-size", "eht.window_size", "sites per window");
  add_flag(eht, flags, "--windows", "eht.windows", "number of windows");
  add_flag(eht, flags, "--settings", "eht.settings", "random bases");
  add_flag(eht, flags, "--shots", "eht.shots", "shots per basis");
  add_flag(eht, flags, "--source", "eht.source", "prepared, ground or exact");

  auto* zne = app.add_subcommand("zne", "zero-noise extrapolation on a simulated device");
  add_model_flags(zne, flags);
  add_flag(zne, flags, "--observable", "zne.observable", "energy");
  add_flag(zne, flags, "--factors", "zne.factors", "comma-separated noise factors", true);
  add_flag(zne, flags, "--twirls", "zne.twirls", "twirls per factor");
  add_flag(zne, flags, "--model", "zne.model", "linear or exponential");
  add_flag(zne, flags, "--p-cz", "zne.p_cz", "CZ depolarizing rate");
  add_flag(zne, flags, "--shots", "zne.shots", "shots per setting");

  auto* entropy = app.add_subcommand("entropy", "entanglement entropy profile and central charge");
  add_model_flags(entropy, flags);
  add_flag(entropy, flags, "--method", "entropy.method", "dmrg or exact");

  std::string figure, results_dir;
  auto* plot = app.add_subcommand("emit-plotdata", "tidy CSV for one figure from a results directory");
  plot->add_option("--figure", figure, "fig2c, fig2d, fig3c, fig4c, zne or noise-robustness")->required();
  plot->add_option("--results-dir", results_dir, "directory with result JSON (default: out_dir)");

  auto* ref = app.add_subcommand("config-reference", "print every config key with its default");

  std::string output;
  auto* dump = app.add_subcommand("dump-circuit", "print a circuit as JSON");
  add_model_flags(dump, flags);
  add_flag(dump, flags, "--from-report", "prepare.from_report", "prep report to take schedules from");
  dump->add_option("--output", output, "write to a file instead of stdout");

  auto* dumph = app.add_subcommand("dump-hamiltonian", "print the Hamiltonian in the Pauli text format");
  add_model_flags(dumph, flags);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  if (ref->parsed()) {
    out << config_reference();
    return 0;
  }

  AppConfig cfg;
  try {
    cfg = resolve(flags);
  } catch (const std::exception& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  }

  if (dump->parsed() || dumph->parsed()) {
    try {
      if (dumph->parsed()) {
        out << hamiltonian_of(cfg).to_text();
        return 0;
      }
      ParamSchedule s = ParamSchedule::zero(cfg.model.boundary == Boundary::Open ? ScheduleMode::PowerLaw
                                                                                 : ScheduleMode::Uniform);
      if (!cfg.prepare.from_report.empty())
        s = schedule_from_report(prep_report_from_json(read_json(cfg.prepare.from_report)), cfg.model);
      const std::string text = to_json(build_ansatz(cfg.model, s, cfg.cut)).dump(2) + "\n";
      if (output.empty()) {
        out << text;
      } else {
        write_text(output, text);
      }
      return 0;
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return 1;
    }
  }

  std::string cmd;
  for (auto* sc : app.get_subcommands()) cmd = sc->get_name();
  const fs::path out_dir = cfg.run.out_dir;
  Context ctx{cfg, out_dir, out, err, Manifest(cmd, tag_for(cmd, cfg, figure), cfg)};
  int status = 0;
  try {
    if (cmd == "prepare") cmd_prepare(ctx);
    if (cmd == "oracle") cmd_oracle(ctx);
    if (cmd == "gfunction") cmd_gfunction(ctx);
    if (cmd == "eht") cmd_eht(ctx);
    if (cmd == "zne") cmd_zne(ctx);
    if (cmd == "entropy") cmd_entropy(ctx);
    if (cmd == "emit-plotdata") {
      const std::string csv =
          ctx.stage("collect", [&] { return emit_figure(figure, results_dir.empty() ? out_dir : fs::path(results_dir)); });
      ctx.write("plotdata/" + figure + ".csv", csv);
      out << csv;
    }
  } catch (const StageFailed& e) {
    err << "error: " << e.what() << "\n";
    status = 1;
  } catch (const std::exception& e) {
    ctx.manifest.stage("setup", "failed", e.what());
    err << "error: " << e.what() << "\n";
    status = 1;
  }
  try {
    const std::string m = ctx.manifest.write(out_dir);
    err << "manifest: " << (out_dir / m).string() << "\n";
  } catch (const std::exception& e) {
    err << "error writing manifest: " << e.what() << "\n";
    status = 1;
  }
  return status;
}

}  // namespace gspt
