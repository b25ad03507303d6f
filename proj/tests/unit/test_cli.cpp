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

#include <doctest.h>
#include <unistd.h>

#include <cmath>
#include <set>
#include <sstream>

#include "gspt/app.hpp"
#include "gspt/config.hpp"
#include "gspt/gfunction.hpp"
#include "gspt/io.hpp"

using namespace gspt;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("gspt_cli_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

struct Run {
  int status;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int s = run_cli(args, out, err);
  return {s, out.str(), err.str()};
}

/// Every non-manifest file below `dir` must be listed by exactly one manifest.
void check_manifest_coverage(const fs::path& dir) {
  std::multiset<std::string> listed;
  std::set<std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    const std::string rel = fs::relative(e.path(), dir).generic_string();
    if (rel.size() > 14 && rel.substr(rel.size() - 14) == ".manifest.json") {
      const Json m = read_json(e.path());
      check_schema(m, "manifest");
      for (const auto& o : m.at("outputs")) listed.insert(o.get<std::string>());
    } else {
      files.insert(rel);
    }
  }
  for (const auto& f : files) CHECK_MESSAGE(listed.count(f) >= 1, f);
  for (const auto& l : listed) CHECK_MESSAGE(files.count(l) == 1, l);
}

}  // namespace

TEST_CASE("config defaults, overlay and overrides") {
  const AppConfig d = parse_config("");
  CHECK(d.model.L == 8);
  CHECK(d.zne.factors == std::vector<double>{1.0, 1.5, 2.0, 2.5, 3.0});
  const AppConfig c = parse_config("model:\n  L: 12\n  boundary: obc\nzne:\n  factors: [1, 2, 3]\n  model: exponential\n");
  CHECK(c.model.L == 12);
  CHECK(c.model.boundary == Boundary::Open);
  CHECK(c.zne.factors == std::vector<double>{1.0, 2.0, 3.0});
  CHECK(c.zne.model == "exponential");
  CHECK(c.eht.window_size == 8);
  AppConfig o = c;
  apply_override(o, "eht.window_size=5");
  apply_override(o, "run.out_dir=elsewhere");
  CHECK(o.eht.window_size == 5);
  CHECK(o.run.out_dir == "elsewhere");
  CHECK_THROWS_AS(apply_override(o, "eht.nope=1"), ConfigError);
  CHECK_THROWS_AS(apply_override(o, "window_size"), ConfigError);
}

TEST_CASE("config errors point at the offending line") {
  auto line_of = [](const std::string& text) {
    try {
      parse_config(text, "cfg.yaml");
    } catch (const ConfigError& e) {
      return e.line();
    }
    return -1;
  };
  CHECK(line_of("model:\n  L: 8\n  Lx: 3\n") == 3);
  CHECK(line_of("model:\n  L: 8\neht:\n  windows: many\n") == 4);
  CHECK(line_of("run:\n  workers: 0\n") == 2);
  CHECK(line_of("zne:\n  model: quadratic\n") == 2);
  CHECK(line_of("plots:\n  x: 1\n") == 1);
  CHECK(line_of("model:\n  L: [8\n") > 0);
  try {
    parse_config("model:\n  boundary: twisted\n", "cfg.yaml");
    FAIL("no error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).rfind("cfg.yaml:2:", 0) == 0);
  }
  // Cross-field problems have no single line.
  CHECK_THROWS_AS(parse_config("model:\n  boundary: obc\n  cut_a: up\n"), ConfigError);
}

TEST_CASE("config reference lists every key and parses back to the defaults") {
  const std::string ref = config_reference();
  for (const auto& k : config_keys()) CHECK_MESSAGE(ref.find("  " + k.key + ":") != std::string::npos, k.key);
  const AppConfig back = parse_config(ref);
  const AppConfig d;
  CHECK(back.model == d.model);
  CHECK(back.run.seed == d.run.seed);
  CHECK(back.prepare.fit_sizes == d.prepare.fit_sizes);
  CHECK(back.zne.factors == d.zne.factors);
  CHECK(back.eht.source == d.eht.source);
}

TEST_CASE("circuit and schedule JSON round trip") {
  ModelParams p;
  p.L = 8;
  p.boundary = Boundary::Open;
  ParamSchedule s = ParamSchedule::zero(ScheduleMode::PowerLaw);
  for (int k = 0; k < kNumBlocks; ++k) s.blocks[k] = {0.1 * (k + 1), -0.5 - 0.1 * k, 0.3 - 0.05 * k};
  CHECK(schedule_from_json(to_json(s)) == s);
  const Circuit c = build_ansatz(p, s).with_layer(x_layer(8));
  const Json j = to_json(c);
  CHECK(j.at("schema") == "gspt.circuit/1");
  CHECK(circuit_from_json(Json::parse(j.dump())) == c);
  Json bad = j;
  bad["schema"] = "gspt.circuit/9";
  CHECK_THROWS(circuit_from_json(bad));
}

TEST_CASE("prep report JSON round trip") {
  PrepReport r;
  r.boundary = Boundary::Periodic;
  r.energy_phase.schedule = ParamSchedule::uniform({0.1, 0.2, 0.3, 0.4, 0.5});
  r.energy_phase.loss = 0.01;
  r.energy_phase.trace = {0.5, 0.1, 0.01};
  PrepPoint pt;
  pt.L = 10;
  pt.schedule = ParamSchedule::uniform({0.11, 0.21, 0.31, 0.41, 0.51});
  pt.weight = 0.97;
  pt.epsilon_energy = 0.004;
  r.points = {pt};
  r.generator.base = r.energy_phase.schedule;
  r.generator.sizes = {8, 10, 12, 14};
  r.generator.fits[2] = {0.5, -1.5, 0.2, 1.0, 1e-4};
  const PrepReport b = prep_report_from_json(Json::parse(to_json(r).dump()));
  CHECK(b.boundary == r.boundary);
  CHECK(b.energy_phase.schedule == r.energy_phase.schedule);
  CHECK(b.energy_phase.trace == r.energy_phase.trace);
  REQUIRE(b.points.size() == 1);
  CHECK(b.points[0].schedule == pt.schedule);
  CHECK(b.points[0].epsilon_energy == pt.epsilon_energy);
  CHECK(b.generator.sizes == r.generator.sizes);
  CHECK(b.generator.fits[2].b == -1.5);
  CHECK(b.generator.fits[2].d == 1.0);
}

TEST_CASE("csv quoting and number formatting") {
  CsvTable t({"a", "b"});
  t.row({"1", "x,y"}).row({"say \"hi\"", ""});
  CHECK(t.str() == "a,b\n1,\"x,y\"\n\"say \"\"hi\"\"\",\n");
  CHECK_THROWS(t.row({"1"}));
  for (double v : {0.1, 1.0 / 3.0, -2.5e-17, 1e300}) CHECK(std::stod(fmt(v)) == v);
  CHECK(fmt(2.0) == "2");
}

TEST_CASE("parallel_for visits every index once and rethrows") {
  for (int workers : {1, 3, 8}) {
    std::vector<int> hits(50, 0);
    parallel_for(50, workers, [&](int i) { hits[i] += 1; });
    for (int h : hits) CHECK(h == 1);
  }
  CHECK_THROWS_AS(parallel_for(20, 4,
                               [](int i) {
                                 if (i == 7) throw std::domain_error("seven");
                               }),
                  std::domain_error);
}

TEST_CASE("oracle cache key depends on every input") {
  ModelParams p;
  DmrgConfig d;
  const std::string k0 = hash_key(oracle_cache_inputs(p, {}, 0, d));
  CHECK(k0.size() == 16);
  CHECK(k0 == hash_key(oracle_cache_inputs(p, {}, 0, d)));
  CHECK(k0 != hash_key(oracle_cache_inputs(p, {}, 1, d)));
  CHECK(k0 != hash_key(oracle_cache_inputs(p, {CutKind::Up, CutKind::None}, 0, d)));
  DmrgConfig d2 = d;
  d2.chi_max = 64;
  CHECK(k0 != hash_key(oracle_cache_inputs(p, {}, 0, d2)));
  d2 = d;
  d2.max_sweeps = 3;
  CHECK(k0 != hash_key(oracle_cache_inputs(p, {}, 0, d2)));
  ModelParams q = p;
  q.J = 0.5;
  CHECK(k0 != hash_key(oracle_cache_inputs(q, {}, 0, d)));
}

TEST_CASE("prepare --dry-run emits a circuit without simulating") {
  const fs::path dir = scratch("dry");
  const Run r = cli({"--out-dir", dir.string(), "prepare", "--L", "8", "--boundary", "obc", "--dry-run"});
  REQUIRE(r.status == 0);
  const Json c = read_json(dir / "prepare_L8_obc_dry_circuit.json");
  CHECK(c.at("schema") == "gspt.circuit/1");
  CHECK(c.at("num_sites") == 8);
  CHECK(c.at("y_layers") == 5);
  CHECK(c.at("cz_layers") == 5);
  const Json m = read_json(dir / "prepare_L8_obc_dry.manifest.json");
  CHECK(m.at("status") == "complete");
  REQUIRE(m.at("stages").size() == 1);
  CHECK(m.at("stages")[0].at("name") == "circuit");
  CHECK(!fs::exists(dir / "prepare_L8_obc_dry.json"));
  check_manifest_coverage(dir);
}

TEST_CASE("gfunction exact at L = 12 agrees with the DMRG oracle and sqrt(2)") {
  const fs::path dir = scratch("gfun");
  const Run r = cli({"--out-dir", dir.string(), "gfunction", "--L", "12", "--mode", "exact"});
  REQUIRE(r.status == 0);
  const Json j = read_json(dir / "gfunction_L12_pbc_exact.json");
  CHECK(j.at("schema") == "gspt.gfunction_result/1");
  const double g = j.at("records")[0].at("result").at("g").get<double>();
  ModelParams p;
  p.L = 12;
  const double oracle = g_dmrg(p, DmrgConfig{}).g;
  CHECK(g == doctest::Approx(oracle).epsilon(1e-6));
  CHECK(std::abs(g - std::sqrt(2.0)) / std::sqrt(2.0) < 0.02);
  const std::string csv = read_text(dir / "gfunction_L12_pbc_exact.csv");
  CHECK(csv.rfind("L,mode,p_cz,g,g_err,raw_overlap\n12,exact,0,", 0) == 0);
  check_manifest_coverage(dir);
}

TEST_CASE("noiseless results are byte-identical across reruns and worker counts") {
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  for (const auto& [dir, workers] : {std::pair{a, "1"}, std::pair{b, "3"}}) {
    REQUIRE(cli({"--out-dir", dir.string(), "--workers", workers, "gfunction", "--L", "8", "--mode", "exact"}).status == 0);
    REQUIRE(cli({"--out-dir", dir.string(), "--workers", workers, "zne", "--L", "6", "--twirls", "3"}).status == 0);
    REQUIRE(cli({"--out-dir", dir.string(), "--workers", workers, "eht", "--L", "8", "--window-size", "3", "--windows",
                 "2", "--settings", "30", "--source", "exact"})
                .status == 0);
  }
  for (const std::string f : {"gfunction_L8_pbc_exact.json", "zne_L6_pbc.json", "zne_L6_pbc.csv",
                              "eht_L8_pbc_n3_exact.json"})
    CHECK_MESSAGE(read_text(a / f) == read_text(b / f), f);
}

TEST_CASE("oracle command caches checkpoints by key") {
  const fs::path dir = scratch("oracle");
  const std::vector<std::string> args{"--out-dir", dir.string(), "oracle", "--L", "8", "--state-index", "1"};
  REQUIRE(cli(args).status == 0);
  const Json first = read_json(dir / "oracle_L8_pbc_s1.json");
  const auto stamp = fs::last_write_time(dir / first.at("checkpoint").get<std::string>());
  REQUIRE(cli(args).status == 0);
  const Json second = read_json(dir / "oracle_L8_pbc_s1.json");
  CHECK(first == second);
  CHECK(fs::last_write_time(dir / second.at("checkpoint").get<std::string>()) == stamp);
  const Json m = read_json(dir / "oracle_L8_pbc_s1.manifest.json");
  CHECK(m.at("oracle_cache").size() == 2);
  CHECK(first.at("energies").size() == 2);
  CHECK(first.at("energies")[0].get<double>() < first.at("energies")[1].get<double>());
  check_manifest_coverage(dir);
}

TEST_CASE("eht --L 16 --window-size 8 --windows 10 gives ten records of eight levels") {
  const fs::path dir = scratch("eht");
  const Run r = cli({"--out-dir", dir.string(), "--set", "eht.restarts=1", "eht", "--L", "16", "--window-size", "8",
                     "--windows", "10", "--settings", "10", "--source", "exact"});
  REQUIRE(r.status == 0);
  const Json j = read_json(dir / "eht_L16_pbc_n8_exact.json");
  REQUIRE(j.at("records").size() == 10);
  for (const auto& rec : j.at("records")) {
    CHECK(rec.at("window").size() == 8);
    CHECK(rec.at("xi").size() == 8);
    CHECK(rec.at("beta").at("x").size() == 8);
  }
}

TEST_CASE("emit-plotdata writes the documented columns and names missing inputs") {
  const fs::path dir = scratch("plot");
  REQUIRE(cli({"--out-dir", dir.string(), "gfunction", "--L", "8", "--mode", "exact"}).status == 0);
  REQUIRE(cli({"--out-dir", dir.string(), "eht", "--L", "8", "--window-size", "3", "--windows", "2", "--settings", "30",
               "--source", "exact"})
              .status == 0);
  Run r = cli({"--out-dir", dir.string(), "emit-plotdata", "--figure", "fig3c"});
  REQUIRE(r.status == 0);
  CHECK(r.out.rfind("L,g,g_err\n8,", 0) == 0);
  r = cli({"--out-dir", dir.string(), "emit-plotdata", "--figure", "fig4c"});
  REQUIRE(r.status == 0);
  CHECK(r.out.rfind("window_size,level_index,xi_mean,xi_std,source\n", 0) == 0);
  CHECK(r.out.find(",eht\n") != std::string::npos);
  CHECK(r.out.find(",oracle\n") != std::string::npos);
  r = cli({"--out-dir", dir.string(), "emit-plotdata", "--figure", "fig2c"});
  CHECK(r.status == 1);
  CHECK(r.err.find("gspt.prep_report/1") != std::string::npos);
  const Json m = read_json(dir / "plotdata_fig2c.manifest.json");
  CHECK(m.at("status") == "incomplete");
  check_manifest_coverage(dir);
}

TEST_CASE("command-line errors") {
  const fs::path dir = scratch("errors");
  const fs::path cfg = dir / "bad.yaml";
  write_text(cfg, "model:\n  L: 8\neht:\n  windows: -3\n");
  Run r = cli({"--config", cfg.string(), "eht"});
  CHECK(r.status == 2);
  CHECK(r.err.find("bad.yaml:4:") != std::string::npos);
  r = cli({"--out-dir", dir.string(), "gfunction", "--L", "9"});
  CHECK(r.status == 1);
  CHECK(read_json(dir / "gfunction_L9_pbc_exact.manifest.json").at("status") == "incomplete");
  r = cli({"frobnicate"});
  CHECK(r.status != 0);
  r = cli({"config-reference"});
  CHECK(r.status == 0);
  CHECK(r.out.find("window_size: 8") != std::string::npos);
  r = cli({"dump-hamiltonian", "--L", "4", "--boundary", "obc"});
  CHECK(r.status == 0);
  CHECK(PauliSum::from_text(4, r.out, true) == build_hamiltonian(ModelParams{4, 1.0, 1.0, 0.0, Boundary::Open}));
}
