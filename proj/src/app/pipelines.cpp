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

#include <atomic>
#include <chrono>
#include <ctime>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "gspt/app.hpp"
#include "gspt/model.hpp"

namespace gspt {

void parallel_for(int n, int workers, const std::function<void(int)>& body) {
  if (n <= 0) return;
  const int threads = std::max(1, std::min(workers, n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first;
  std::mutex guard;
  auto worker = [&] {
    for (int i = next++; i < n; i = next++) {
      {
        std::lock_guard lock(guard);
        if (first) return;
      }
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(guard);
        if (!first) first = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first) std::rethrow_exception(first);
}

namespace {

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

Manifest::Manifest(std::string command, std::string tag, const AppConfig& cfg)
    : command_(std::move(command)), tag_(std::move(tag)), started_(utc_now()), seed_(cfg.run.seed) {
  Json j = Json::object();
  j["model"] = gspt::to_json(cfg.model);
  j["model"]["cut_a"] = to_string(cfg.cut.a);
  j["model"]["cut_b"] = to_string(cfg.cut.b);
  j["run"] = {{"seed", cfg.run.seed}, {"workers", cfg.run.workers}, {"out_dir", cfg.run.out_dir},
              {"chi_max", cfg.run.chi_max}};
  j["prepare"] = {{"fit_sizes", cfg.prepare.fit_sizes}, {"check_sizes", cfg.prepare.check_sizes},
                  {"restarts", cfg.prepare.restarts},   {"dry_run", cfg.prepare.dry_run},
                  {"from_report", cfg.prepare.from_report}};
  j["oracle"] = {{"state_index", cfg.oracle.state_index}, {"max_sweeps", cfg.oracle.max_sweeps},
                 {"energy_tol", cfg.oracle.energy_tol}, {"use_cache", cfg.oracle.use_cache}};
  j["gfunction"] = {{"mode", cfg.gfunction.mode},
                    {"noise", cfg.gfunction.noise},
                    {"shots", cfg.gfunction.shots},
                    {"resamples", cfg.gfunction.resamples},
                    {"base_L", cfg.gfunction.base_L}};
  j["eht"] = {{"window_size", cfg.eht.window_size}, {"windows", cfg.eht.windows}, {"settings", cfg.eht.settings},
              {"shots", cfg.eht.shots},             {"restarts", cfg.eht.restarts}, {"source", cfg.eht.source}};
  j["zne"] = {{"observable", cfg.zne.observable}, {"factors", cfg.zne.factors}, {"twirls", cfg.zne.twirls},
              {"model", cfg.zne.model},           {"p_cz", cfg.zne.p_cz},       {"shots", cfg.zne.shots},
              {"bootstrap", cfg.zne.bootstrap}};
  j["entropy"] = {{"method", cfg.entropy.method}};
  config_ = std::move(j);
}

void Manifest::add_output(const std::string& relative_path) {
  for (const auto& o : outputs_)
    if (o == relative_path) return;
  outputs_.push_back(relative_path);
}

void Manifest::add_cache_key(const std::string& key, const std::string& relative_path) {
  cache_.push_back(Json{{"key", key}, {"path", relative_path}});
}

void Manifest::stage(const std::string& name, const std::string& status, const std::string& error) {
  Json s{{"name", name}, {"status", status}, {"finished_at", utc_now()}};
  if (!error.empty()) s["error"] = error;
  stages_.push_back(std::move(s));
}

bool Manifest::complete() const {
  for (const auto& s : stages_)
    if (s.at("status") != "complete") return false;
  return true;
}

Json Manifest::to_json() const {
  return Json{{"schema", schema_tag("manifest")},
              {"command", command_},
              {"tag", tag_},
              {"code_version", GSPT_VERSION},
              {"seed", seed_},
              {"started_at", started_},
              {"finished_at", utc_now()},
              {"status", complete() ? "complete" : "incomplete"},
              {"config", config_},
              {"stages", stages_},
              {"outputs", outputs_},
              {"oracle_cache", cache_}};
}

std::string Manifest::write(const std::filesystem::path& out_dir) {
  const std::string name = tag_ + ".manifest.json";
  write_json(out_dir / name, to_json());
  return name;
}

std::string hash_key(const Json& j) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : j.dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json oracle_cache_inputs(const ModelParams& p, const CutConfig& cut, int state_index, const DmrgConfig& d) {
  return Json{{"model", to_json(p)},
              {"cut", to_json(cut)},
              {"state_index", state_index},
              {"chi_max", d.chi_max},
              {"sweeps", Json{{"max_sweeps", d.max_sweeps},
                              {"min_sweeps", d.min_sweeps},
                              {"energy_tol", d.energy_tol},
                              {"penalty", d.penalty},
                              {"svd_cutoff", d.svd_cutoff},
                              {"chi_start", d.chi_start},
                              {"seed", d.seed}}}};
}

OracleStates oracle_states(const ModelParams& p, const CutConfig& cut, int count, const DmrgConfig& d,
                           const std::filesystem::path& cache_dir, bool use_cache) {
  const PauliSum h = cut.any() ? build_cut_hamiltonian(p, cut).hamiltonian : build_hamiltonian(p);
  OracleStates out;
  std::vector<Mps> lower;
  for (int k = 0; k < count; ++k) {
    const Json inputs = oracle_cache_inputs(p, cut, k, d);
    const std::string key = hash_key(inputs);
    const auto mps_path = cache_dir / (key + ".mps");
    const auto meta_path = cache_dir / (key + ".json");
    DmrgResult r;
    bool hit = false;
    if (use_cache && std::filesystem::exists(mps_path) && std::filesystem::exists(meta_path)) {
      const Json meta = read_json(meta_path);
      check_schema(meta, "oracle_cache");
      if (meta.at("inputs") == inputs) {
        std::ifstream is(mps_path, std::ios::binary);
        r.state = Mps::load(is);
        r.energy = meta.at("energy").get<double>();
        r.converged = meta.at("converged").get<bool>();
        r.sweeps = meta.at("sweeps").get<int>();
        r.sweep_energies = meta.at("sweep_energies").get<std::vector<double>>();
        r.max_truncation = meta.at("max_truncation").get<double>();
        hit = true;
      }
    }
    if (!hit) {
      r = dmrg(h, lower, d);
      std::filesystem::create_directories(cache_dir);
      std::ostringstream os(std::ios::binary);
      r.state.save(os);
      write_text(mps_path, os.str());
      write_json(meta_path, Json{{"schema", schema_tag("oracle_cache")},
                                 {"key", key},
                                 {"inputs", inputs},
                                 {"energy", r.energy},
                                 {"converged", r.converged},
                                 {"sweeps", r.sweeps},
                                 {"sweep_energies", r.sweep_energies},
                                 {"max_truncation", r.max_truncation}});
    }
    lower.push_back(r.state);
    out.states.push_back(std::move(r));
    out.keys.push_back(key);
    out.from_cache.push_back(hit);
  }
  return out;
}

}  // namespace gspt
