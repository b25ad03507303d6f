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

#include "gspt/config.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <functional>
#include <sstream>

namespace gspt {

ConfigError::ConfigError(std::string source, int line, int column, const std::string& message)
    : std::runtime_error(line > 0 ? source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + message
                                  : source + ": " + message),
      line_(line),
      column_(column) {}

namespace {

struct Entry {
  std::string section, key, doc;
  std::function<void(const YAML::Node&, AppConfig&)> set;
  std::function<std::string(const AppConfig&)> show;
};

template <class T>
std::string yaml_text(const T& v) {
  YAML::Emitter e;
  e << YAML::Flow << v;
  return e.c_str();
}

template <class T>
T convert(const YAML::Node& n) {
  if (!n.IsScalar() && !std::is_same_v<T, std::vector<int>> && !std::is_same_v<T, std::vector<double>>)
    throw std::invalid_argument("expected a scalar");
  return n.as<T>();
}

const char* type_name(const int*) { return "an integer"; }
const char* type_name(const long*) { return "an integer"; }
const char* type_name(const std::uint64_t*) { return "a non-negative integer"; }
const char* type_name(const double*) { return "a number"; }
const char* type_name(const bool*) { return "true or false"; }
const char* type_name(const std::string*) { return "a string"; }
const char* type_name(const std::vector<int>*) { return "a list of integers"; }
const char* type_name(const std::vector<double>*) { return "a list of numbers"; }

template <class T>
Entry field(std::string section, std::string key, std::string doc, T& (*ref)(AppConfig&),
            std::function<void(const T&)> check = {}) {
  Entry e{std::move(section), std::move(key), std::move(doc), {}, {}};
  e.set = [ref, check](const YAML::Node& n, AppConfig& c) {
    T v;
    try {
      v = convert<T>(n);
    } catch (const YAML::Exception&) {
      throw std::invalid_argument(std::string("expected ") + type_name(static_cast<const T*>(nullptr)));
    }
    if (check) check(v);
    ref(c) = std::move(v);
  };
  e.show = [ref](const AppConfig& c) { return yaml_text(ref(const_cast<AppConfig&>(c))); };
  return e;
}

std::function<void(const int&)> at_least(int lo) {
  return [lo](const int& v) {
    if (v < lo) throw std::invalid_argument("must be at least " + std::to_string(lo));
  };
}

std::function<void(const long&)> non_negative_long() {
  return [](const long& v) {
    if (v < 0) throw std::invalid_argument("must be non-negative");
  };
}

std::function<void(const std::string&)> one_of(std::vector<std::string> options) {
  return [options](const std::string& v) {
    for (const auto& o : options)
      if (o == v) return;
    std::string list;
    for (const auto& o : options) list += (list.empty() ? "" : ", ") + o;
    throw std::invalid_argument("'" + v + "' is not one of " + list);
  };
}

std::function<void(const double&)> probability() {
  return [](const double& v) {
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("must lie in [0, 1]");
  };
}

Entry string_enum(std::string section, std::string key, std::string doc, std::function<void(AppConfig&, const std::string&)> set,
                  std::function<std::string(const AppConfig&)> show) {
  Entry e{std::move(section), std::move(key), std::move(doc), {}, {}};
  e.set = [set](const YAML::Node& n, AppConfig& c) {
    if (!n.IsScalar()) throw std::invalid_argument("expected a string");
    set(c, n.as<std::string>());
  };
  e.show = std::move(show);
  return e;
}

const std::vector<Entry>& registry() {
  static const std::vector<Entry> entries = [] {
    std::vector<Entry> r;
    // model
    r.push_back(field<int>("model", "L", "number of sites", +[](AppConfig& c) -> int& { return c.model.L; },
                           [](const int& v) {
                             if (v < 3 || v > 64) throw std::invalid_argument("must lie in [3, 64]");
                           }));
    r.push_back(field<double>("model", "J", "ZXZ coupling", +[](AppConfig& c) -> double& { return c.model.J; }));
    r.push_back(field<double>("model", "g", "ZZ coupling", +[](AppConfig& c) -> double& { return c.model.g; }));
    r.push_back(field<double>("model", "h", "transverse field", +[](AppConfig& c) -> double& { return c.model.h; }));
    r.push_back(string_enum(
        "model", "boundary", "obc or pbc",
        [](AppConfig& c, const std::string& s) { c.model.boundary = boundary_from_string(s); },
        [](const AppConfig& c) { return to_string(c.model.boundary); }));
    r.push_back(string_enum(
        "model", "cut_a", "cut at bond (L-1, 0): none, up, down or free",
        [](AppConfig& c, const std::string& s) { c.cut.a = cut_from_string(s); },
        [](const AppConfig& c) { return to_string(c.cut.a); }));
    r.push_back(string_enum(
        "model", "cut_b", "cut at bond (L/2-1, L/2)",
        [](AppConfig& c, const std::string& s) { c.cut.b = cut_from_string(s); },
        [](const AppConfig& c) { return to_string(c.cut.b); }));
    // run
    r.push_back(field<std::uint64_t>("run", "seed", "master seed; every stochastic stage derives its own stream",
                                     +[](AppConfig& c) -> std::uint64_t& { return c.run.seed; }));
    r.push_back(field<int>("run", "workers", "worker threads for independent jobs",
                           +[](AppConfig& c) -> int& { return c.run.workers; }, at_least(1)));
    r.push_back(field<std::string>("run", "out_dir", "output directory",
                                   +[](AppConfig& c) -> std::string& { return c.run.out_dir; }));
    r.push_back(field<int>("run", "chi_max", "MPS bond dimension cap",
                           +[](AppConfig& c) -> int& { return c.run.chi_max; }, at_least(2)));
    // prepare
    r.push_back(field<std::vector<int>>("prepare", "fit_sizes", "chain lengths optimized and fitted",
                                        +[](AppConfig& c) -> std::vector<int>& { return c.prepare.fit_sizes; }));
    r.push_back(field<std::vector<int>>("prepare", "check_sizes", "chain lengths evaluated with extrapolated schedules",
                                        +[](AppConfig& c) -> std::vector<int>& { return c.prepare.check_sizes; }));
    r.push_back(field<int>("prepare", "restarts", "energy-phase restarts",
                           +[](AppConfig& c) -> int& { return c.prepare.restarts; }, at_least(1)));
    r.push_back(field<bool>("prepare", "dry_run", "emit the circuit only, no optimization or simulation",
                            +[](AppConfig& c) -> bool& { return c.prepare.dry_run; }));
    r.push_back(field<std::string>("prepare", "from_report", "reuse the schedules of an existing prep report",
                                   +[](AppConfig& c) -> std::string& { return c.prepare.from_report; }));
    // oracle
    r.push_back(field<int>("oracle", "state_index", "0 for the ground state, 1 for the first excited state",
                           +[](AppConfig& c) -> int& { return c.oracle.state_index; }, at_least(0)));
    r.push_back(field<int>("oracle", "max_sweeps", "DMRG sweep limit",
                           +[](AppConfig& c) -> int& { return c.oracle.max_sweeps; }, at_least(1)));
    r.push_back(field<double>("oracle", "energy_tol", "DMRG energy convergence threshold",
                              +[](AppConfig& c) -> double& { return c.oracle.energy_tol; }));
    r.push_back(field<bool>("oracle", "use_cache", "reuse cached MPS checkpoints",
                            +[](AppConfig& c) -> bool& { return c.oracle.use_cache; }));
    // gfunction
    r.push_back(field<std::string>("gfunction", "mode", "exact, dmrg or protocol",
                                   +[](AppConfig& c) -> std::string& { return c.gfunction.mode; },
                                   one_of({"exact", "dmrg", "protocol"})));
    r.push_back(field<std::vector<double>>("gfunction", "noise", "CZ depolarizing rates (protocol mode)",
                                           +[](AppConfig& c) -> std::vector<double>& { return c.gfunction.noise; },
                                           [](const std::vector<double>& v) {
                                             for (double p : v) probability()(p);
                                           }));
    r.push_back(field<long>("gfunction", "shots", "shots per overlap circuit, 0 for exact probabilities",
                            +[](AppConfig& c) -> long& { return c.gfunction.shots; }, non_negative_long()));
    r.push_back(field<int>("gfunction", "resamples", "shot resamples for g_err",
                           +[](AppConfig& c) -> int& { return c.gfunction.resamples; }, at_least(0)));
    r.push_back(field<int>("gfunction", "base_L", "chain length of the energy phase seeding the protocol schedules",
                           +[](AppConfig& c) -> int& { return c.gfunction.base_L; }, at_least(4)));
    // eht
    r.push_back(field<int>("eht", "window_size", "sites per window (2..12)",
                           +[](AppConfig& c) -> int& { return c.eht.window_size; }, [](const int& v) {
                             if (v < 2 || v > 12) throw std::invalid_argument("must lie in [2, 12]");
                           }));
    r.push_back(field<int>("eht", "windows", "number of windows spread over the ring",
                           +[](AppConfig& c) -> int& { return c.eht.windows; }, at_least(1)));
    r.push_back(field<int>("eht", "settings", "random measurement bases",
                           +[](AppConfig& c) -> int& { return c.eht.settings; }, at_least(1)));
    r.push_back(field<long>("eht", "shots", "shots per basis, 0 for exact probabilities",
                            +[](AppConfig& c) -> long& { return c.eht.shots; }, non_negative_long()));
    r.push_back(field<int>("eht", "restarts", "fit restarts per window",
                           +[](AppConfig& c) -> int& { return c.eht.restarts; }, at_least(1)));
    r.push_back(field<std::string>("eht", "source", "measured state: prepared, ground or exact",
                                   +[](AppConfig& c) -> std::string& { return c.eht.source; },
                                   one_of({"prepared", "ground", "exact"})));
    // zne
    r.push_back(field<std::string>("zne", "observable", "energy",
                                   +[](AppConfig& c) -> std::string& { return c.zne.observable; }, one_of({"energy"})));
    r.push_back(field<std::vector<double>>("zne", "factors", "noise scale factors",
                                           +[](AppConfig& c) -> std::vector<double>& { return c.zne.factors; },
                                           [](const std::vector<double>& v) {
                                             for (double f : v)
                                               if (!(f >= 1.0)) throw std::invalid_argument("factors must be >= 1");
                                           }));
    r.push_back(field<int>("zne", "twirls", "Pauli twirls per factor",
                           +[](AppConfig& c) -> int& { return c.zne.twirls; }, at_least(1)));
    r.push_back(field<std::string>("zne", "model", "linear or exponential",
                                   +[](AppConfig& c) -> std::string& { return c.zne.model; },
                                   one_of({"linear", "exponential"})));
    r.push_back(field<double>("zne", "p_cz", "CZ depolarizing rate of the simulated device",
                              +[](AppConfig& c) -> double& { return c.zne.p_cz; }, probability()));
    r.push_back(field<long>("zne", "shots", "shots per setting, 0 for exact expectations",
                            +[](AppConfig& c) -> long& { return c.zne.shots; }, non_negative_long()));
    r.push_back(field<int>("zne", "bootstrap", "bootstrap resamples (shot mode)",
                           +[](AppConfig& c) -> int& { return c.zne.bootstrap; }, at_least(0)));
    // entropy
    r.push_back(field<std::string>("entropy", "method", "dmrg or exact",
                                   +[](AppConfig& c) -> std::string& { return c.entropy.method; },
                                   one_of({"dmrg", "exact"})));
    return r;
  }();
  return entries;
}

const Entry* find_entry(const std::string& section, const std::string& key) {
  for (const auto& e : registry())
    if (e.section == section && e.key == key) return &e;
  return nullptr;
}

bool known_section(const std::string& s) {
  for (const auto& e : registry())
    if (e.section == s) return true;
  return false;
}

int line_of(const YAML::Node& n) { return n.Mark().is_null() ? 0 : n.Mark().line + 1; }
int col_of(const YAML::Node& n) { return n.Mark().is_null() ? 0 : n.Mark().column + 1; }

}  // namespace

void AppConfig::validate() const {
  model.validate();
  if (cut.any() && model.boundary != Boundary::Periodic) throw std::invalid_argument("cuts need boundary pbc");
  if (cut.b != CutKind::None && model.L % 2 != 0) throw std::invalid_argument("cut_b needs even L");
  if (zne.factors.empty()) throw std::invalid_argument("zne.factors is empty");
  if (gfunction.noise.empty()) throw std::invalid_argument("gfunction.noise is empty");
  if (prepare.fit_sizes.size() < 4) throw std::invalid_argument("prepare.fit_sizes needs at least four sizes");
}

AppConfig parse_config(const std::string& text, const std::string& source, AppConfig base) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(source, e.mark.line + 1, e.mark.column + 1, e.msg);
  }
  if (root.IsNull()) return base;
  if (!root.IsMap()) throw ConfigError(source, line_of(root), col_of(root), "top level must be a mapping of sections");
  for (const auto& sec : root) {
    const std::string name = sec.first.as<std::string>();
    if (!known_section(name)) throw ConfigError(source, line_of(sec.first), col_of(sec.first), "unknown section '" + name + "'");
    if (sec.second.IsNull()) continue;
    if (!sec.second.IsMap())
      throw ConfigError(source, line_of(sec.second), col_of(sec.second), "section '" + name + "' must be a mapping");
    for (const auto& kv : sec.second) {
      const std::string key = kv.first.as<std::string>();
      const Entry* e = find_entry(name, key);
      if (!e) throw ConfigError(source, line_of(kv.first), col_of(kv.first), "unknown key '" + name + "." + key + "'");
      try {
        e->set(kv.second, base);
      } catch (const std::exception& ex) {
        throw ConfigError(source, line_of(kv.second), col_of(kv.second), name + "." + key + ": " + ex.what());
      }
    }
  }
  try {
    base.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(source, 0, 0, e.what());
  }
  return base;
}

AppConfig load_config(const std::string& path, AppConfig base) {
  std::ifstream is(path);
  if (!is) throw ConfigError(path, 0, 0, "cannot open config file");
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str(), path, std::move(base));
}

void apply_override(AppConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  const auto dot = assignment.find('.');
  if (eq == std::string::npos || dot == std::string::npos || dot > eq)
    throw ConfigError("<override>", 0, 0, "expected section.key=value, got '" + assignment + "'");
  const std::string section = assignment.substr(0, dot);
  const std::string key = assignment.substr(dot + 1, eq - dot - 1);
  const Entry* e = find_entry(section, key);
  if (!e) throw ConfigError("<override>", 0, 0, "unknown key '" + section + "." + key + "'");
  try {
    e->set(YAML::Load(assignment.substr(eq + 1)), cfg);
  } catch (const std::exception& ex) {
    throw ConfigError("<override>", 0, 0, section + "." + key + ": " + ex.what());
  }
}

std::vector<ConfigKeyInfo> config_keys() {
  const AppConfig defaults;
  std::vector<ConfigKeyInfo> out;
  for (const auto& e : registry()) out.push_back({e.section, e.key, e.show(defaults), e.doc});
  return out;
}

std::string config_reference() {
  std::string out = "# gspt configuration reference. Every key is optional; shown values are defaults.\n";
  std::string current;
  for (const auto& k : config_keys()) {
    if (k.section != current) {
      out += "\n" + k.section + ":\n";
      current = k.section;
    }
    out += "  " + k.key + ": " + k.default_value + "  # " + k.doc + "\n";
  }
  return out;
}

}  // namespace gspt
