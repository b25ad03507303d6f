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
#include <stdexcept>
#include <string>
#include <vector>

#include "gspt/mitigation.hpp"
#include "gspt/model.hpp"

namespace gspt {

struct RunSection {
  std::uint64_t seed = 20240611;
  int workers = 1;
  std::string out_dir = "results";
  int chi_max = 256;
};

struct PrepareSection {
  std::vector<int> fit_sizes{8, 10, 12, 14, 16};
  std::vector<int> check_sizes{18, 20};
  int restarts = 3;
  bool dry_run = false;
  std::string from_report;
};

struct OracleSection {
  int state_index = 0;
  int max_sweeps = 20;
  double energy_tol = 1e-9;
  bool use_cache = true;
};

struct GFunctionSection {
  std::string mode = "exact";  // exact | dmrg | protocol
  std::vector<double> noise{0.0};
  long shots = 0;
  int resamples = 20;
  /// Size of the small chain whose optimum seeds the protocol schedules.
  int base_L = 8;
};

struct EhtSection {
  int window_size = 8;
  int windows = 10;
  int settings = 200;
  long shots = 3000;
  int restarts = 3;
  std::string source = "prepared";  // prepared | ground | exact
};

struct ZneSection {
  std::string observable = "energy";
  std::vector<double> factors{1.0, 1.5, 2.0, 2.5, 3.0};
  int twirls = 25;
  std::string model = "linear";
  double p_cz = 0.01;
  long shots = 0;
  int bootstrap = 100;
};

struct EntropySection {
  std::string method = "dmrg";  // dmrg | exact
};

struct AppConfig {
  ModelParams model{};
  CutConfig cut{};
  RunSection run;
  PrepareSection prepare;
  OracleSection oracle;
  GFunctionSection gfunction;
  EhtSection eht;
  ZneSection zne;
  EntropySection entropy;

  /// Cross-field checks; throws std::invalid_argument.
  void validate() const;
};

/// Error anchored to a line and column of the config text (1-based, 0 when
/// the location is unknown).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string source, int line, int column, const std::string& message);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_, column_;
};

/// Overlays a YAML document on `base`. Unknown sections or keys and values of
/// the wrong type are errors.
AppConfig parse_config(const std::string& text, const std::string& source = "<config>", AppConfig base = {});
AppConfig load_config(const std::string& path, AppConfig base = {});

/// Applies a single "section.key=value" override (value in YAML syntax).
void apply_override(AppConfig& cfg, const std::string& assignment);

/// YAML text listing every key with its default and a one-line description.
std::string config_reference();

struct ConfigKeyInfo {
  std::string section, key, default_value, doc;
};
std::vector<ConfigKeyInfo> config_keys();

}  // namespace gspt
