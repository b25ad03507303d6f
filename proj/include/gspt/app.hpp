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
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "gspt/config.hpp"
#include "gspt/dmrg.hpp"
#include "gspt/io.hpp"

namespace gspt {

/// Runs body(0..n-1) on up to `workers` threads. The first exception is
/// rethrown after all threads have stopped.
void parallel_for(int n, int workers, const std::function<void(int)>& body);

/// Bookkeeping for one command invocation. Result files carry no timestamps;
/// the manifest does.
class Manifest {
 public:
  Manifest(std::string command, std::string tag, const AppConfig& cfg);

  /// Registers a path relative to the output directory.
  void add_output(const std::string& relative_path);
  void add_cache_key(const std::string& key, const std::string& relative_path);
  void stage(const std::string& name, const std::string& status, const std::string& error = "");
  bool complete() const;
  const std::string& tag() const { return tag_; }
  const std::vector<std::string>& outputs() const { return outputs_; }

  Json to_json() const;
  /// Writes <out_dir>/<tag>.manifest.json.
  std::string write(const std::filesystem::path& out_dir);

 private:
  std::string command_, tag_, started_;
  Json config_;
  std::uint64_t seed_;
  std::vector<std::string> outputs_;
  Json stages_ = Json::array();
  Json cache_ = Json::array();
};

/// FNV-1a of a canonical JSON text, as 16 hex digits.
std::string hash_key(const Json& j);

/// Oracle-cache key: model, cut, state index, bond cap and sweep settings.
Json oracle_cache_inputs(const ModelParams& p, const CutConfig& cut, int state_index, const DmrgConfig& d);

struct OracleStates {
  std::vector<DmrgResult> states;
  std::vector<std::string> keys;
  std::vector<bool> from_cache;
};

/// Lowest `count` eigenstates by DMRG, each cached under <cache_dir>/<key>.mps.
OracleStates oracle_states(const ModelParams& p, const CutConfig& cut, int count, const DmrgConfig& d,
                           const std::filesystem::path& cache_dir, bool use_cache);

/// The gspt command line. Returns the process exit status.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gspt
