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

#include <filesystem>
#include <string>
#include <vector>

#include "gspt/circuit.hpp"
#include "gspt/eht.hpp"
#include "gspt/gfunction.hpp"
#include "gspt/mitigation.hpp"
#include "gspt/model.hpp"
#include "gspt/prep.hpp"
#include "json.hpp"

namespace gspt {

using Json = nlohmann::ordered_json;

/// Every file format carries "schema": "gspt.<kind>/<version>".
std::string schema_tag(const std::string& kind, int version = 1);
/// Throws std::runtime_error unless j["schema"] names `kind` at a supported version.
void check_schema(const Json& j, const std::string& kind);

Json to_json(const ModelParams& p);
ModelParams model_from_json(const Json& j);
Json to_json(const CutConfig& c);

Json to_json(const ParamSchedule& s);
ParamSchedule schedule_from_json(const Json& j);

Json to_json(const Circuit& c);
Circuit circuit_from_json(const Json& j);

Json to_json(const PowerLawFit& f);
PowerLawFit power_law_from_json(const Json& j);

Json to_json(const PrepReport& r);
PrepReport prep_report_from_json(const Json& j);

Json to_json(const GFunctionResult& r);
Json to_json(const EntHamCoeffs& b);
Json to_json(const ZneFit& f);

/// Writes through a temporary file and a rename.
void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const Json& j);
Json read_json(const std::filesystem::path& path);

/// Minimal CSV writer; fields containing separators are quoted.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns);
  CsvTable& row(const std::vector<std::string>& fields);
  std::string str() const;
  std::size_t rows() const { return rows_.size(); }

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

/// Shortest round-trip text for a double.
std::string fmt(double v);

}  // namespace gspt
