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

#include "gspt/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gspt {

std::string schema_tag(const std::string& kind, int version) { return "gspt." + kind + "/" + std::to_string(version); }

void check_schema(const Json& j, const std::string& kind) {
  if (!j.is_object() || !j.contains("schema")) throw std::runtime_error("missing schema field (expected " + kind + ")");
  const std::string s = j.at("schema").get<std::string>();
  if (s != schema_tag(kind)) throw std::runtime_error("unsupported schema '" + s + "' (expected " + schema_tag(kind) + ")");
}

Json to_json(const ModelParams& p) {
  return Json{{"L", p.L}, {"J", p.J}, {"g", p.g}, {"h", p.h}, {"boundary", to_string(p.boundary)}};
}

ModelParams model_from_json(const Json& j) {
  ModelParams p;
  p.L = j.at("L").get<int>();
  p.J = j.value("J", 1.0);
  p.g = j.value("g", 1.0);
  p.h = j.value("h", 0.0);
  p.boundary = boundary_from_string(j.value("boundary", std::string("pbc")));
  p.validate();
  return p;
}

Json to_json(const CutConfig& c) { return Json{{"a", to_string(c.a)}, {"b", to_string(c.b)}}; }

Json to_json(const ParamSchedule& s) {
  Json blocks = Json::array();
  for (const auto& b : s.blocks) blocks.push_back(Json{{"a", b.a}, {"b", b.b}, {"c", b.c}});
  return Json{{"mode", s.mode == ScheduleMode::Uniform ? "uniform" : "power_law"}, {"blocks", blocks}};
}

ParamSchedule schedule_from_json(const Json& j) {
  ParamSchedule s;
  const std::string mode = j.at("mode").get<std::string>();
  if (mode == "uniform") {
    s.mode = ScheduleMode::Uniform;
  } else if (mode == "power_law") {
    s.mode = ScheduleMode::PowerLaw;
  } else {
    throw std::runtime_error("unknown schedule mode '" + mode + "'");
  }
  const auto& blocks = j.at("blocks");
  if (blocks.size() != kNumBlocks) throw std::runtime_error("schedule needs five blocks");
  for (int k = 0; k < kNumBlocks; ++k)
    s.blocks[k] = {blocks[k].at("a").get<double>(), blocks[k].at("b").get<double>(), blocks[k].at("c").get<double>()};
  s.validate();
  return s;
}

Json to_json(const Circuit& c) {
  Json layers = Json::array();
  for (const auto& l : c.layers()) {
    if (const auto* y = std::get_if<YLayer>(&l)) {
      layers.push_back(Json{{"type", "Y"}, {"angles", y->angles}});
    } else if (const auto* cz = std::get_if<CZLayer>(&l)) {
      Json pairs = Json::array();
      for (const auto& [a, b] : cz->pairs) pairs.push_back(Json::array({a, b}));
      layers.push_back(Json{{"type", "CZ"}, {"pairs", pairs}});
    } else {
      std::string ops;
      for (auto p : std::get<PauliLayer>(l).ops) ops += to_char(p);
      layers.push_back(Json{{"type", "P"}, {"ops", ops}});
    }
  }
  return Json{{"schema", schema_tag("circuit")},
              {"num_sites", c.num_sites()},
              {"boundary", to_string(c.boundary())},
              {"y_layers", c.count_y_layers()},
              {"cz_layers", c.count_cz_layers()},
              {"cz_gates", c.count_cz_gates()},
              {"layers", layers}};
}

Circuit circuit_from_json(const Json& j) {
  check_schema(j, "circuit");
  std::vector<Layer> layers;
  for (const auto& l : j.at("layers")) {
    const std::string type = l.at("type").get<std::string>();
    if (type == "Y") {
      layers.emplace_back(YLayer{l.at("angles").get<std::vector<double>>()});
    } else if (type == "CZ") {
      CZLayer cz;
      for (const auto& p : l.at("pairs")) cz.pairs.emplace_back(p.at(0).get<int>(), p.at(1).get<int>());
      layers.emplace_back(std::move(cz));
    } else if (type == "P") {
      PauliLayer p;
      for (char ch : l.at("ops").get<std::string>()) p.ops.push_back(pauli_from_char(ch));
      layers.emplace_back(std::move(p));
    } else {
      throw std::runtime_error("unknown layer type '" + type + "'");
    }
  }
  return Circuit(j.at("num_sites").get<int>(), boundary_from_string(j.at("boundary").get<std::string>()),
                 std::move(layers));
}

Json to_json(const PowerLawFit& f) {
  return Json{{"a", f.a}, {"b", f.b}, {"c", f.c}, {"d", f.d}, {"rms", f.rms}};
}

PowerLawFit power_law_from_json(const Json& j) {
  PowerLawFit f;
  f.a = j.at("a").get<double>();
  f.b = j.at("b").get<double>();
  f.c = j.at("c").get<double>();
  f.d = j.at("d").get<double>();
  f.rms = j.value("rms", 0.0);
  return f;
}

Json to_json(const PrepReport& r) {
  Json points = Json::array();
  for (const auto& p : r.points)
    points.push_back(Json{{"L", p.L},
                          {"extrapolated", p.extrapolated},
                          {"loss", p.loss},
                          {"weight", p.weight},
                          {"level_weights", p.level_weights},
                          {"epsilon_E", p.epsilon_energy},
                          {"schedule", to_json(p.schedule)},
                          {"trace", p.trace}});
  Json fits = Json::array();
  for (const auto& f : r.generator.fits) fits.push_back(to_json(f));
  return Json{{"schema", schema_tag("prep_report")},
              {"boundary", to_string(r.boundary)},
              {"energy_phase",
               Json{{"schedule", to_json(r.energy_phase.schedule)},
                    {"loss", r.energy_phase.loss},
                    {"converged", r.energy_phase.converged},
                    {"evaluations", r.energy_phase.evaluations},
                    {"trace", r.energy_phase.trace}}},
              {"points", points},
              {"generator", Json{{"base", to_json(r.generator.base)}, {"sizes", r.generator.sizes}, {"fits", fits}}}};
}

PrepReport prep_report_from_json(const Json& j) {
  check_schema(j, "prep_report");
  PrepReport r;
  r.boundary = boundary_from_string(j.at("boundary").get<std::string>());
  const auto& e = j.at("energy_phase");
  r.energy_phase.schedule = schedule_from_json(e.at("schedule"));
  r.energy_phase.loss = e.at("loss").get<double>();
  r.energy_phase.converged = e.value("converged", false);
  r.energy_phase.trace = e.value("trace", std::vector<double>{});
  for (const auto& p : j.at("points")) {
    PrepPoint q;
    q.L = p.at("L").get<int>();
    q.extrapolated = p.at("extrapolated").get<bool>();
    q.loss = p.at("loss").get<double>();
    q.weight = p.at("weight").get<double>();
    q.level_weights = p.value("level_weights", std::vector<double>{});
    q.epsilon_energy = p.at("epsilon_E").get<double>();
    q.schedule = schedule_from_json(p.at("schedule"));
    q.trace = p.value("trace", std::vector<double>{});
    r.points.push_back(std::move(q));
  }
  const auto& g = j.at("generator");
  r.generator.boundary = r.boundary;
  r.generator.base = schedule_from_json(g.at("base"));
  r.generator.sizes = g.at("sizes").get<std::vector<int>>();
  const auto& fits = g.at("fits");
  if (fits.size() != kNumBlocks) throw std::runtime_error("generator needs five fits");
  for (int k = 0; k < kNumBlocks; ++k) r.generator.fits[k] = power_law_from_json(fits[k]);
  return r;
}

Json to_json(const GFunctionResult& r) {
  Json terms = Json::array();
  for (const auto& t : r.terms)
    terms.push_back(Json{{"pin", to_string(t.pin)},
                         {"plain", t.plain},
                         {"flipped", t.flipped},
                         {"projected", t.projected},
                         {"denominator", t.denominator},
                         {"contribution", t.contribution}});
  return Json{{"g", r.g},         {"g_err", r.g_err},           {"projector_norm", r.projector_norm},
              {"valid", r.valid}, {"diagnostic", r.diagnostic}, {"sign_source", r.sign_source},
              {"terms", terms}};
}

Json to_json(const EntHamCoeffs& b) { return Json{{"zz", b.zz}, {"zxz", b.zxz}, {"x", b.x}}; }

Json to_json(const ZneFit& f) {
  return Json{{"model", to_string(f.model)},
              {"value", f.value},
              {"sigma", f.sigma},
              {"coeffs", std::vector<double>(f.coeffs.data(), f.coeffs.data() + f.coeffs.size())},
              {"warning", f.warning}};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + tmp.string());
    os << text;
    if (!os) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void write_json(const std::filesystem::path& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

Json read_json(const std::filesystem::path& path) {
  try {
    return Json::parse(read_text(path));
  } catch (const Json::parse_error& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

CsvTable& CsvTable::row(const std::vector<std::string>& fields) {
  if (fields.size() != columns_.size()) throw std::invalid_argument("CSV row width differs from header");
  rows_.push_back(fields);
  return *this;
}

std::string CsvTable::str() const {
  auto quote = [](const std::string& f) {
    if (f.find_first_of(",\"\n") == std::string::npos) return f;
    std::string q = "\"";
    for (char ch : f) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
  };
  std::string out;
  for (std::size_t k = 0; k < columns_.size(); ++k) out += (k ? "," : "") + quote(columns_[k]);
  out += "\n";
  for (const auto& r : rows_) {
    for (std::size_t k = 0; k < r.size(); ++k) out += (k ? "," : "") + quote(r[k]);
    out += "\n";
  }
  return out;
}

std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace gspt
