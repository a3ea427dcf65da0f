// Copyright 2026 The appa-ed Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "appa/problem_io.hpp"

#include <fstream>
#include <sstream>

#include "appa/errors.hpp"
#include "json.hpp"

namespace appa::dispatch {

namespace {

using nlohmann::json;

std::string line_col(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

double number_field(const json& obj, const char* key, const std::string& path,
                    std::string_view source) {
  const auto it = obj.find(key);
  if (it == obj.end()) {
    throw ParseError(std::string(source) + ": missing field '" + path + key + "'");
  }
  if (!it->is_number()) {
    throw ParseError(std::string(source) + ": field '" + path + key +
                     "' must be a number");
  }
  return it->get<double>();
}

}  // namespace

DispatchProblem parse_problem(std::string_view text, std::string_view source) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // nlohmann reports the byte just past the offending token.
    const std::size_t byte = e.byte > 0 ? e.byte - 1 : 0;
    throw ParseError(std::string(source) + ": " + line_col(text, byte) +
                     ": malformed JSON");
  }
  if (!doc.is_object()) {
    throw ParseError(std::string(source) + ": top level must be an object");
  }
  const double demand = number_field(doc, "demand_mw", "", source);

  const auto units_it = doc.find("units");
  if (units_it == doc.end()) throw ParseError(std::string(source) + ": missing field 'units'");
  if (!units_it->is_array()) {
    throw ParseError(std::string(source) + ": field 'units' must be an array");
  }

  std::vector<GeneratorUnit> units;
  for (std::size_t i = 0; i < units_it->size(); ++i) {
    const json& u = (*units_it)[i];
    const std::string path = "units[" + std::to_string(i) + "].";
    if (!u.is_object()) {
      throw ParseError(std::string(source) + ": field 'units[" + std::to_string(i) +
                       "]' must be an object");
    }
    units.push_back(GeneratorUnit{number_field(u, "quad", path, source),
                                  number_field(u, "lin", path, source),
                                  number_field(u, "fixed", path, source),
                                  number_field(u, "p_min", path, source),
                                  number_field(u, "p_max", path, source)});
  }
  return DispatchProblem(std::move(units), demand);
}

DispatchProblem load_problem(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string() + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_problem(buf.str(), path.string());
}

std::string write_problem(const DispatchProblem& problem) {
  nlohmann::ordered_json doc;
  doc["demand_mw"] = problem.demand();
  doc["units"] = nlohmann::ordered_json::array();
  for (const auto& u : problem.units()) {
    nlohmann::ordered_json j;
    j["quad"] = u.quad;
    j["lin"] = u.lin;
    j["fixed"] = u.fixed;
    j["p_min"] = u.p_min;
    j["p_max"] = u.p_max;
    doc["units"].push_back(std::move(j));
  }
  return doc.dump(2) + "\n";
}

void save_problem(const DispatchProblem& problem, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError(path.string() + ": cannot open file for writing");
  out << write_problem(problem);
}

}  // namespace appa::dispatch
