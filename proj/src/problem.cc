/*
 * Copyright 2026 The pragmatune Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "pragmatune/problem.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "pragmatune/corpus.h"
#include "pragmatune/error.h"
#include "pragmatune/templater.h"

namespace pragmatune {
namespace {

using nlohmann::json;

std::optional<std::string> string_field(const json& doc, const char* key,
                                        std::vector<std::string>& errors,
                                        bool required = true) {
  if (!doc.contains(key)) {
    if (required) errors.push_back(std::string("missing field '") + key + "'");
    return std::nullopt;
  }
  if (!doc[key].is_string()) {
    errors.push_back(std::string("field '") + key + "' must be a string");
    return std::nullopt;
  }
  return doc[key].get<std::string>();
}

}  // namespace

ProblemCheck check_problem(const std::filesystem::path& path) {
  ProblemCheck check;
  auto& errors = check.errors;

  std::ifstream in(path, std::ios::binary);
  if (!in) {
    errors.push_back("cannot read " + path.string());
    return check;
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    errors.push_back(std::string("not valid JSON: ") + e.what());
    return check;
  }
  if (!doc.is_object()) {
    errors.push_back("problem file must hold a JSON object");
    return check;
  }

  auto name = string_field(doc, "name", errors);
  if (name && name->empty()) errors.push_back("field 'name' is empty");

  std::optional<ParamSpace> space;
  try {
    space = space_from_json(doc);
  } catch (const Error& e) {
    errors.push_back(std::string("space: ") + e.what());
  }

  std::filesystem::path mold_path;
  std::optional<CodeMold> mold;
  if (auto mold_field = string_field(doc, "mold", errors)) {
    mold_path = path.parent_path() / *mold_field;
    try {
      mold = CodeMold::from_file(mold_path);
    } catch (const Error&) {
      errors.push_back("cannot read mold " + mold_path.string());
    }
  }
  if (mold && space) {
    for (const std::string& token : mold->tokens()) {
      if (!space->index_of(token)) {
        errors.push_back("unbound token #" + token +
                         " (no parameter of that name)");
      }
    }
    for (const Parameter& p : space->parameters()) {
      if (std::find(mold->tokens().begin(), mold->tokens().end(), p.name) ==
          mold->tokens().end()) {
        check.warnings.push_back("parameter " + p.name +
                                 " does not appear in the mold");
      }
    }
  }

  BuildRecipe recipe;
  if (auto compile = string_field(doc, "compile", errors)) {
    recipe.compile_template = *compile;
    if (compile->find("{src}") == std::string::npos) {
      errors.push_back("compile template missing {src}");
    }
    if (compile->find("{bin}") == std::string::npos) {
      errors.push_back("compile template missing {bin}");
    }
  }
  if (auto run = string_field(doc, "run", errors)) {
    recipe.run_template = *run;
    if (run->find("{bin}") == std::string::npos) {
      errors.push_back("run template missing {bin}");
    }
  }
  if (!mold_path.empty()) recipe.source_name = mold_path.filename().string();

  MeasurementPolicy policy;
  if (doc.contains("repeats")) {
    if (!doc["repeats"].is_number_integer() || doc["repeats"].get<long long>() < 1) {
      errors.push_back("field 'repeats' must be an integer >= 1");
    } else {
      policy.repeats = doc["repeats"].get<int>();
    }
  }
  if (auto agg = string_field(doc, "aggregation", errors, false)) {
    if (auto a = parse_aggregation(*agg)) {
      policy.aggregation = *a;
    } else {
      errors.push_back("unknown aggregation '" + *agg + "'");
    }
  }
  if (doc.contains("timeout_sec")) {
    if (!doc["timeout_sec"].is_number() || !(doc["timeout_sec"].get<double>() > 0)) {
      errors.push_back("field 'timeout_sec' must be a positive number");
    } else {
      policy.timeout_sec = doc["timeout_sec"].get<double>();
    }
  }
  if (auto src = string_field(doc, "objective_source", errors, false)) {
    if (auto s = parse_objective_source(*src)) {
      policy.objective_source = *s;
    } else {
      errors.push_back("unknown objective_source '" + *src + "'");
    }
  }

  auto preset = string_field(doc, "flag_preset", errors, false);
  if (preset) {
    try {
      recipe.flags = get_preset(*preset).flags;
    } catch (const Error&) {
      errors.push_back("unknown flag_preset '" + *preset + "'");
    }
  }
  auto mock = string_field(doc, "mock_objective", errors, false);
  if (mock && !MockObjective::is_known(*mock)) {
    errors.push_back("unknown mock_objective '" + *mock + "'");
  }

  if (errors.empty()) {
    check.problem = Problem{*name,   mold_path, std::move(*space), std::move(recipe),
                            policy, preset,    mock};
  }
  return check;
}

Problem load_problem(const std::filesystem::path& path) {
  ProblemCheck check = check_problem(path);
  if (!check.problem) {
    std::ostringstream msg;
    msg << path.string();
    for (const std::string& e : check.errors) msg << "\n  " << e;
    throw Error(Errc::kInvalidProblem, msg.str());
  }
  return std::move(*check.problem);
}

}  // namespace pragmatune
