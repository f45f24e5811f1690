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

#include <algorithm>

#include "doctest.h"
#include "json.hpp"
#include "pragmatune/corpus.h"
#include "pragmatune/error.h"
#include "pragmatune/problem.h"
#include "pragmatune/templater.h"
#include "test_util.h"

namespace pragmatune {
namespace {

bool has(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

bool mentions(const std::vector<std::string>& messages, const std::string& part) {
  return std::any_of(messages.begin(), messages.end(), [&](const std::string& m) {
    return m.find(part) != std::string::npos;
  });
}

TEST_CASE("flag presets") {
  CHECK(preset_names() ==
        std::vector<std::string>{"baseline_O3", "polly", "polly_noheuristic"});
  const auto& polly = get_preset("polly").flags;
  CHECK(has(polly, "-fno-unroll-loops"));
  CHECK(has(polly, "-polly"));
  CHECK(has(polly, "-polly-process-unprofitable"));
  const auto& strict = get_preset("polly_noheuristic").flags;
  CHECK(has(strict, "-polly-reschedule=0"));
  CHECK(has(strict, "-polly-postopts=0"));
  CHECK(has(strict, "-polly-pragma-ignore-depcheck"));
  CHECK(get_preset("baseline_O3").flags == std::vector<std::string>{"-O3"});
  try {
    get_preset("nope");
    FAIL("expected an Error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::kUnknownPreset);
  }
}

TEST_CASE("every shipped problem validates") {
  const auto names = list_problems();
  CHECK(names.size() == 8);
  for (const std::string& name : names) {
    CAPTURE(name);
    const auto path = problem_file(testing::source_dir(), name);
    CHECK(path == testing::problem_path(name));
    const ProblemCheck check = check_problem(path);
    CHECK(check.errors.empty());
    CHECK(check.warnings.empty());
    REQUIRE(check.problem.has_value());
    CHECK(check.problem->name == name);
    CHECK(check.problem->space.seed() == 1234);
  }
}

TEST_CASE("shipped spaces") {
  const Problem syr2k = load_problem(testing::problem_path("syr2k"));
  CHECK(syr2k.space.num_parameters() == 6);
  CHECK(syr2k.space.conditions().size() == 1);
  CHECK(syr2k.space.size() == 10648);
  CHECK(syr2k.flag_preset == "polly");
  CHECK_FALSE(syr2k.mock_objective.has_value());

  const Problem mock = load_problem(testing::problem_path("mock_syr2k"));
  CHECK(mock.space.size() == 10648);
  CHECK(mock.mock_objective == "sphere");
  CHECK(mock.space.parameters() == syr2k.space.parameters());

  const Problem tiny = load_problem(testing::problem_path("mock_tiny"));
  CHECK(tiny.space.size() == 64);
  CHECK(tiny.space.enumerate(64).size() <= 64);

  CHECK(load_problem(testing::problem_path("3mm")).space.size() == 170368);
  CHECK(load_problem(testing::problem_path("floyd-warshall")).flag_preset ==
        "polly_noheuristic");
}

TEST_CASE("molds name exactly the space's parameters") {
  for (const std::string& name : list_problems()) {
    CAPTURE(name);
    const Problem p = load_problem(testing::problem_path(name));
    std::vector<std::string> params;
    for (const Parameter& q : p.space.parameters()) params.push_back(q.name);
    std::vector<std::string> tokens = CodeMold::from_file(p.mold_path).tokens();
    std::sort(params.begin(), params.end());
    std::sort(tokens.begin(), tokens.end());
    CHECK(tokens == params);
  }
}

// Writes a variant of mock_tiny with `edit` applied next to a copy of its mold.
std::filesystem::path variant(const testing::TempDir& dir,
                              const std::function<void(nlohmann::json&)>& edit) {
  auto doc = nlohmann::json::parse(testing::read_file(testing::problem_path("mock_tiny")));
  doc["mold"] = "tiny.c";
  edit(doc);
  testing::write_file(dir / "tiny.c",
                      testing::read_file(testing::source_dir() / "molds/tiny.c"));
  testing::write_file(dir / "p.json", doc.dump(2));
  return dir / "p.json";
}

TEST_CASE("problem diagnostics") {
  testing::TempDir dir;
  auto errors_of = [&](const std::function<void(nlohmann::json&)>& edit) {
    return check_problem(variant(dir, edit)).errors;
  };

  CHECK(errors_of([](nlohmann::json&) {}).empty());
  CHECK(mentions(errors_of([](nlohmann::json& d) { d["compile"] = "cc -o {bin}"; }),
                 "{src}"));
  CHECK(mentions(errors_of([](nlohmann::json& d) { d["run"] = "./a.out"; }), "{bin}"));
  CHECK(mentions(errors_of([](nlohmann::json& d) { d["params"].erase(3); }),
                 "unbound token #P3"));
  CHECK(mentions(errors_of([](nlohmann::json& d) { d["repeats"] = 0; }), "repeats"));
  CHECK(mentions(errors_of([](nlohmann::json& d) { d["aggregation"] = "max"; }),
                 "aggregation"));
  CHECK(mentions(errors_of([](nlohmann::json& d) { d["flag_preset"] = "O9"; }),
                 "flag_preset"));
  CHECK(mentions(errors_of([](nlohmann::json& d) { d["mock_objective"] = "x"; }),
                 "mock_objective"));
  CHECK(mentions(errors_of([](nlohmann::json& d) { d["mold"] = "none.c"; }),
                 "cannot read mold"));
  CHECK(mentions(errors_of([](nlohmann::json& d) { d["params"][2]["default"] = "5"; }),
                 "space"));

  const auto two = errors_of([](nlohmann::json& d) {
    d["compile"] = "cc";
    d["timeout_sec"] = -1;
  });
  CHECK(two.size() == 3);

  const ProblemCheck extra = check_problem(variant(dir, [](nlohmann::json& d) {
    d["params"].push_back({{"name", "P9"},
                           {"kind", "ordinal"},
                           {"values", {"1", "2"}},
                           {"default", "1"}});
  }));
  CHECK(extra.errors.empty());
  CHECK(mentions(extra.warnings, "P9"));

  testing::write_file(dir / "bad.json", "{ not json");
  CHECK(mentions(check_problem(dir / "bad.json").errors, "JSON"));
  CHECK(mentions(check_problem(dir / "absent.json").errors, "cannot read"));
  try {
    load_problem(dir / "bad.json");
    FAIL("expected an Error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::kInvalidProblem);
  }
}

}  // namespace
}  // namespace pragmatune
