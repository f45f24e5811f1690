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
#include "pragmatune/error.h"
#include "pragmatune/perfdb.h"
#include "pragmatune/problem.h"
#include "pragmatune/rng.h"
#include "test_util.h"

namespace pragmatune {
namespace {

ParamSpace toy_space() {
  return ParamSpace({{"P0", ParamKind::kCategorical, {" ", "#pragma a"}, " "},
                     {"P1", ParamKind::kCategorical, {"x", "y"}, "x"},
                     {"P2", ParamKind::kOrdinal, {"4", "8", "16"}, "8"}},
                    {{"P1", "P0", {"#pragma a"}}});
}

EvalRecord ok_record(std::size_t index, Configuration c, double objective) {
  EvalRecord r;
  r.index = index;
  r.config = std::move(c);
  r.objective = objective;
  r.elapsed = 1.5;
  r.timestamp = "2026-01-01T00:00:00Z";
  return r;
}

EvalRecord failed_record(std::size_t index, Configuration c, EvalStatus s) {
  EvalRecord r;
  r.index = index;
  r.config = std::move(c);
  r.status = s;
  r.elapsed = 0.25;
  r.timestamp = "2026-01-01T00:00:01Z";
  return r;
}

Errc error_code(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return Errc::kInvalidArgument;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start < text.size()) {
    const std::size_t nl = text.find('\n', start);
    out.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return out;
}

TEST_CASE("first append writes both files") {
  testing::TempDir dir;
  const ParamSpace space = toy_space();
  PerfDb db = PerfDb::create(space, dir.path());
  CHECK(testing::read_file(dir / "results.csv") ==
        "P0,P1,P2,objective,elapsed_sec,status,duplicate_of,timestamp\n");
  db.append(ok_record(1, space.resolve_activity({{"P0", "#pragma a"}, {"P1", "y"}}),
                      0.229));
  const auto csv = lines(testing::read_file(dir / "results.csv"));
  REQUIRE(csv.size() == 2);
  CHECK(csv[1] == "#pragma a,y,8,0.229,1.5,ok,,2026-01-01T00:00:00Z");
  const auto json = nlohmann::json::parse(testing::read_file(dir / "results.json"));
  REQUIRE(json.size() == 1);
  CHECK(json[0]["P1"] == "y");
  CHECK(json[0]["objective"] == 0.229);
  CHECK(json[0]["duplicate_of"].is_null());
}

TEST_CASE("inactive and failed records") {
  testing::TempDir dir;
  const ParamSpace space = toy_space();
  PerfDb db = PerfDb::create(space, dir.path());
  db.append(failed_record(1, space.default_configuration(), EvalStatus::kCompileError));
  const auto csv = lines(testing::read_file(dir / "results.csv"));
  CHECK(csv[1] == "\" \",,8,,0.25,compile_error,,2026-01-01T00:00:01Z");
  const auto json = nlohmann::json::parse(testing::read_file(dir / "results.json"));
  CHECK(json[0]["P0"] == " ");
  CHECK(json[0]["P1"].is_null());
  CHECK(json[0]["objective"].is_null());
  CHECK(json[0]["status"] == "compile_error");
}

TEST_CASE("round trip") {
  testing::TempDir dir;
  const ParamSpace space = toy_space();
  PerfDb db = PerfDb::create(space, dir.path());
  const Configuration a = space.resolve_activity({{"P2", "4"}});
  const Configuration b = space.resolve_activity({{"P0", "#pragma a"}, {"P2", "16"}});
  db.append(ok_record(1, a, 0.709));
  db.append(failed_record(2, b, EvalStatus::kTimeout));
  EvalRecord dup = failed_record(3, a, EvalStatus::kDuplicate);
  dup.duplicate_of = 1;
  dup.elapsed = 0.0;
  db.append(dup);
  db.append(ok_record(4, b, 1.0 / 3.0));

  const PerfDb loaded = PerfDb::load(space, dir.path());
  CHECK(loaded.records() == db.records());
  CHECK(loaded.records()[3].objective == 0.333333);
  CHECK(loaded.contains(a) == 1u);
  CHECK(loaded.contains(b) == 2u);
  CHECK(loaded.next_index() == 5);
}

TEST_CASE("contains") {
  const ParamSpace space = toy_space();
  PerfDb db(space);
  const Configuration c = space.resolve_activity({{"P2", "16"}});
  CHECK_FALSE(db.contains(c).has_value());
  for (std::size_t i = 1; i <= 6; ++i) {
    db.append(ok_record(i, space.resolve_activity({{"P2", i % 2 ? "4" : "8"}}), 1.0));
  }
  db.append(ok_record(7, c, 2.0));
  CHECK(db.contains(c) == 7u);
  // Different raw values for the inactive P1 collapse to one configuration.
  CHECK(db.contains(space.resolve({0, 1, 2})) == 7u);
  CHECK(db.contains(space.resolve({0, 0, 0})) == 1u);
}

TEST_CASE("find_min") {
  const ParamSpace space = toy_space();
  const auto all = space.enumerate(100);
  PerfDb db(space);
  CHECK(error_code([&] { find_min(db); }) == Errc::kNoSuccessfulEvaluation);
  db.append(ok_record(1, all[0], 0.709));
  db.append(ok_record(2, all[1], 0.265));
  db.append(ok_record(3, all[2], 0.229));
  CHECK(find_min(db).index == 3);

  PerfDb failed(space);
  failed.append(failed_record(1, all[0], EvalStatus::kRunError));
  failed.append(failed_record(2, all[1], EvalStatus::kTimeout));
  CHECK(error_code([&] { find_min(failed); }) == Errc::kNoSuccessfulEvaluation);

  PerfDb tie(space);
  tie.append(ok_record(1, all[0], 0.5));
  tie.append(ok_record(2, all[1], 0.5));
  CHECK(find_min(tie).index == 1);
}

TEST_CASE("append rejects gaps and foreign configurations") {
  const ParamSpace space = toy_space();
  PerfDb db(space);
  CHECK(error_code([&] { db.append(ok_record(2, space.default_configuration(), 1)); }) ==
        Errc::kIndexGap);
  Configuration bad{{0, 1, 0}};  // P1 must be inactive when P0 is " "
  CHECK(error_code([&] { db.append(ok_record(1, bad, 1)); }) == Errc::kInvalidArgument);
  CHECK(db.size() == 0);
}

TEST_CASE("load detects damaged files") {
  testing::TempDir dir;
  const ParamSpace space = toy_space();
  {
    PerfDb db = PerfDb::create(space, dir.path());
    db.append(ok_record(1, space.default_configuration(), 0.5));
    db.append(ok_record(2, space.resolve_activity({{"P2", "4"}}), 0.25));
  }
  const std::string csv = testing::read_file(dir / "results.csv");
  const std::string json = testing::read_file(dir / "results.json");
  auto load_code = [&] {
    return error_code([&] { PerfDb::load(space, dir.path()); });
  };

  SUBCASE("header of another space") {
    const ParamSpace other({{"PQ0", ParamKind::kOrdinal, {"1"}, "1"}}, {});
    CHECK(error_code([&] { PerfDb::load(other, dir.path()); }) == Errc::kSchemaMismatch);
  }
  SUBCASE("csv and json disagree") {
    std::string changed = csv;
    changed.replace(changed.find("0.25"), 4, "0.26");
    testing::write_file(dir / "results.csv", changed);
    CHECK(load_code() == Errc::kConsistencyError);
  }
  SUBCASE("unknown value") {
    std::string changed = csv;
    changed.replace(changed.rfind(",4,"), 3, ",5,");
    testing::write_file(dir / "results.csv", changed);
    CHECK(load_code() == Errc::kParseError);
  }
  SUBCASE("malformed json") {
    testing::write_file(dir / "results.json", json.substr(0, json.size() / 2));
    CHECK(load_code() == Errc::kParseError);
  }
  SUBCASE("missing files") {
    std::filesystem::remove(dir / "results.json");
    CHECK(load_code() == Errc::kIoError);
  }
  SUBCASE("intact") { CHECK(PerfDb::load(space, dir.path()).size() == 2); }
}

TEST_CASE("csv quoting") {
  const ParamSpace space({{"PA", ParamKind::kCategorical,
                           {"a,b", "say \"hi\"", " lead", "", "plain"}, "plain"}},
                         {});
  EvalRecord r = ok_record(1, space.resolve_activity({{"PA", "a,b"}}), 1.0);
  CHECK(csv_row(space, r) == "\"a,b\",1.0,1.5,ok,,2026-01-01T00:00:00Z\n");
  r.config = space.resolve_activity({{"PA", "say \"hi\""}});
  CHECK(csv_row(space, r).starts_with("\"say \"\"hi\"\"\","));
  r.config = space.resolve_activity({{"PA", " lead"}});
  CHECK(csv_row(space, r).starts_with("\" lead\","));
  r.config = space.resolve_activity({{"PA", ""}});
  CHECK(csv_row(space, r).starts_with("\"\","));

  testing::TempDir dir;
  PerfDb db = PerfDb::create(space, dir.path());
  for (std::size_t i = 0; i < 5; ++i) {
    db.append(ok_record(i + 1, Configuration{{static_cast<std::int32_t>(i)}}, 0.1 * i));
  }
  CHECK(PerfDb::load(space, dir.path()).records() == db.records());
}

TEST_CASE("seconds formatting") {
  CHECK(format_seconds(0.229) == "0.229");
  CHECK(format_seconds(2.0) == "2.0");
  CHECK(format_seconds(1.0 / 3.0) == "0.333333");
  CHECK(quantize_seconds(0.1234567) == 0.123457);
}

TEST_CASE("randomized round trip") {
  const Problem p = load_problem(testing::problem_path("syr2k"));
  const ParamSpace& space = p.space;
  Rng rng(99);
  for (int trial = 0; trial < 3; ++trial) {
    testing::TempDir dir;
    PerfDb db = PerfDb::create(space, dir.path());
    const std::size_t n = 1 + rng.uniform_index(500);
    const auto configs = space.sample_random(rng, n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t index = i + 1;
      if (auto seen = db.contains(configs[i])) {
        EvalRecord d = failed_record(index, configs[i], EvalStatus::kDuplicate);
        d.duplicate_of = seen;
        db.append(d);
      } else if (rng.uniform01() < 0.1) {
        db.append(failed_record(index, configs[i], EvalStatus::kRunError));
      } else {
        db.append(ok_record(index, configs[i], rng.uniform(0.01, 10.0)));
      }
    }
    const PerfDb loaded = PerfDb::load(space, dir.path());
    CHECK(loaded.records() == db.records());

    const EvalRecord* best = nullptr;
    for (const EvalRecord& r : loaded.records()) {
      if (r.objective && (!best || *r.objective < *best->objective)) best = &r;
    }
    if (best) {
      CHECK(find_min(loaded).index == best->index);
    } else {
      CHECK(error_code([&] { find_min(loaded); }) == Errc::kNoSuccessfulEvaluation);
    }
  }
}

}  // namespace
}  // namespace pragmatune
