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

#include <regex>

#include "doctest.h"
#include "pragmatune/error.h"
#include "pragmatune/problem.h"
#include "pragmatune/templater.h"
#include "test_util.h"

namespace pragmatune {
namespace {

// Reference substitution built on std::regex.
std::string regex_instantiate(const std::string& text, const Substitutions& values) {
  static const std::regex token("#(P[A-Za-z0-9]+)");
  std::string out;
  auto last = text.cbegin();
  for (std::sregex_iterator it(text.begin(), text.end(), token), end; it != end;
       ++it) {
    out.append(last, (*it)[0].first);
    out += values.at((*it)[1].str()).value_or("");
    last = (*it)[0].second;
  }
  out.append(last, text.cend());
  return out;
}

TEST_CASE("token extraction") {
  const Problem syr2k = load_problem(testing::problem_path("syr2k"));
  const CodeMold mold = CodeMold::from_file(syr2k.mold_path);
  CHECK(mold.tokens() == std::vector<std::string>{"P0", "P1", "P2", "P3", "P4", "P5"});
  CHECK(extract_tokens("int main() { return 0; }").empty());
  CHECK(extract_tokens("x #P1 y #P10 z") == std::vector<std::string>{"P1", "P10"});
  CHECK(extract_tokens("#P1#P1 #Pa_b #P #p2 ##P3") ==
        std::vector<std::string>{"P1", "Pa", "P3"});
}

TEST_CASE("syr2k tile sizes from the best large-dataset configuration") {
  const Problem syr2k = load_problem(testing::problem_path("syr2k"));
  const CodeMold mold = CodeMold::from_file(syr2k.mold_path);
  const Configuration c = syr2k.space.resolve_activity(
      {{"P3", "50"}, {"P4", "128"}, {"P5", "256"}});
  const std::string text = instantiate(mold, syr2k.space, c).text;
  CHECK(text.find("tile sizes(50,128,256)") != std::string::npos);
  CHECK(text.find("#P") == std::string::npos);
}

TEST_CASE("maximal munch") {
  const CodeMold mold("A #P1 B #P10 C");
  const Instantiation out = instantiate(mold, {{"P1", "x"}, {"P10", "y"}});
  CHECK(out.text == "A x B y C");
  CHECK(out.unused.empty());
}

TEST_CASE("inactive parameters leave an empty slot") {
  const CodeMold mold("before\n#P1\nafter #P2;");
  CHECK(instantiate(mold, {{"P1", std::nullopt}, {"P2", "7"}}).text ==
        "before\n\nafter 7;");

  const ParamSpace space({{"P1", ParamKind::kCategorical, {"#pragma a", "x"}, "x"},
                          {"P2", ParamKind::kOrdinal, {"7", "8"}, "7"}},
                         {{"P1", "P2", {"8"}}});
  const Configuration c = space.resolve_activity({{"P2", "7"}});
  REQUIRE_FALSE(c.is_active(0));
  CHECK(instantiate(mold, space, c).text == "before\n\nafter 7;");
}

TEST_CASE("inserted values are not expanded again") {
  const CodeMold mold("#P1 #P2");
  CHECK(instantiate(mold, {{"P1", "#P2"}, {"P2", "z"}}).text == "#P2 z");
}

TEST_CASE("missing and unused substitutions") {
  const CodeMold mold("#P1 and #P2");
  CHECK_THROWS_AS(instantiate(mold, {{"P1", "x"}}), Error);
  try {
    instantiate(mold, {{"P1", "x"}});
  } catch (const Error& e) {
    CHECK(e.code() == Errc::kMissingToken);
  }
  const Instantiation out =
      instantiate(mold, {{"P1", "x"}, {"P2", "y"}, {"P7", "z"}});
  CHECK(out.unused == std::vector<std::string>{"P7"});
}

TEST_CASE("instantiation agrees with a regex reference") {
  const std::string text =
      "#P0\n#P1\n#P2 tile(#P3,#P4,#P5)#P3#P33 #P3a end #P";
  const ParamSpace space(
      {{"P0", ParamKind::kCategorical, {"", " ", "#pragma x"}, " "},
       {"P1", ParamKind::kCategorical, {"a,b", "\"q\""}, "a,b"},
       {"P2", ParamKind::kCategorical, {"#P0", "$1"}, "$1"},
       {"P3", ParamKind::kOrdinal, {"1", "2", "3"}, "1"},
       {"P4", ParamKind::kOrdinal, {"10", "20"}, "10"},
       {"P5", ParamKind::kOrdinal, {"4", "8"}, "4"},
       {"P33", ParamKind::kOrdinal, {"33"}, "33"},
       {"P3a", ParamKind::kCategorical, {"A"}, "A"}},
      {{"P1", "P0", {"#pragma x"}}});
  const CodeMold mold(text);
  Rng rng(4);
  for (const Configuration& c : space.sample_random(rng, 200)) {
    Substitutions values;
    for (std::size_t i = 0; i < space.num_parameters(); ++i) {
      auto v = space.value(c, i);
      values[space.parameter(i).name] =
          v ? std::optional<std::string>(std::string(*v)) : std::nullopt;
    }
    CHECK(instantiate(mold, space, c).text == regex_instantiate(text, values));
  }
}

TEST_CASE("unreadable mold") {
  CHECK_THROWS_AS(CodeMold::from_file("/nonexistent/mold.c"), Error);
}

}  // namespace
}  // namespace pragmatune
