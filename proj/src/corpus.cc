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

#include "pragmatune/corpus.h"

#include <algorithm>

#include "pragmatune/error.h"

namespace pragmatune {
namespace {

std::vector<std::string> polly_flags() {
  return {"-std=c99",
          "-fno-unroll-loops",
          "-O3",
          "-mllvm",
          "-polly",
          "-mllvm",
          "-polly-process-unprofitable",
          "-mllvm",
          "-polly-use-llvm-names",
          "-ffast-math",
          "-march=native"};
}

const std::vector<FlagPreset>& presets() {
  static const std::vector<FlagPreset> all = [] {
    std::vector<FlagPreset> v;
    v.push_back({"baseline_O3", {"-O3"}});
    v.push_back({"polly", polly_flags()});
    // Keeps Polly from rescheduling loops that carry no pragma and forces
    // pragma transformations it cannot prove legal.
    auto no_heuristic = polly_flags();
    for (const char* f :
         {"-mllvm", "-polly-reschedule=0", "-mllvm", "-polly-postopts=0",
          "-mllvm", "-polly-pragma-ignore-depcheck"}) {
      no_heuristic.emplace_back(f);
    }
    v.push_back({"polly_noheuristic", std::move(no_heuristic)});
    return v;
  }();
  return all;
}

}  // namespace

const FlagPreset& get_preset(std::string_view name) {
  const auto& all = presets();
  auto it = std::find_if(all.begin(), all.end(),
                         [&](const FlagPreset& p) { return p.name == name; });
  if (it == all.end()) throw Error(Errc::kUnknownPreset, std::string(name));
  return *it;
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const FlagPreset& p : presets()) names.push_back(p.name);
  return names;
}

std::vector<std::string> list_problems() {
  return {"syr2k",          "3mm",       "lu",       "heat-3d",
          "covariance",     "floyd-warshall", "mock_syr2k", "mock_tiny"};
}

std::filesystem::path problem_file(const std::filesystem::path& corpus_root,
                                   std::string_view name) {
  return corpus_root / "problems" / (std::string(name) + ".json");
}

}  // namespace pragmatune
