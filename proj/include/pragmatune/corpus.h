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

#ifndef PRAGMATUNE_CORPUS_H_
#define PRAGMATUNE_CORPUS_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace pragmatune {

// Named compiler flag sets for the shipped problems.
struct FlagPreset {
  std::string name;
  std::vector<std::string> flags;
};

// baseline_O3, polly, polly_noheuristic. Throws kUnknownPreset.
const FlagPreset& get_preset(std::string_view name);
std::vector<std::string> preset_names();

// Shipped problem names; each lives in problems/<name>.json.
std::vector<std::string> list_problems();

std::filesystem::path problem_file(const std::filesystem::path& corpus_root,
                                   std::string_view name);

}  // namespace pragmatune

#endif  // PRAGMATUNE_CORPUS_H_
