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

#ifndef PRAGMATUNE_TEMPLATER_H_
#define PRAGMATUNE_TEMPLATER_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pragmatune/space.h"

namespace pragmatune {

// Source text whose tunable sites are `#P<name>` tokens. A token is `#P`
// followed by the maximal run of ASCII letters and digits; its name includes
// the leading `P` (`#P10` is token "P10").
class CodeMold {
 public:
  explicit CodeMold(std::string text);
  static CodeMold from_file(const std::filesystem::path& path);

  const std::string& text() const { return text_; }
  // Distinct token names in first-occurrence order.
  const std::vector<std::string>& tokens() const { return tokens_; }

 private:
  std::string text_;
  std::vector<std::string> tokens_;
};

std::vector<std::string> extract_tokens(std::string_view text);

// Token name -> replacement; std::nullopt substitutes the empty string.
using Substitutions =
    std::map<std::string, std::optional<std::string>, std::less<>>;

struct Instantiation {
  std::string text;
  // Substitution keys with no occurrence in the mold.
  std::vector<std::string> unused;
};

// Single left-to-right pass; inserted values are never rescanned. Throws
// kMissingToken when a mold token has no substitution.
Instantiation instantiate(const CodeMold& mold, const Substitutions& values);

// Inactive parameters substitute the empty string.
Instantiation instantiate(const CodeMold& mold, const ParamSpace& space,
                          const Configuration& config);

}  // namespace pragmatune

#endif  // PRAGMATUNE_TEMPLATER_H_
