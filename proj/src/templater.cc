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

#include "pragmatune/templater.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iterator>
#include <set>

#include "pragmatune/error.h"

namespace pragmatune {
namespace {

bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0;
}

// Length of the token name starting at text[pos] (which must be '#'), or 0
// when there is no token there.
std::size_t token_length_at(std::string_view text, std::size_t pos) {
  if (pos + 2 >= text.size() || text[pos] != '#' || text[pos + 1] != 'P') {
    return 0;
  }
  std::size_t end = pos + 2;
  while (end < text.size() && is_name_char(text[end])) ++end;
  return end == pos + 2 ? 0 : end - pos - 1;
}

}  // namespace

std::vector<std::string> extract_tokens(std::string_view text) {
  std::vector<std::string> tokens;
  std::set<std::string, std::less<>> seen;
  for (std::size_t pos = text.find('#'); pos != std::string_view::npos;
       pos = text.find('#', pos + 1)) {
    const std::size_t len = token_length_at(text, pos);
    if (len == 0) continue;
    std::string name(text.substr(pos + 1, len));
    if (seen.insert(name).second) tokens.push_back(std::move(name));
    pos += len;
  }
  return tokens;
}

CodeMold::CodeMold(std::string text)
    : text_(std::move(text)), tokens_(extract_tokens(text_)) {}

CodeMold CodeMold::from_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIoError, "cannot read mold " + path.string());
  return CodeMold(std::string(std::istreambuf_iterator<char>(in), {}));
}

Instantiation instantiate(const CodeMold& mold, const Substitutions& values) {
  for (const std::string& token : mold.tokens()) {
    if (values.find(token) == values.end()) {
      throw Error(Errc::kMissingToken, "no value for #" + token);
    }
  }
  Instantiation out;
  const std::string& text = mold.text();
  out.text.reserve(text.size());
  std::size_t copied = 0;
  for (std::size_t pos = text.find('#'); pos != std::string::npos;
       pos = text.find('#', pos + 1)) {
    const std::size_t len = token_length_at(text, pos);
    if (len == 0) continue;
    out.text.append(text, copied, pos - copied);
    const auto& value = values.find(std::string_view(text).substr(pos + 1, len))
                            ->second;
    if (value) out.text += *value;
    copied = pos + 1 + len;
    pos = copied - 1;
  }
  out.text.append(text, copied, std::string::npos);

  for (const auto& [name, value] : values) {
    if (std::find(mold.tokens().begin(), mold.tokens().end(), name) ==
        mold.tokens().end()) {
      out.unused.push_back(name);
    }
  }
  return out;
}

Instantiation instantiate(const CodeMold& mold, const ParamSpace& space,
                          const Configuration& config) {
  Substitutions values;
  for (std::size_t i = 0; i < space.num_parameters(); ++i) {
    auto v = space.value(config, i);
    values.emplace(space.parameter(i).name,
                   v ? std::optional<std::string>(std::string(*v))
                     : std::nullopt);
  }
  return instantiate(mold, values);
}

}  // namespace pragmatune
