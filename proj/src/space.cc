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

#include "pragmatune/space.h"

#include <algorithm>
#include <cctype>
#include <limits>
#include <set>
#include <unordered_set>

#include "pragmatune/error.h"

namespace pragmatune {
namespace {

bool is_token_name(std::string_view name) {
  if (name.size() < 2 || name[0] != 'P') return false;
  return std::all_of(name.begin(), name.end(), [](unsigned char c) {
    return std::isalnum(c) != 0;
  });
}

std::optional<std::size_t> find_value(const Parameter& p,
                                      std::string_view value) {
  auto it = std::find(p.values.begin(), p.values.end(), value);
  if (it == p.values.end()) return std::nullopt;
  return static_cast<std::size_t>(it - p.values.begin());
}

}  // namespace

std::string_view param_kind_name(ParamKind kind) {
  return kind == ParamKind::kOrdinal ? "ordinal" : "categorical";
}

std::optional<ParamKind> parse_param_kind(std::string_view text) {
  if (text == "categorical") return ParamKind::kCategorical;
  if (text == "ordinal") return ParamKind::kOrdinal;
  return std::nullopt;
}

std::size_t ConfigurationHash::operator()(
    const Configuration& config) const noexcept {
  // FNV-1a over the slot values.
  std::uint64_t h = 1469598103934665603ull;
  for (std::int32_t s : config.slots) {
    h ^= static_cast<std::uint32_t>(s);
    h *= 1099511628211ull;
  }
  return static_cast<std::size_t>(h);
}

ParamSpace::ParamSpace(std::vector<Parameter> parameters,
                       std::vector<Condition> conditions, std::uint64_t seed)
    : parameters_(std::move(parameters)),
      conditions_(std::move(conditions)),
      seed_(seed) {
  if (parameters_.empty()) {
    throw Error(Errc::kInvalidDefinition, "space has no parameters");
  }
  std::unordered_set<std::string> names;
  for (const Parameter& p : parameters_) {
    if (!is_token_name(p.name)) {
      throw Error(Errc::kInvalidDefinition,
                  "parameter name '" + p.name +
                      "' must be 'P' followed by letters or digits");
    }
    if (!names.insert(p.name).second) {
      throw Error(Errc::kDuplicateName, "parameter '" + p.name + "'");
    }
    if (p.values.empty()) {
      throw Error(Errc::kInvalidDefinition,
                  "parameter '" + p.name + "' has no values");
    }
    std::unordered_set<std::string> seen;
    for (const std::string& v : p.values) {
      if (!seen.insert(v).second) {
        throw Error(Errc::kInvalidDefinition,
                    "parameter '" + p.name + "' repeats value '" + v + "'");
      }
    }
    if (!find_value(p, p.default_value)) {
      throw Error(Errc::kDefaultNotInValues,
                  "parameter '" + p.name + "' default '" + p.default_value +
                      "'");
    }
  }

  condition_of_.resize(parameters_.size());
  for (const Condition& c : conditions_) {
    auto child = index_of(c.child);
    auto parent = index_of(c.parent);
    if (!child || !parent) {
      throw Error(Errc::kUnknownConditionTarget,
                  "condition " + c.child + " <- " + c.parent);
    }
    if (*child == *parent) {
      throw Error(Errc::kCyclicCondition,
                  "parameter '" + c.child + "' conditioned on itself");
    }
    if (condition_of_[*child]) {
      throw Error(Errc::kInvalidDefinition,
                  "parameter '" + c.child + "' has more than one condition");
    }
    if (c.allowed.empty()) {
      throw Error(Errc::kInvalidDefinition,
                  "condition on '" + c.child + "' allows no parent value");
    }
    const Parameter& pp = parameters_[*parent];
    ResolvedCondition rc{*parent, std::vector<bool>(pp.values.size(), false)};
    for (const std::string& v : c.allowed) {
      auto idx = find_value(pp, v);
      if (!idx) {
        throw Error(Errc::kValueNotInDomain,
                    "condition on '" + c.child + "' allows '" + v +
                        "', not a value of '" + pp.name + "'");
      }
      rc.allowed[*idx] = true;
    }
    condition_of_[*child] = std::move(rc);
  }

  // Each parameter has at most one parent, so a cycle shows up as a parent
  // chain longer than the number of parameters.
  for (std::size_t i = 0; i < parameters_.size(); ++i) {
    std::size_t steps = 0;
    for (std::size_t cur = i; condition_of_[cur];
         cur = condition_of_[cur]->parent) {
      if (++steps > parameters_.size()) {
        throw Error(Errc::kCyclicCondition,
                    "condition chain through '" + parameters_[i].name + "'");
      }
    }
  }

  std::vector<bool> placed(parameters_.size(), false);
  while (activation_order_.size() < parameters_.size()) {
    for (std::size_t i = 0; i < parameters_.size(); ++i) {
      if (placed[i]) continue;
      if (!condition_of_[i] || placed[condition_of_[i]->parent]) {
        placed[i] = true;
        activation_order_.push_back(i);
      }
    }
  }

  feature_offset_.reserve(parameters_.size());
  for (const Parameter& p : parameters_) {
    feature_offset_.push_back(feature_length_);
    feature_length_ += p.kind == ParamKind::kOrdinal ? 1 : p.values.size();
  }
}

std::optional<std::size_t> ParamSpace::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < parameters_.size(); ++i) {
    if (parameters_[i].name == name) return i;
  }
  return std::nullopt;
}

bool ParamSpace::has_ordinal() const {
  return std::any_of(parameters_.begin(), parameters_.end(),
                     [](const Parameter& p) {
                       return p.kind == ParamKind::kOrdinal;
                     });
}

std::uint64_t ParamSpace::size() const {
  std::uint64_t total = 1;
  for (const Parameter& p : parameters_) {
    const std::uint64_t k = p.values.size();
    if (total > std::numeric_limits<std::uint64_t>::max() / k) {
      throw Error(Errc::kOverflow, "space size exceeds 2^64");
    }
    total *= k;
  }
  return total;
}

Configuration ParamSpace::resolve(std::vector<std::int32_t> raw) const {
  Configuration config{std::move(raw)};
  for (std::size_t i : activation_order_) {
    const auto& cond = condition_of_[i];
    if (!cond) continue;
    const std::int32_t parent_slot = config.slots[cond->parent];
    if (parent_slot == Configuration::kInactive ||
        !cond->allowed[static_cast<std::size_t>(parent_slot)]) {
      config.slots[i] = Configuration::kInactive;
    }
  }
  return config;
}

Configuration ParamSpace::resolve_activity(const RawAssignment& raw) const {
  for (const auto& [name, value] : raw) {
    if (!index_of(name)) {
      throw Error(Errc::kValueNotInDomain, "unknown parameter '" + name + "'");
    }
  }
  std::vector<std::int32_t> slots(parameters_.size());
  for (std::size_t i = 0; i < parameters_.size(); ++i) {
    const Parameter& p = parameters_[i];
    auto it = raw.find(p.name);
    const std::string& text = it == raw.end() ? p.default_value : it->second;
    auto idx = find_value(p, text);
    if (!idx) {
      throw Error(Errc::kValueNotInDomain,
                  "'" + text + "' is not a value of '" + p.name + "'");
    }
    slots[i] = static_cast<std::int32_t>(*idx);
  }
  return resolve(std::move(slots));
}

bool ParamSpace::is_valid(const Configuration& config) const {
  if (config.slots.size() != parameters_.size()) return false;
  for (std::size_t i = 0; i < parameters_.size(); ++i) {
    const std::int32_t s = config.slots[i];
    bool should_be_active = true;
    if (const auto& cond = condition_of_[i]) {
      const std::int32_t ps = config.slots[cond->parent];
      should_be_active = ps != Configuration::kInactive &&
                         cond->allowed[static_cast<std::size_t>(ps)];
    }
    if (!should_be_active) {
      if (s != Configuration::kInactive) return false;
      continue;
    }
    if (s < 0 || static_cast<std::size_t>(s) >= parameters_[i].values.size()) {
      return false;
    }
  }
  return true;
}

std::optional<std::string_view> ParamSpace::value(const Configuration& config,
                                                  std::size_t param) const {
  const std::int32_t s = config.slots[param];
  if (s == Configuration::kInactive) return std::nullopt;
  return parameters_[param].values[static_cast<std::size_t>(s)];
}

Configuration ParamSpace::default_configuration() const {
  return resolve_activity({});
}

std::vector<Configuration> ParamSpace::sample_random(Rng& rng,
                                                     std::size_t n) const {
  std::vector<Configuration> out;
  out.reserve(n);
  for (std::size_t row = 0; row < n; ++row) {
    std::vector<std::int32_t> raw(parameters_.size());
    for (std::size_t i = 0; i < parameters_.size(); ++i) {
      raw[i] = static_cast<std::int32_t>(
          rng.uniform_index(parameters_[i].values.size()));
    }
    out.push_back(resolve(std::move(raw)));
  }
  return out;
}

std::vector<Configuration> ParamSpace::sample_lhs(Rng& rng,
                                                  std::size_t n) const {
  const std::size_t d = parameters_.size();
  std::vector<std::vector<std::int32_t>> raw(n, std::vector<std::int32_t>(d));

  // Categoricals are drawn row-major exactly as sample_random draws them, so
  // an all-categorical space yields the same stream.
  for (std::size_t row = 0; row < n; ++row) {
    for (std::size_t i = 0; i < d; ++i) {
      if (parameters_[i].kind == ParamKind::kCategorical) {
        raw[row][i] = static_cast<std::int32_t>(
            rng.uniform_index(parameters_[i].values.size()));
      }
    }
  }

  // Ordinal columns: every rank appears floor(n/k) times, and n mod k
  // distinct ranks chosen at random get one extra draw. The column is then
  // shuffled across rows.
  for (std::size_t i = 0; i < d; ++i) {
    if (parameters_[i].kind != ParamKind::kOrdinal) continue;
    const std::size_t k = parameters_[i].values.size();
    std::vector<std::int32_t> column;
    column.reserve(n);
    for (std::size_t rep = 0; rep < n / k; ++rep) {
      for (std::size_t r = 0; r < k; ++r) {
        column.push_back(static_cast<std::int32_t>(r));
      }
    }
    std::vector<std::int32_t> ranks(k);
    for (std::size_t r = 0; r < k; ++r) ranks[r] = static_cast<std::int32_t>(r);
    rng.shuffle(std::span<std::int32_t>(ranks));
    for (std::size_t r = 0; r < n % k; ++r) column.push_back(ranks[r]);
    rng.shuffle(std::span<std::int32_t>(column));
    for (std::size_t row = 0; row < n; ++row) raw[row][i] = column[row];
  }

  std::vector<Configuration> out;
  out.reserve(n);
  for (auto& r : raw) out.push_back(resolve(std::move(r)));
  return out;
}

FeatureVector ParamSpace::encode(const Configuration& config) const {
  FeatureVector x(feature_length_, 0.0);
  for (std::size_t i = 0; i < parameters_.size(); ++i) {
    const Parameter& p = parameters_[i];
    const std::size_t off = feature_offset_[i];
    const std::int32_t s = config.slots[i];
    if (p.kind == ParamKind::kOrdinal) {
      const std::size_t k = p.values.size();
      if (s == Configuration::kInactive) {
        x[off] = -1.0;
      } else if (k > 1) {
        x[off] = static_cast<double>(s) / static_cast<double>(k - 1);
      }
    } else {
      if (s == Configuration::kInactive) {
        std::fill_n(x.begin() + static_cast<std::ptrdiff_t>(off),
                    p.values.size(), -1.0);
      } else {
        x[off + static_cast<std::size_t>(s)] = 1.0;
      }
    }
  }
  return x;
}

std::vector<Configuration> ParamSpace::enumerate(std::uint64_t limit) const {
  const std::uint64_t total = size();
  if (total > limit) {
    throw Error(Errc::kSpaceTooLarge, "space size " + std::to_string(total) +
                                          " exceeds limit " +
                                          std::to_string(limit));
  }
  std::vector<Configuration> out;
  out.reserve(static_cast<std::size_t>(total));
  std::vector<std::int32_t> raw(parameters_.size(), 0);
  for (std::uint64_t n = 0; n < total; ++n) {
    out.push_back(resolve(raw));
    // Odometer: the last parameter varies fastest.
    for (std::size_t i = parameters_.size(); i-- > 0;) {
      if (static_cast<std::size_t>(++raw[i]) < parameters_[i].values.size()) {
        break;
      }
      raw[i] = 0;
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

ParamSpace space_from_json(const nlohmann::json& definition) {
  auto fail = [](const std::string& what) -> Error {
    return Error(Errc::kInvalidDefinition, what);
  };
  if (!definition.is_object()) throw fail("space definition is not an object");
  if (!definition.contains("params") || !definition["params"].is_array()) {
    throw fail("'params' must be an array");
  }
  std::vector<Parameter> params;
  for (const auto& jp : definition["params"]) {
    if (!jp.is_object()) throw fail("each param must be an object");
    Parameter p;
    try {
      p.name = jp.at("name").get<std::string>();
      auto kind = parse_param_kind(jp.at("kind").get<std::string>());
      if (!kind) throw fail("param '" + p.name + "' has an unknown kind");
      p.kind = *kind;
      p.values = jp.at("values").get<std::vector<std::string>>();
      p.default_value = jp.at("default").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw fail(std::string("bad param entry: ") + e.what());
    }
    params.push_back(std::move(p));
  }
  std::vector<Condition> conditions;
  if (definition.contains("conditions")) {
    if (!definition["conditions"].is_array()) {
      throw fail("'conditions' must be an array");
    }
    for (const auto& jc : definition["conditions"]) {
      try {
        conditions.push_back(
            Condition{jc.at("child").get<std::string>(),
                      jc.at("parent").get<std::string>(),
                      jc.at("allowed").get<std::vector<std::string>>()});
      } catch (const nlohmann::json::exception& e) {
        throw fail(std::string("bad condition entry: ") + e.what());
      }
    }
  }
  std::uint64_t seed = 0;
  if (definition.contains("seed")) {
    if (!definition["seed"].is_number_unsigned()) {
      throw fail("'seed' must be a non-negative integer");
    }
    seed = definition["seed"].get<std::uint64_t>();
  }
  return ParamSpace(std::move(params), std::move(conditions), seed);
}

nlohmann::ordered_json space_to_json(const ParamSpace& space) {
  nlohmann::ordered_json out;
  out["seed"] = space.seed();
  out["params"] = nlohmann::ordered_json::array();
  for (const Parameter& p : space.parameters()) {
    nlohmann::ordered_json jp;
    jp["name"] = p.name;
    jp["kind"] = std::string(param_kind_name(p.kind));
    jp["values"] = p.values;
    jp["default"] = p.default_value;
    out["params"].push_back(std::move(jp));
  }
  out["conditions"] = nlohmann::ordered_json::array();
  for (const Condition& c : space.conditions()) {
    nlohmann::ordered_json jc;
    jc["child"] = c.child;
    jc["parent"] = c.parent;
    jc["allowed"] = c.allowed;
    out["conditions"].push_back(std::move(jc));
  }
  return out;
}

}  // namespace pragmatune
