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

#ifndef PRAGMATUNE_SPACE_H_
#define PRAGMATUNE_SPACE_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "pragmatune/rng.h"

namespace pragmatune {

enum class ParamKind { kCategorical, kOrdinal };

std::string_view param_kind_name(ParamKind kind);
std::optional<ParamKind> parse_param_kind(std::string_view text);

struct Parameter {
  std::string name;
  ParamKind kind = ParamKind::kCategorical;
  // Choices for categoricals, the ordered sequence for ordinals.
  std::vector<std::string> values;
  std::string default_value;

  friend bool operator==(const Parameter&, const Parameter&) = default;
};

// `child` is active iff `parent` is active and its value is in `allowed`.
struct Condition {
  std::string child;
  std::string parent;
  std::vector<std::string> allowed;

  friend bool operator==(const Condition&, const Condition&) = default;
};

// A full assignment over a space, one slot per parameter in canonical order.
// Slots hold the value index, or kInactive for parameters whose condition is
// unsatisfied.
struct Configuration {
  static constexpr std::int32_t kInactive = -1;

  std::vector<std::int32_t> slots;

  bool is_active(std::size_t param) const { return slots[param] != kInactive; }

  friend bool operator==(const Configuration&, const Configuration&) = default;
  friend auto operator<=>(const Configuration&, const Configuration&) = default;
};

struct ConfigurationHash {
  std::size_t operator()(const Configuration& config) const noexcept;
};

using FeatureVector = std::vector<double>;

// Name -> value text. Missing entries fall back to the parameter default.
using RawAssignment = std::map<std::string, std::string, std::less<>>;

class ParamSpace {
 public:
  // Validates and freezes a definition. Throws Error with kDuplicateName,
  // kUnknownConditionTarget, kDefaultNotInValues, kCyclicCondition or
  // kInvalidDefinition.
  ParamSpace(std::vector<Parameter> parameters,
             std::vector<Condition> conditions, std::uint64_t seed = 0);

  const std::vector<Parameter>& parameters() const { return parameters_; }
  const std::vector<Condition>& conditions() const { return conditions_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t num_parameters() const { return parameters_.size(); }

  std::optional<std::size_t> index_of(std::string_view name) const;
  const Parameter& parameter(std::size_t i) const { return parameters_[i]; }
  bool has_ordinal() const;

  // Cross product of value counts, ignoring conditions. Throws kOverflow.
  std::uint64_t size() const;

  // Applies activation conditions to a raw per-slot index assignment.
  // Every raw slot must be a valid value index; the result marks
  // parameters with unsatisfied conditions kInactive.
  Configuration resolve(std::vector<std::int32_t> raw) const;

  // Throws kValueNotInDomain for unknown names or values.
  Configuration resolve_activity(const RawAssignment& raw) const;

  bool is_valid(const Configuration& config) const;

  // Value text for slot `param`; std::nullopt when inactive.
  std::optional<std::string_view> value(const Configuration& config,
                                        std::size_t param) const;

  Configuration default_configuration() const;

  std::vector<Configuration> sample_random(Rng& rng, std::size_t n) const;
  std::vector<Configuration> sample_lhs(Rng& rng, std::size_t n) const;

  std::size_t feature_length() const { return feature_length_; }
  FeatureVector encode(const Configuration& config) const;

  // All distinct activity-resolved configurations in lexicographic slot
  // order (inactive sorts first). Throws kSpaceTooLarge if size() > limit.
  std::vector<Configuration> enumerate(std::uint64_t limit) const;

 private:
  std::vector<Parameter> parameters_;
  std::vector<Condition> conditions_;
  std::uint64_t seed_;

  struct ResolvedCondition {
    std::size_t parent;
    std::vector<bool> allowed;  // indexed by parent value
  };
  // Per parameter; empty when unconditioned.
  std::vector<std::optional<ResolvedCondition>> condition_of_;
  // Parents before children.
  std::vector<std::size_t> activation_order_;
  std::vector<std::size_t> feature_offset_;
  std::size_t feature_length_ = 0;
};

// Problem-file space section: {"params": [...], "conditions": [...],
// "seed": n}. Throws Error (kInvalidDefinition for shape errors, plus the
// ParamSpace constructor errors).
ParamSpace space_from_json(const nlohmann::json& definition);
nlohmann::ordered_json space_to_json(const ParamSpace& space);

}  // namespace pragmatune

#endif  // PRAGMATUNE_SPACE_H_
