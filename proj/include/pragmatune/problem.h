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

#ifndef PRAGMATUNE_PROBLEM_H_
#define PRAGMATUNE_PROBLEM_H_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pragmatune/evaluator.h"
#include "pragmatune/space.h"

namespace pragmatune {

// One tuning problem, read from a JSON problem file:
//   name, mold (path relative to the file), params, conditions, seed,
//   compile, run, repeats, aggregation, timeout_sec, objective_source,
//   optional flag_preset and mock_objective. Other keys are ignored.
struct Problem {
  std::string name;
  std::filesystem::path mold_path;
  ParamSpace space;
  BuildRecipe recipe;
  MeasurementPolicy policy;
  std::optional<std::string> flag_preset;
  std::optional<std::string> mock_objective;
};

struct ProblemCheck {
  std::optional<Problem> problem;  // set when `errors` is empty
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
};

// Never throws; every violation becomes a message.
ProblemCheck check_problem(const std::filesystem::path& path);

// Throws kInvalidProblem listing the violations.
Problem load_problem(const std::filesystem::path& path);

}  // namespace pragmatune

#endif  // PRAGMATUNE_PROBLEM_H_
