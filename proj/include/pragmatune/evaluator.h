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

#ifndef PRAGMATUNE_EVALUATOR_H_
#define PRAGMATUNE_EVALUATOR_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pragmatune/space.h"
#include "pragmatune/templater.h"

namespace pragmatune {

enum class EvalStatus { kOk, kCompileError, kRunError, kTimeout, kDuplicate };

std::string_view eval_status_name(EvalStatus status);
std::optional<EvalStatus> parse_eval_status(std::string_view text);

enum class Aggregation { kMin, kMean, kMedian };
enum class ObjectiveSource { kProgramStdout, kWallTime };

std::string_view aggregation_name(Aggregation a);
std::optional<Aggregation> parse_aggregation(std::string_view text);
std::string_view objective_source_name(ObjectiveSource s);
std::optional<ObjectiveSource> parse_objective_source(std::string_view text);

struct MeasurementPolicy {
  int repeats = 3;
  Aggregation aggregation = Aggregation::kMin;
  double timeout_sec = 300.0;
  ObjectiveSource objective_source = ObjectiveSource::kProgramStdout;
};

struct Measurement {
  std::optional<double> objective;  // set iff status == kOk
  std::vector<double> runs;
  double elapsed = 0.0;
  EvalStatus status = EvalStatus::kOk;
  // Compiler or program output explaining a failure.
  std::string diagnostics;
};

// Throws kInvalidArgument for an empty span.
double aggregate(std::span<const double> runs, Aggregation aggregation);

// Last number printed on a program's standard output (PolyBench prints its
// timing as the final line).
std::optional<double> parse_last_float(std::string_view text);

// How to turn a generated source into a timed binary. Templates are split on
// whitespace into argument vectors; `{src}` and `{bin}` are replaced inside
// each argument and a standalone `{flags}` argument expands to `flags`.
struct BuildRecipe {
  std::string compile_template;
  std::string run_template;
  std::vector<std::string> flags;
  std::string source_name = "kernel.c";
};

std::vector<std::string> expand_command(std::string_view command_template,
                                        const std::filesystem::path& src,
                                        const std::filesystem::path& bin,
                                        std::span<const std::string> flags);

// Writes `source` into `workdir`, compiles it and runs the binary
// `policy.repeats` times back to back. Failures come back as a status, never
// as an exception (apart from an unwritable workdir, kIoError). Calls are
// serialized process-wide.
Measurement evaluate(const BuildRecipe& recipe, std::string_view source,
                     const std::filesystem::path& workdir,
                     const MeasurementPolicy& policy, std::size_t eval_index);

class Evaluator {
 public:
  virtual ~Evaluator() = default;
  virtual Measurement evaluate(const Configuration& config,
                               std::size_t eval_index) = 0;
};

// Instantiates the mold into `<out_dir>/eval_<index>/` and measures it.
class CompileRunEvaluator final : public Evaluator {
 public:
  CompileRunEvaluator(ParamSpace space, CodeMold mold, BuildRecipe recipe,
                      MeasurementPolicy policy, std::filesystem::path out_dir,
                      bool clean);

  Measurement evaluate(const Configuration& config,
                       std::size_t eval_index) override;

 private:
  ParamSpace space_;
  CodeMold mold_;
  BuildRecipe recipe_;
  MeasurementPolicy policy_;
  std::filesystem::path out_dir_;
  bool clean_;
};

// Synthetic objectives over the encoded configuration:
//   sphere  - sum of (x - 0.3)^2 over ordinal coordinates plus a per-choice
//             offset in [0.1, 1) for every categorical (inactive counts as
//             its own choice); offsets come from the seed.
//   plateau - sphere rounded to two decimals.
//   cliff   - sphere plus kCliffPenalty when any parameter is inactive.
class MockObjective {
 public:
  static constexpr double kCliffPenalty = 100.0;
  static constexpr double kOrdinalTarget = 0.3;

  // Throws kUnknownObjective.
  MockObjective(const ParamSpace& space, std::string_view objective_id,
                std::uint64_t seed);

  double operator()(const Configuration& config) const;

  // Offset for `choice` of categorical parameter `param`; choice -1 is the
  // inactive slot.
  double offset(std::size_t param, std::int32_t choice) const;

  static bool is_known(std::string_view objective_id);

 private:
  enum class Shape { kSphere, kPlateau, kCliff };
  ParamSpace space_;
  Shape shape_;
  // [param][choice + 1]; empty for ordinals.
  std::vector<std::vector<double>> offsets_;
};

// Pure; always status ok with zero elapsed time.
Measurement mock_evaluate(const ParamSpace& space, const Configuration& config,
                          std::string_view objective_id, std::uint64_t seed);

class MockEvaluator final : public Evaluator {
 public:
  MockEvaluator(const ParamSpace& space, std::string_view objective_id,
                std::uint64_t seed)
      : objective_(space, objective_id, seed) {}

  Measurement evaluate(const Configuration& config, std::size_t) override;

 private:
  MockObjective objective_;
};

}  // namespace pragmatune

#endif  // PRAGMATUNE_EVALUATOR_H_
