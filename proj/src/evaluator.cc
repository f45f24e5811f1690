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

#include "pragmatune/evaluator.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <mutex>
#include <numeric>
#include <regex>
#include <sstream>

#include "pragmatune/error.h"
#include "subprocess.h"

namespace pragmatune {
namespace {

std::mutex& evaluation_mutex() {
  static std::mutex m;
  return m;
}

void replace_all(std::string& s, std::string_view from, std::string_view to) {
  for (std::size_t pos = s.find(from); pos != std::string::npos;
       pos = s.find(from, pos + to.size())) {
    s.replace(pos, from.size(), to);
  }
}

void write_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(Errc::kIoError, "cannot write " + path.string());
}

}  // namespace

std::string_view eval_status_name(EvalStatus status) {
  switch (status) {
    case EvalStatus::kOk: return "ok";
    case EvalStatus::kCompileError: return "compile_error";
    case EvalStatus::kRunError: return "run_error";
    case EvalStatus::kTimeout: return "timeout";
    case EvalStatus::kDuplicate: return "duplicate";
  }
  return "?";
}

std::optional<EvalStatus> parse_eval_status(std::string_view text) {
  for (EvalStatus s : {EvalStatus::kOk, EvalStatus::kCompileError,
                       EvalStatus::kRunError, EvalStatus::kTimeout,
                       EvalStatus::kDuplicate}) {
    if (eval_status_name(s) == text) return s;
  }
  return std::nullopt;
}

std::string_view aggregation_name(Aggregation a) {
  switch (a) {
    case Aggregation::kMin: return "min";
    case Aggregation::kMean: return "mean";
    case Aggregation::kMedian: return "median";
  }
  return "?";
}

std::optional<Aggregation> parse_aggregation(std::string_view text) {
  for (Aggregation a :
       {Aggregation::kMin, Aggregation::kMean, Aggregation::kMedian}) {
    if (aggregation_name(a) == text) return a;
  }
  return std::nullopt;
}

std::string_view objective_source_name(ObjectiveSource s) {
  return s == ObjectiveSource::kWallTime ? "walltime" : "program-stdout";
}

std::optional<ObjectiveSource> parse_objective_source(std::string_view text) {
  if (text == "program-stdout") return ObjectiveSource::kProgramStdout;
  if (text == "walltime") return ObjectiveSource::kWallTime;
  return std::nullopt;
}

double aggregate(std::span<const double> runs, Aggregation aggregation) {
  if (runs.empty()) throw Error(Errc::kInvalidArgument, "no runs to aggregate");
  switch (aggregation) {
    case Aggregation::kMin:
      return *std::min_element(runs.begin(), runs.end());
    case Aggregation::kMean:
      return std::accumulate(runs.begin(), runs.end(), 0.0) /
             static_cast<double>(runs.size());
    case Aggregation::kMedian: {
      std::vector<double> sorted(runs.begin(), runs.end());
      std::sort(sorted.begin(), sorted.end());
      const std::size_t mid = sorted.size() / 2;
      return sorted.size() % 2 == 1 ? sorted[mid]
                                    : 0.5 * (sorted[mid - 1] + sorted[mid]);
    }
  }
  return runs.front();
}

std::optional<double> parse_last_float(std::string_view text) {
  static const std::regex number(
      R"([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)");
  std::optional<double> last;
  const std::string s(text);
  for (auto it = std::sregex_iterator(s.begin(), s.end(), number);
       it != std::sregex_iterator(); ++it) {
    const double v = std::strtod(it->str().c_str(), nullptr);
    if (std::isfinite(v)) last = v;
  }
  return last;
}

std::vector<std::string> expand_command(std::string_view command_template,
                                        const std::filesystem::path& src,
                                        const std::filesystem::path& bin,
                                        std::span<const std::string> flags) {
  std::vector<std::string> argv;
  std::istringstream words{std::string(command_template)};
  std::string word;
  while (words >> word) {
    if (word == "{flags}") {
      argv.insert(argv.end(), flags.begin(), flags.end());
      continue;
    }
    replace_all(word, "{src}", src.string());
    replace_all(word, "{bin}", bin.string());
    argv.push_back(std::move(word));
  }
  return argv;
}

Measurement evaluate(const BuildRecipe& recipe, std::string_view source,
                     const std::filesystem::path& workdir,
                     const MeasurementPolicy& policy, std::size_t eval_index) {
  std::lock_guard<std::mutex> lock(evaluation_mutex());
  const auto start = std::chrono::steady_clock::now();
  auto finish = [&](Measurement m) {
    m.elapsed = std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - start)
                    .count();
    return m;
  };

  std::error_code ec;
  std::filesystem::create_directories(workdir, ec);
  const std::filesystem::path dir = std::filesystem::absolute(workdir);
  const std::filesystem::path src = dir / recipe.source_name;
  const std::filesystem::path bin =
      dir / std::filesystem::path(recipe.source_name).stem();
  write_file(src, source);

  const std::vector<std::pair<std::string, std::string>> env{
      {"PRAGMATUNE_EVAL_INDEX", std::to_string(eval_index)}};

  const auto compile =
      detail::run_process(expand_command(recipe.compile_template, src, bin,
                                         recipe.flags),
                          dir, env, policy.timeout_sec);
  if (compile.timed_out || compile.spawn_failed || compile.exit_code != 0) {
    Measurement m;
    m.status = compile.timed_out ? EvalStatus::kTimeout
                                 : EvalStatus::kCompileError;
    m.diagnostics = compile.err + compile.out;
    write_file(dir / "compile.log", m.diagnostics);
    return finish(std::move(m));
  }

  Measurement m;
  const auto run_argv =
      expand_command(recipe.run_template, src, bin, recipe.flags);
  for (int r = 0; r < policy.repeats; ++r) {
    const auto run = detail::run_process(run_argv, dir, env, policy.timeout_sec);
    if (run.timed_out) {
      m.status = EvalStatus::kTimeout;
      m.diagnostics = "run " + std::to_string(r + 1) + " exceeded " +
                      std::to_string(policy.timeout_sec) + " s";
      break;
    }
    if (run.spawn_failed || run.exit_code != 0) {
      m.status = EvalStatus::kRunError;
      m.diagnostics = "exit " + std::to_string(run.exit_code) + "\n" +
                      run.err + run.out;
      break;
    }
    if (policy.objective_source == ObjectiveSource::kWallTime) {
      m.runs.push_back(run.seconds);
    } else if (auto v = parse_last_float(run.out)) {
      m.runs.push_back(*v);
    } else {
      m.status = EvalStatus::kRunError;
      m.diagnostics = "no number on standard output\n" + run.out;
      break;
    }
    if (r + 1 == policy.repeats) write_file(dir / "run.log", run.out + run.err);
  }
  if (m.status == EvalStatus::kOk) {
    m.objective = aggregate(m.runs, policy.aggregation);
  } else {
    m.runs.clear();
    write_file(dir / "run.log", m.diagnostics);
  }
  return finish(std::move(m));
}

CompileRunEvaluator::CompileRunEvaluator(ParamSpace space, CodeMold mold,
                                         BuildRecipe recipe,
                                         MeasurementPolicy policy,
                                         std::filesystem::path out_dir,
                                         bool clean)
    : space_(std::move(space)),
      mold_(std::move(mold)),
      recipe_(std::move(recipe)),
      policy_(policy),
      out_dir_(std::move(out_dir)),
      clean_(clean) {}

Measurement CompileRunEvaluator::evaluate(const Configuration& config,
                                          std::size_t eval_index) {
  const auto workdir = out_dir_ / ("eval_" + std::to_string(eval_index));
  const auto source = instantiate(mold_, space_, config);
  Measurement m =
      pragmatune::evaluate(recipe_, source.text, workdir, policy_, eval_index);
  if (clean_) {
    std::error_code ec;
    std::filesystem::remove_all(workdir, ec);
  }
  return m;
}

MockObjective::MockObjective(const ParamSpace& space,
                             std::string_view objective_id, std::uint64_t seed)
    : space_(space) {
  if (objective_id == "sphere") {
    shape_ = Shape::kSphere;
  } else if (objective_id == "plateau") {
    shape_ = Shape::kPlateau;
  } else if (objective_id == "cliff") {
    shape_ = Shape::kCliff;
  } else {
    throw Error(Errc::kUnknownObjective, std::string(objective_id));
  }
  Rng rng(seed);
  offsets_.resize(space.num_parameters());
  for (std::size_t i = 0; i < space.num_parameters(); ++i) {
    const Parameter& p = space.parameter(i);
    if (p.kind != ParamKind::kCategorical) continue;
    for (std::size_t c = 0; c <= p.values.size(); ++c) {
      offsets_[i].push_back(rng.uniform(0.1, 1.0));
    }
  }
}

bool MockObjective::is_known(std::string_view objective_id) {
  return objective_id == "sphere" || objective_id == "plateau" ||
         objective_id == "cliff";
}

double MockObjective::offset(std::size_t param, std::int32_t choice) const {
  return offsets_[param][static_cast<std::size_t>(choice + 1)];
}

double MockObjective::operator()(const Configuration& config) const {
  const FeatureVector x = space_.encode(config);
  double value = 0.0;
  bool any_inactive = false;
  std::size_t off = 0;
  for (std::size_t i = 0; i < space_.num_parameters(); ++i) {
    const Parameter& p = space_.parameter(i);
    any_inactive = any_inactive || !config.is_active(i);
    if (p.kind == ParamKind::kOrdinal) {
      const double d = x[off] - kOrdinalTarget;
      value += d * d;
      off += 1;
    } else {
      value += offset(i, config.slots[i]);
      off += p.values.size();
    }
  }
  switch (shape_) {
    case Shape::kSphere: return value;
    case Shape::kPlateau: return std::round(value * 100.0) / 100.0;
    case Shape::kCliff: return any_inactive ? value + kCliffPenalty : value;
  }
  return value;
}

Measurement mock_evaluate(const ParamSpace& space, const Configuration& config,
                          std::string_view objective_id, std::uint64_t seed) {
  const double v = MockObjective(space, objective_id, seed)(config);
  Measurement m;
  m.objective = v;
  m.runs = {v};
  return m;
}

Measurement MockEvaluator::evaluate(const Configuration& config, std::size_t) {
  const double v = objective_(config);
  Measurement m;
  m.objective = v;
  m.runs = {v};
  return m;
}

}  // namespace pragmatune
