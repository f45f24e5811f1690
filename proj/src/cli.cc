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

#include "pragmatune/cli.h"

#include <filesystem>
#include <fstream>
#include <iterator>
#include <memory>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"
#include "pragmatune/error.h"
#include "pragmatune/evaluator.h"
#include "pragmatune/optimizer.h"
#include "pragmatune/perfdb.h"
#include "pragmatune/problem.h"
#include "pragmatune/report.h"

namespace pragmatune {
namespace {

namespace fs = std::filesystem;

constexpr const char* kSpaceSnapshot = "space.json";

struct GlobalFlags {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  bool clean = false;
};

struct TuneFlags {
  std::string problem;
  std::size_t max_evals = 100;
  std::string learner = "RF";
  std::optional<std::size_t> n_init;
  double kappa = 1.96;
  std::size_t candidate_pool = 4096;
  bool mock = false;
};

void write_text(const fs::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw Error(Errc::kIoError, "cannot write " + path.string());
}

std::optional<Problem> load_or_report(const std::string& path,
                                      std::ostream& err) {
  try {
    return load_problem(path);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return std::nullopt;
  }
}

int cmd_tune(const GlobalFlags& global, const TuneFlags& flags,
             std::ostream& out, std::ostream& err) {
  auto problem = load_or_report(flags.problem, err);
  if (!problem) return kExitInvalidProblem;
  auto learner = parse_learner(flags.learner);
  if (!learner) {
    err << "error: unknown learner '" << flags.learner
        << "' (expected RF, ET, GBRT or GP)\n";
    return kExitError;
  }

  TuneOptions options;
  options.max_evals = flags.max_evals;
  options.learner = *learner;
  options.n_init = flags.n_init;
  options.kappa = flags.kappa;
  options.candidate_pool = flags.candidate_pool;
  options.seed = global.seed.value_or(problem->space.seed());

  const fs::path out_dir = global.out_dir.value_or("results");
  std::unique_ptr<Evaluator> evaluator;
  if (flags.mock || problem->mock_objective) {
    if (!problem->mock_objective) {
      err << "error: --mock needs a 'mock_objective' in " << flags.problem
          << "\n";
      return kExitInvalidProblem;
    }
    evaluator = std::make_unique<MockEvaluator>(
        problem->space, *problem->mock_objective, problem->space.seed());
    options.clock = logical_clock();
  } else {
    evaluator = std::make_unique<CompileRunEvaluator>(
        problem->space, CodeMold::from_file(problem->mold_path),
        problem->recipe, problem->policy, out_dir, global.clean);
  }

  PerfDb db = PerfDb::create(problem->space, out_dir);
  auto snapshot = space_to_json(problem->space);
  snapshot["name"] = problem->name;
  write_text(out_dir / kSpaceSnapshot, snapshot.dump(2) + "\n");

  options.on_record = [&err](const EvalRecord& r) {
    err << "eval " << r.index << ": " << eval_status_name(r.status);
    if (r.objective) err << " " << format_seconds(*r.objective);
    if (r.duplicate_of) err << " (same as " << *r.duplicate_of << ")";
    err << "\n";
  };
  const TuneResult result = tune(problem->space, options, *evaluator, db);
  const RecordCounts counts = count_records(result.trace);

  out << "problem=" << problem->name << " learner=" << learner_name(*learner)
      << " seed=" << options.seed << "\n";
  out << "proposed=" << result.proposed << " evaluated=" << result.evaluated
      << " duplicate=" << counts.duplicate << " failed=" << counts.failed
      << "\n";
  if (!result.best) {
    err << "error: no evaluation succeeded\n";
    return kExitNoSuccess;
  }
  out << "best=" << format_seconds(*result.best->objective)
      << " at evaluation " << result.best_index << "\n";
  out << format_configuration(problem->space, result.best->config);
  return kExitOk;
}

// Loads the database written by `tune` into `dir`. Missing files mean there
// is nothing to report.
std::optional<PerfDb> load_results(const fs::path& dir, std::ostream& err,
                                   int& exit_code) {
  if (!fs::exists(dir / kSpaceSnapshot) || !fs::exists(dir / PerfDb::kCsvName)) {
    err << "error: no results in " << dir.string() << "\n";
    exit_code = kExitNoSuccess;
    return std::nullopt;
  }
  try {
    std::ifstream in(dir / kSpaceSnapshot);
    const auto snapshot = nlohmann::json::parse(in);
    return PerfDb::load(space_from_json(snapshot), dir);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    exit_code = kExitError;
    return std::nullopt;
  }
}

int cmd_report(const std::string& dir, std::ostream& out, std::ostream& err) {
  int code = kExitOk;
  auto db = load_results(dir, err, code);
  if (!db) return code;
  try {
    out << render_report(*db);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitNoSuccess;
  }
  return kExitOk;
}

int cmd_plot(const GlobalFlags& global, const std::string& dir,
             const std::optional<std::string>& out_path, std::ostream& out,
             std::ostream& err) {
  int code = kExitOk;
  auto db = load_results(dir, err, code);
  if (!db) return code;
  fs::path svg_path = out_path ? fs::path(*out_path)
                               : fs::path(global.out_dir.value_or(dir)) /
                                     "trace.svg";
  const auto rows = trace_rows(db->records());
  std::string svg;
  try {
    svg = trace_svg(rows, "Autotuning trace");
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitNoSuccess;
  }
  const fs::path parent =
      svg_path.has_parent_path() ? svg_path.parent_path() : fs::path(".");
  fs::create_directories(parent);
  write_text(svg_path, svg);
  write_text(parent / "trace.csv", trace_csv(rows));
  out << "wrote " << svg_path.string() << " and "
      << (parent / "trace.csv").string() << "\n";
  return kExitOk;
}

int cmd_validate(const std::string& path, std::ostream& out,
                 std::ostream& err) {
  const ProblemCheck check = check_problem(path);
  for (const std::string& e : check.errors) err << "error: " << e << "\n";
  for (const std::string& w : check.warnings) err << "warning: " << w << "\n";
  if (!check.errors.empty()) return kExitInvalidProblem;
  out << path << ": ok\n";
  return kExitOk;
}

int cmd_enumerate(const std::string& path, std::uint64_t limit, bool distinct,
                  bool list, std::ostream& out, std::ostream& err) {
  auto problem = load_or_report(path, err);
  if (!problem) return kExitInvalidProblem;
  const ParamSpace& space = problem->space;
  try {
    out << "size=" << space.size() << "\n";
    if (distinct || list) {
      const auto all = space.enumerate(limit);
      out << "distinct=" << all.size() << "\n";
      if (list) {
        for (const Configuration& c : all) {
          for (std::size_t i = 0; i < space.num_parameters(); ++i) {
            auto v = space.value(c, i);
            out << (i ? " | " : "") << (v ? std::string(*v) : "<inactive>");
          }
          out << "\n";
        }
      }
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Bayesian-optimization autotuner for pragma-parameterized code",
               "pragmatune"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalFlags global;
  app.add_option("--seed", global.seed, "Random seed (default: problem seed)");
  app.add_option("--out-dir", global.out_dir, "Output directory");
  app.add_flag("--clean", global.clean,
               "Remove per-evaluation build directories");

  TuneFlags tune_flags;
  auto* tune_cmd = app.add_subcommand("tune", "Search a problem's space");
  tune_cmd->add_option("problem", tune_flags.problem, "Problem file")
      ->required();
  tune_cmd
      ->add_option("--max-evals,--max-vals", tune_flags.max_evals,
                   "Proposal budget")
      ->check(CLI::PositiveNumber);
  tune_cmd->add_option("--learner", tune_flags.learner, "RF, ET, GBRT or GP");
  tune_cmd->add_option("--n-init", tune_flags.n_init, "Initial design size")
      ->check(CLI::PositiveNumber);
  tune_cmd->add_option("--kappa", tune_flags.kappa, "LCB exploration weight")
      ->check(CLI::NonNegativeNumber);
  tune_cmd
      ->add_option("--candidate-pool", tune_flags.candidate_pool,
                   "Candidates scored per proposal")
      ->check(CLI::PositiveNumber);
  tune_cmd->add_flag("--mock", tune_flags.mock,
                     "Use the problem's synthetic objective (implied when "
                     "the problem names one)");

  std::string results_dir;
  auto* report_cmd = app.add_subcommand("report", "Summarize a results directory");
  report_cmd->add_option("results_dir", results_dir)->required();

  std::optional<std::string> plot_out;
  auto* plot_cmd = app.add_subcommand("plot", "Write the trace plot");
  plot_cmd->add_option("results_dir", results_dir)->required();
  plot_cmd->add_option("out_path", plot_out, "SVG path");

  std::string problem_path;
  auto* validate_cmd = app.add_subcommand("validate", "Check a problem file");
  validate_cmd->add_option("problem", problem_path)->required();

  std::uint64_t limit = 1'000'000;
  bool distinct = false;
  bool list = false;
  auto* enumerate_cmd =
      app.add_subcommand("enumerate", "Count a problem's configurations");
  enumerate_cmd->add_option("problem", problem_path)->required();
  enumerate_cmd->add_option("--limit", limit, "Largest space to enumerate");
  enumerate_cmd->add_flag("--distinct", distinct,
                          "Also count activity-resolved distinct configurations");
  enumerate_cmd->add_flag("--list", list, "Print every distinct configuration");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (tune_cmd->parsed()) return cmd_tune(global, tune_flags, out, err);
    if (report_cmd->parsed()) return cmd_report(results_dir, out, err);
    if (plot_cmd->parsed()) return cmd_plot(global, results_dir, plot_out, out, err);
    if (validate_cmd->parsed()) return cmd_validate(problem_path, out, err);
    if (enumerate_cmd->parsed()) {
      return cmd_enumerate(problem_path, limit, distinct, list, out, err);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace pragmatune
