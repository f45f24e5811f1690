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

// Runs every acceptance criterion and prints one PASS/FAIL/SKIP line each.
// Exit status is nonzero iff a criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "pragmatune/cli.h"
#include "pragmatune/error.h"
#include "pragmatune/evaluator.h"
#include "pragmatune/optimizer.h"
#include "pragmatune/perfdb.h"
#include "pragmatune/problem.h"
#include "pragmatune/rng.h"
#include "pragmatune/surrogate.h"
#include "pragmatune/templater.h"
#include "test_util.h"

namespace pragmatune {
namespace {

enum class Verdict { kPass, kFail, kSkip };

struct Outcome {
  Verdict verdict;
  std::string detail;
};

Outcome pass(std::string detail) { return {Verdict::kPass, std::move(detail)}; }
Outcome fail(std::string detail) { return {Verdict::kFail, std::move(detail)}; }

std::string fixed(double v, int digits = 4) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(digits);
  s << v;
  return s.str();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

int cli(const std::vector<std::string>& args, std::string* out = nullptr) {
  std::ostringstream o;
  std::ostringstream e;
  const int code = run_cli(args, o, e);
  if (out) *out = o.str();
  return code;
}

Problem problem(const std::string& name) {
  return load_problem(testing::problem_path(name));
}

double enumerated_minimum(const ParamSpace& space, const std::string& objective) {
  const MockObjective f(space, objective, space.seed());
  double best = INFINITY;
  for (const Configuration& c : space.enumerate(1u << 20)) best = std::min(best, f(c));
  return best;
}

TuneResult tune_mock(const ParamSpace& space, const std::string& objective,
                     Learner learner, std::size_t max_evals, std::uint64_t seed) {
  TuneOptions options;
  options.learner = learner;
  options.max_evals = max_evals;
  options.seed = seed;
  options.clock = logical_clock();
  MockEvaluator evaluator(space, objective, space.seed());
  PerfDb db(space);
  return tune(space, options, evaluator, db);
}

Outcome space_counts() {
  std::string a;
  std::string b;
  const int ca = cli({"enumerate", testing::problem_path("syr2k").string()}, &a);
  const int cb = cli({"enumerate", testing::problem_path("3mm").string()}, &b);
  const bool ok = ca == 0 && cb == 0 && a == "size=10648\n" && b == "size=170368\n";
  auto trim = [](std::string s) { return s.substr(0, s.find('\n')); };
  const std::string detail = "syr2k " + trim(a) + ", 3mm " + trim(b);
  return ok ? pass(detail) : fail(detail);
}

Outcome condition_invariants() {
  const Problem p = problem("syr2k");
  const ParamSpace& space = p.space;
  const std::string pack_a = space.conditions().at(0).allowed.at(0);
  Rng rng(2024);
  std::size_t violations = 0;
  std::size_t checked = 0;
  for (const auto& batch : {space.sample_random(rng, 10000), space.sample_lhs(rng, 10000)}) {
    for (const Configuration& c : batch) {
      ++checked;
      const bool packs_a = space.value(c, 0) == pack_a;
      if (c.is_active(1) != packs_a || !space.is_valid(c)) ++violations;
      for (std::size_t i = 0; i < space.num_parameters(); ++i) {
        if (i != 1 && !c.is_active(i)) ++violations;
      }
    }
  }
  const std::string detail = std::to_string(checked) + " samples, " +
                             std::to_string(violations) + " violations";
  return checked == 20000 && violations == 0 ? pass(detail) : fail(detail);
}

Outcome tiny_oracle() {
  const Problem p = problem("mock_tiny");
  const double optimum = enumerated_minimum(p.space, "sphere");
  int hits = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const TuneResult r = tune_mock(p.space, "sphere", Learner::kRF, 60, seed);
    if (r.best && *r.best->objective <= quantize_seconds(optimum)) ++hits;
  }
  const std::string detail = std::to_string(hits) + "/20 seeds reach " + fixed(optimum, 6);
  return hits >= 18 ? pass(detail) : fail(detail);
}

Outcome bo_beats_random() {
  const Problem p = problem("mock_syr2k");
  const ParamSpace& space = p.space;
  const double optimum = quantize_seconds(enumerated_minimum(space, "sphere"));
  const MockObjective f(space, "sphere", space.seed());
  constexpr std::size_t kBudget = 200;

  std::vector<double> random_best;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Rng rng(seed);
    double best = INFINITY;
    for (const Configuration& c : space.sample_random(rng, kBudget)) {
      best = std::min(best, quantize_seconds(f(c)));
    }
    random_best.push_back(best);
  }
  const double random_median = median(random_best);

  bool ok = true;
  std::string detail = "random " + fixed(random_median);
  double rf_median = 0.0;
  for (Learner learner : {Learner::kRF, Learner::kET, Learner::kGBRT}) {
    std::vector<double> best;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      best.push_back(*tune_mock(space, "sphere", learner, kBudget, seed).best->objective);
    }
    const double m = median(best);
    if (learner == Learner::kRF) rf_median = m;
    ok = ok && m <= random_median;
    detail += ", " + std::string(learner_name(learner)) + " " + fixed(m);
  }
  const double rf_regret = rf_median - optimum;
  const double random_regret = random_median - optimum;
  ok = ok && rf_regret <= 0.5 * random_regret;
  detail += "; regret RF " + fixed(rf_regret) + " vs random " + fixed(random_regret);
  return ok ? pass(detail) : fail(detail);
}

Outcome gp_duplicates() {
  const Problem p = problem("mock_tiny");
  TuneOptions options;
  options.learner = Learner::kGP;
  options.max_evals = 200;
  options.seed = p.space.seed();
  options.clock = logical_clock();
  MockEvaluator evaluator(p.space, "sphere", p.space.seed());
  PerfDb db(p.space);
  const TuneResult r = tune(p.space, options, evaluator, db);
  std::size_t duplicates = 0;
  for (const EvalRecord& rec : db.records()) {
    if (rec.status == EvalStatus::kDuplicate && rec.duplicate_of) ++duplicates;
  }
  const bool ok = r.proposed == 200 && r.evaluated <= 64 && db.size() == 200 &&
                  duplicates == 200 - r.evaluated;
  const std::string detail = "proposed=" + std::to_string(r.proposed) +
                             " evaluated=" + std::to_string(r.evaluated) +
                             " duplicate=" + std::to_string(duplicates);
  return ok ? pass(detail) : fail(detail);
}

double r_squared(const SurrogateModel& model, const TrainingSet& data) {
  const auto pred = model.predict(data.x);
  double mean = 0.0;
  for (double y : data.y) mean += y;
  mean /= static_cast<double>(data.y.size());
  double res = 0.0;
  double tot = 0.0;
  for (std::size_t i = 0; i < data.y.size(); ++i) {
    res += (data.y[i] - pred[i].mean) * (data.y[i] - pred[i].mean);
    tot += (data.y[i] - mean) * (data.y[i] - mean);
  }
  return 1.0 - res / tot;
}

Outcome surrogate_sanity() {
  TrainingSet line;
  for (double x : {0.0, 0.2, 0.4, 0.6, 0.8, 1.0}) {
    line.x.push_back({x});
    line.y.push_back(3.0 * x - 1.0);
  }
  const SurrogateModel gp = fit(SurrogateKind::kGaussianProcess, line, 0);
  double worst_mean = 0.0;
  double worst_sigma = 0.0;
  for (std::size_t i = 0; i < line.y.size(); ++i) {
    const Prediction p = gp.predict_one(line.x[i]);
    worst_mean = std::max(worst_mean, std::abs(p.mean - line.y[i]));
    worst_sigma = std::max(worst_sigma, p.sigma);
  }

  Rng rng(11);
  TrainingSet smooth;
  for (int i = 0; i < 200; ++i) {
    const double a = rng.uniform01();
    const double b = rng.uniform01();
    smooth.x.push_back({a, b});
    smooth.y.push_back(std::sin(3.0 * a) + 0.5 * std::cos(2.0 * b) + a * b);
  }
  const double rf = r_squared(fit(SurrogateKind::kRandomForest, smooth, 1), smooth);
  const double et = r_squared(fit(SurrogateKind::kExtraTrees, smooth, 1), smooth);

  const SurrogateModel gbrt = fit(SurrogateKind::kGradientBoosting, smooth, 1);
  std::vector<FeatureVector> points;
  for (int i = 0; i < 1000; ++i) points.push_back({rng.uniform01(), rng.uniform01()});
  double min_sigma = INFINITY;
  for (const Prediction& p : gbrt.predict(points)) min_sigma = std::min(min_sigma, p.sigma);

  const bool ok = worst_mean <= 1e-6 && worst_sigma <= 1e-3 && rf >= 0.9 && et >= 0.9 &&
                  min_sigma >= 0.0;
  std::ostringstream detail;
  detail << "GP |err| " << worst_mean << " sigma " << worst_sigma << ", R2 RF "
         << fixed(rf, 3) << " ET " << fixed(et, 3) << ", GBRT min sigma " << min_sigma;
  return ok ? pass(detail.str()) : fail(detail.str());
}

Outcome determinism() {
  testing::TempDir a;
  testing::TempDir b;
  const std::string path = testing::problem_path("mock_syr2k").string();
  const int ca =
      cli({"tune", path, "--mock", "--seed", "42", "--out-dir", a.path().string()});
  const int cb =
      cli({"tune", path, "--mock", "--seed", "42", "--out-dir", b.path().string()});
  const bool same =
      testing::read_file(a / "results.csv") == testing::read_file(b / "results.csv") &&
      testing::read_file(a / "results.json") == testing::read_file(b / "results.json");
  const bool ok = ca == 0 && cb == 0 && same &&
                  !testing::read_file(a / "results.csv").empty();
  return ok ? pass("results.csv and results.json identical")
            : fail("exit " + std::to_string(ca) + "/" + std::to_string(cb) +
                   (same ? ", files identical" : ", files differ"));
}

Outcome templater_exactness() {
  const Problem p = problem("syr2k");
  const CodeMold mold = CodeMold::from_file(p.mold_path);
  const Configuration c =
      p.space.resolve_activity({{"P3", "50"}, {"P4", "128"}, {"P5", "256"}});
  const std::string text = instantiate(mold, p.space, c).text;
  const bool tiles = text.find("tile sizes(50,128,256)") != std::string::npos;
  const bool munch =
      instantiate(CodeMold("A #P1 B #P10 C"), {{"P1", "x"}, {"P10", "y"}}).text ==
      "A x B y C";
  const std::string detail = std::string("tile sizes ") + (tiles ? "found" : "missing") +
                             ", maximal munch " + (munch ? "ok" : "wrong");
  return tiles && munch ? pass(detail) : fail(detail);
}

Outcome persistence() {
  const Problem p = problem("syr2k");
  const ParamSpace& space = p.space;
  Rng rng(77);
  std::size_t total = 0;
  for (int trial = 0; trial < 10; ++trial) {
    testing::TempDir dir;
    PerfDb db = PerfDb::create(space, dir.path());
    const std::size_t n = 1 + rng.uniform_index(500);
    // A small pool makes duplicates common.
    const auto pool = space.sample_random(rng, 40);
    for (std::size_t i = 1; i <= n; ++i) {
      EvalRecord r;
      r.index = i;
      r.config = pool[rng.uniform_index(pool.size())];
      r.timestamp = "1970-01-01T00:00:00Z";
      if (auto seen = db.contains(r.config)) {
        r.status = EvalStatus::kDuplicate;
        r.duplicate_of = seen;
      } else if (rng.uniform01() < 0.15) {
        r.status = rng.uniform01() < 0.5 ? EvalStatus::kCompileError : EvalStatus::kTimeout;
        r.elapsed = rng.uniform(0.0, 3.0);
      } else {
        r.objective = rng.uniform(0.001, 5.0);
        r.elapsed = rng.uniform(0.0, 3.0);
      }
      db.append(r);
    }
    total += n;
    const PerfDb loaded = PerfDb::load(space, dir.path());
    if (loaded.records() != db.records()) {
      return fail("trial " + std::to_string(trial) + " differs after reload");
    }
    std::optional<std::size_t> oracle;
    double best = INFINITY;
    for (const EvalRecord& r : loaded.records()) {
      if (r.status == EvalStatus::kOk && *r.objective < best) {
        best = *r.objective;
        oracle = r.index;
      }
    }
    std::optional<std::size_t> got;
    try {
      got = find_min(loaded).index;
    } catch (const Error&) {
    }
    if (got != oracle) return fail("find_min disagrees in trial " + std::to_string(trial));
  }
  return pass("10 databases, " + std::to_string(total) + " records");
}

Outcome compiler_smoke() {
  if (std::system("command -v cc >/dev/null 2>&1") != 0) {
    return {Verdict::kSkip, "no C compiler on PATH"};
  }
  testing::TempDir dir;
  const auto fixture = testing::source_dir() / "tests/fixtures/smoke.json";
  std::string out;
  const int code = cli({"tune", fixture.string(), "--max-evals", "5", "--clean",
                        "--out-dir", dir.path().string()},
                       &out);
  if (code != 0) return fail("tune exited with " + std::to_string(code));
  const Problem p = load_problem(fixture);
  const PerfDb db = PerfDb::load(p.space, dir.path());
  std::size_t positive = 0;
  for (const EvalRecord& r : db.records()) {
    if (r.status == EvalStatus::kOk && *r.objective > 0.0) ++positive;
  }
  const std::string detail = std::to_string(positive) + "/" +
                             std::to_string(db.size()) + " ok records with time > 0";
  return db.size() == 5 && positive == 5 ? pass(detail) : fail(detail);
}

struct Criterion {
  const char* name;
  double limit_sec;  // 0 means no limit
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace pragmatune

int main() {
  using namespace pragmatune;
  const std::vector<Criterion> criteria = {
      {"space counts", 1.0, space_counts},
      {"condition invariants", 0.0, condition_invariants},
      {"oracle optimum on mock_tiny", 30.0, tiny_oracle},
      {"BO beats random search", 300.0, bo_beats_random},
      {"GP duplicate budget", 0.0, gp_duplicates},
      {"surrogate sanity", 0.0, surrogate_sanity},
      {"determinism", 0.0, determinism},
      {"templater exactness", 0.0, templater_exactness},
      {"persistence round trip", 0.0, persistence},
      {"real compiler smoke test", 0.0, compiler_smoke},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const Criterion& c = criteria[i];
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = fail(std::string("exception: ") + e.what());
    }
    const double sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.verdict == Verdict::kPass && c.limit_sec > 0 && sec > c.limit_sec) {
      o = fail(o.detail + "; over the " + fixed(c.limit_sec, 0) + " s limit");
    }
    const char* tag = o.verdict == Verdict::kPass   ? "PASS"
                      : o.verdict == Verdict::kFail ? "FAIL"
                                                    : "SKIP";
    if (o.verdict == Verdict::kFail) ++failures;
    std::printf("[%s] %2zu %s (%.2f s): %s\n", tag, i + 1, c.name, sec, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
