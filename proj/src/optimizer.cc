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

#include "pragmatune/optimizer.h"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <ctime>
#include <limits>
#include <unordered_set>

#include "pragmatune/error.h"

namespace pragmatune {
namespace {

// Runtimes are fitted in log space; this floor only matters for synthetic
// objectives that can reach zero.
constexpr double kLogFloor = 1e-12;

// Above this size an all-duplicate random pool is not checked for
// exhaustion.
constexpr std::uint64_t kExhaustionCheckLimit = 1u << 20;

std::string format_utc(std::time_t t) {
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

SurrogateKind surrogate_for(Learner learner) {
  switch (learner) {
    case Learner::kRF: return SurrogateKind::kRandomForest;
    case Learner::kET: return SurrogateKind::kExtraTrees;
    case Learner::kGBRT: return SurrogateKind::kGradientBoosting;
    case Learner::kGP: return SurrogateKind::kGaussianProcess;
  }
  return SurrogateKind::kRandomForest;
}

std::uint64_t size_or_max(const ParamSpace& space) {
  try {
    return space.size();
  } catch (const Error&) {
    return std::numeric_limits<std::uint64_t>::max();
  }
}

TrainingSet training_set(const ParamSpace& space, const PerfDb& db) {
  TrainingSet data;
  for (const EvalRecord& r : db.records()) {
    if (r.status != EvalStatus::kOk) continue;
    data.x.push_back(space.encode(r.config));
    data.y.push_back(std::log(std::max(*r.objective, kLogFloor)));
  }
  return data;
}

}  // namespace

std::string_view learner_name(Learner learner) {
  switch (learner) {
    case Learner::kRF: return "RF";
    case Learner::kET: return "ET";
    case Learner::kGBRT: return "GBRT";
    case Learner::kGP: return "GP";
  }
  return "?";
}

std::optional<Learner> parse_learner(std::string_view text) {
  std::string upper(text);
  for (char& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  for (Learner l : {Learner::kRF, Learner::kET, Learner::kGBRT, Learner::kGP}) {
    if (learner_name(l) == upper) return l;
  }
  return std::nullopt;
}

Clock wall_clock() {
  return [](std::size_t) {
    return format_utc(
        std::chrono::system_clock::to_time_t(std::chrono::system_clock::now()));
  };
}

Clock logical_clock() {
  return [](std::size_t index) {
    return format_utc(static_cast<std::time_t>(index));
  };
}

double lcb(const Prediction& prediction, double kappa) {
  return prediction.mean - kappa * prediction.sigma;
}

std::optional<Proposal> propose(const SurrogateModel& model,
                                const ParamSpace& space, const PerfDb& db,
                                Rng& rng, const TuneOptions& options) {
  const std::uint64_t size = size_or_max(space);
  const bool enumerated = size <= options.candidate_pool;
  std::vector<Configuration> pool =
      enumerated ? space.enumerate(size)
                 : space.sample_random(rng, options.candidate_pool);
  if (!enumerated) {
    // Random draws repeat; score each configuration once, first draw kept.
    std::unordered_set<Configuration, ConfigurationHash> seen;
    std::erase_if(pool, [&](const Configuration& c) {
      return !seen.insert(c).second;
    });
  }

  constexpr double kNone = std::numeric_limits<double>::infinity();
  std::optional<std::size_t> best_unseen;
  std::optional<std::size_t> best_any;
  double best_unseen_score = kNone;
  double best_any_score = kNone;
  std::vector<FeatureVector> features;
  features.reserve(pool.size());
  for (const Configuration& c : pool) features.push_back(space.encode(c));
  const std::vector<Prediction> predictions = model.predict(features);
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const double score = lcb(predictions[i], options.kappa);
    if (!best_any || score < best_any_score) {
      best_any = i;
      best_any_score = score;
    }
    if ((!best_unseen || score < best_unseen_score) && !db.contains(pool[i])) {
      best_unseen = i;
      best_unseen_score = score;
    }
  }
  if (best_unseen) {
    return Proposal{pool[*best_unseen], false, best_unseen_score};
  }
  if (enumerated) return std::nullopt;
  if (size <= kExhaustionCheckLimit) {
    const auto all = space.enumerate(size);
    const bool exhausted = std::all_of(
        all.begin(), all.end(),
        [&](const Configuration& c) { return db.contains(c).has_value(); });
    if (exhausted) return std::nullopt;
  }
  return Proposal{pool[*best_any], true, best_any_score};
}

TuneResult tune(const ParamSpace& space, const TuneOptions& options,
                Evaluator& evaluator, PerfDb& db) {
  if (options.max_evals < 1 || options.candidate_pool < 1 ||
      (options.n_init && *options.n_init < 1)) {
    throw Error(Errc::kInvalidArgument,
                "max_evals, n_init and candidate_pool must be at least 1");
  }
  if (!(options.kappa >= 0.0) || !std::isfinite(options.kappa)) {
    throw Error(Errc::kInvalidArgument, "kappa must be a finite value >= 0");
  }

  Rng rng(options.seed);
  const Clock clock = options.clock ? options.clock : wall_clock();
  TuneResult result;

  auto submit = [&](const Configuration& config) {
    ++result.proposed;
    EvalRecord rec;
    rec.index = db.next_index();
    rec.config = config;
    if (auto first = db.contains(config)) {
      rec.status = EvalStatus::kDuplicate;
      rec.duplicate_of = *first;
    } else {
      Measurement m = evaluator.evaluate(config, rec.index);
      ++result.evaluated;
      rec.status = m.status;
      if (m.status == EvalStatus::kOk) rec.objective = m.objective;
      rec.elapsed = m.elapsed;
    }
    rec.timestamp = clock(rec.index);
    db.append(std::move(rec));
    result.trace.push_back(db.records().back());
    if (options.on_record) options.on_record(result.trace.back());
  };

  const std::size_t n_init =
      std::min(options.n_init.value_or(10), options.max_evals);
  const auto initial = space.has_ordinal() ? space.sample_lhs(rng, n_init)
                                           : space.sample_random(rng, n_init);
  for (const Configuration& c : initial) submit(c);

  const SurrogateKind kind = surrogate_for(options.learner);
  while (result.proposed < options.max_evals) {
    if (options.learner == Learner::kGP) {
      submit(space.sample_random(rng, 1).front());
      continue;
    }
    const TrainingSet data = training_set(space, db);
    if (data.x.empty()) {
      // Nothing succeeded yet; keep exploring uniformly.
      submit(space.sample_random(rng, 1).front());
      continue;
    }
    const SurrogateModel model =
        fit(kind, data, rng.next_u64(), options.surrogate);
    auto proposal = propose(model, space, db, rng, options);
    if (!proposal) break;
    submit(proposal->config);
  }

  for (const EvalRecord& r : result.trace) {
    if (r.status != EvalStatus::kOk) continue;
    if (!result.best || *r.objective < *result.best->objective) {
      result.best = r;
      result.best_index = r.index;
    }
  }
  return result;
}

std::vector<std::pair<std::size_t, double>> best_so_far(
    std::span<const EvalRecord> trace) {
  std::vector<std::pair<std::size_t, double>> out;
  for (const EvalRecord& r : trace) {
    if (r.status != EvalStatus::kOk) continue;
    const double v =
        out.empty() ? *r.objective : std::min(out.back().second, *r.objective);
    out.emplace_back(r.index, v);
  }
  if (out.empty()) throw Error(Errc::kEmptyTrace, "no successful evaluation");
  return out;
}

std::vector<double> best_so_far(std::span<const double> objectives) {
  if (objectives.empty()) throw Error(Errc::kEmptyTrace, "empty trace");
  std::vector<double> out;
  out.reserve(objectives.size());
  for (double v : objectives) {
    out.push_back(out.empty() ? v : std::min(out.back(), v));
  }
  return out;
}

}  // namespace pragmatune
