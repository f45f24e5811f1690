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

#ifndef PRAGMATUNE_OPTIMIZER_H_
#define PRAGMATUNE_OPTIMIZER_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pragmatune/evaluator.h"
#include "pragmatune/perfdb.h"
#include "pragmatune/space.h"
#include "pragmatune/surrogate.h"

namespace pragmatune {

enum class Learner { kRF, kET, kGBRT, kGP };

std::string_view learner_name(Learner learner);
// Case-insensitive RF | ET | GBRT | GP.
std::optional<Learner> parse_learner(std::string_view text);

// Timestamp source for evaluation records, keyed by evaluation index.
using Clock = std::function<std::string(std::size_t)>;
Clock wall_clock();
// 1970-01-01T00:00:00Z plus `index` seconds; used for reproducible runs.
Clock logical_clock();

struct TuneOptions {
  std::size_t max_evals = 100;
  Learner learner = Learner::kRF;
  // Defaults to min(10, max_evals).
  std::optional<std::size_t> n_init;
  double kappa = 1.96;
  std::size_t candidate_pool = 4096;
  std::uint64_t seed = 0;
  SurrogateOptions surrogate;
  Clock clock = wall_clock();
  // Called after every appended record.
  std::function<void(const EvalRecord&)> on_record;
};

struct TuneResult {
  std::optional<EvalRecord> best;  // empty when no evaluation succeeded
  std::size_t best_index = 0;
  std::size_t evaluated = 0;  // distinct configurations sent to the evaluator
  std::size_t proposed = 0;   // budget consumed, duplicates included
  std::vector<EvalRecord> trace;
};

// Initial design (Latin hypercube when the space has ordinals, uniform
// otherwise), then one proposal per iteration until `max_evals` proposals
// have been made or the space is exhausted. Tree learners fit a surrogate on
// log(objective) of the successful records and propose by lower confidence
// bound; GP mode proposes uniform random configurations. Proposals already
// in `db` are recorded as duplicates without being evaluated.
// Throws kInvalidArgument for invalid options.
TuneResult tune(const ParamSpace& space, const TuneOptions& options,
                Evaluator& evaluator, PerfDb& db);

// mean - kappa * sigma.
double lcb(const Prediction& prediction, double kappa);

struct Proposal {
  Configuration config;
  bool duplicate = false;
  double score = 0.0;
};

// Scores a candidate pool (the whole space when size() <= candidate_pool,
// else candidate_pool uniform draws) with lcb and returns the best-scoring
// configuration not yet in `db`, ties to the lowest pool position. When every
// pool member is already recorded, returns the best one flagged duplicate,
// or std::nullopt if the enumerated space has nothing left.
std::optional<Proposal> propose(const SurrogateModel& model,
                                const ParamSpace& space, const PerfDb& db,
                                Rng& rng, const TuneOptions& options);

// Prefix minimum over the objectives of ok records, as (index, best) pairs.
// Throws kEmptyTrace when no record succeeded.
std::vector<std::pair<std::size_t, double>> best_so_far(
    std::span<const EvalRecord> trace);

// Prefix minimum of a plain sequence. Throws kEmptyTrace.
std::vector<double> best_so_far(std::span<const double> objectives);

}  // namespace pragmatune

#endif  // PRAGMATUNE_OPTIMIZER_H_
