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

#ifndef PRAGMATUNE_REPORT_H_
#define PRAGMATUNE_REPORT_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pragmatune/perfdb.h"

namespace pragmatune {

struct RecordCounts {
  std::size_t total = 0;
  std::size_t ok = 0;
  std::size_t failed = 0;
  std::size_t duplicate = 0;
};

RecordCounts count_records(std::span<const EvalRecord> records);

// `name=value` per parameter, `name=<inactive>` for inactive ones.
std::string format_configuration(const ParamSpace& space,
                                 const Configuration& config);

// Best objective, where it first appeared, its configuration and the
// record counts. Throws kNoSuccessfulEvaluation.
std::string render_report(const PerfDb& db);

struct TraceRow {
  std::size_t index = 0;
  std::optional<double> objective;    // ok records only
  std::optional<double> best_so_far;  // empty before the first ok record
};

std::vector<TraceRow> trace_rows(std::span<const EvalRecord> records);

// Columns index,objective,best_so_far.
std::string trace_csv(std::span<const TraceRow> rows);

// Two polylines over evaluation index: every successful objective (blue) and
// the running best (red). Throws kNoSuccessfulEvaluation.
std::string trace_svg(std::span<const TraceRow> rows, const std::string& title);

}  // namespace pragmatune

#endif  // PRAGMATUNE_REPORT_H_
