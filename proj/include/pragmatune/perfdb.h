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

#ifndef PRAGMATUNE_PERFDB_H_
#define PRAGMATUNE_PERFDB_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "pragmatune/evaluator.h"
#include "pragmatune/space.h"

namespace pragmatune {

struct EvalRecord {
  std::size_t index = 0;  // 1-based
  Configuration config;
  std::optional<double> objective;  // seconds; only for status ok
  double elapsed = 0.0;
  EvalStatus status = EvalStatus::kOk;
  std::optional<std::size_t> duplicate_of;
  std::string timestamp;  // ISO-8601 UTC

  friend bool operator==(const EvalRecord&, const EvalRecord&) = default;
};

// Objectives and elapsed times are stored with 6 fractional digits, the
// precision of results.csv.
double quantize_seconds(double seconds);
std::string format_seconds(double seconds);

// Append-only evaluation history. With a directory, every append rewrites
// results.json atomically and appends one flushed line to results.csv.
class PerfDb {
 public:
  static constexpr const char* kCsvName = "results.csv";
  static constexpr const char* kJsonName = "results.json";

  // In memory only.
  explicit PerfDb(ParamSpace space);

  // Backed by `dir`; existing result files there are replaced on the first
  // append.
  static PerfDb create(ParamSpace space, const std::filesystem::path& dir);

  // Throws kIoError, kSchemaMismatch, kParseError, kConsistencyError.
  static PerfDb load(ParamSpace space, const std::filesystem::path& dir);

  // Throws kIndexGap unless record.index == size() + 1, kInvalidArgument for
  // a configuration outside the space, kIoError.
  void append(EvalRecord record);

  // Index of the first record with this configuration.
  std::optional<std::size_t> contains(const Configuration& config) const;

  const std::vector<EvalRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  std::size_t next_index() const { return records_.size() + 1; }
  const ParamSpace& space() const { return space_; }
  const std::optional<std::filesystem::path>& dir() const { return dir_; }

 private:
  ParamSpace space_;
  std::optional<std::filesystem::path> dir_;
  std::vector<EvalRecord> records_;
  std::unordered_map<Configuration, std::size_t, ConfigurationHash> first_;
};

// Lowest objective among ok records; ties go to the lowest index. Throws
// kNoSuccessfulEvaluation.
const EvalRecord& find_min(const PerfDb& db);

std::string csv_header(const ParamSpace& space);
std::string csv_row(const ParamSpace& space, const EvalRecord& record);

}  // namespace pragmatune

#endif  // PRAGMATUNE_PERFDB_H_
