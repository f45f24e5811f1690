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

#ifndef PRAGMATUNE_CLI_H_
#define PRAGMATUNE_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace pragmatune {

enum ExitCode : int {
  kExitOk = 0,
  kExitError = 1,
  kExitInvalidProblem = 2,
  kExitNoSuccess = 3,
};

// Entry point of the `pragmatune` tool; `args` excludes the program name.
//   tune <problem.json>      run the search, write results.csv/results.json
//   report <results_dir>     best configuration and record counts
//   plot <results_dir> [svg] trace plot plus trace.csv
//   validate <problem.json>  diagnostics, exit 0 iff clean
//   enumerate <problem.json> configuration counts
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace pragmatune

#endif  // PRAGMATUNE_CLI_H_
