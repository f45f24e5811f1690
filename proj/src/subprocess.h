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

#ifndef PRAGMATUNE_SRC_SUBPROCESS_H_
#define PRAGMATUNE_SRC_SUBPROCESS_H_

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace pragmatune::detail {

struct ProcessResult {
  int exit_code = -1;
  bool spawn_failed = false;
  bool timed_out = false;
  std::string out;
  std::string err;
  double seconds = 0.0;
};

// Runs argv[0] (PATH lookup) in `cwd` with the inherited environment plus
// `extra_env`, capturing stdout and stderr. The child gets its own process
// group, which is killed when `timeout_sec` passes.
ProcessResult run_process(
    const std::vector<std::string>& argv, const std::filesystem::path& cwd,
    const std::vector<std::pair<std::string, std::string>>& extra_env,
    double timeout_sec);

}  // namespace pragmatune::detail

#endif  // PRAGMATUNE_SRC_SUBPROCESS_H_
