// Copyright 2026 The memomut Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Project configuration: `memomut.toml` in the project directory, one
// `key = value` per line, `#` starts a comment.

#ifndef MEMOMUT_CONFIG_H_
#define MEMOMUT_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "memomut/profiler.h"

namespace memomut {

inline constexpr std::string_view kConfigFileName = "memomut.toml";

struct ProjectConfig {
  ExpensivenessCriterion criterion;
  int64_t step_limit_factor = 10;
  int workers = 1;
  int64_t miss_tolerance = 0;
  int profile_reps = 1;
  uint64_t seed = 0;
  bool fake_time = false;
  std::filesystem::path artifact_dir;  // relative to the project dir

  // Applies one setting; throws Error(kUsage) for unknown keys or values
  // outside the parameter's range.
  void Set(std::string_view key, std::string_view value);
};

// Throws Error(kUsage) with the offending line number.
ProjectConfig ParseConfig(std::string_view text);
// Defaults when the file is absent.
ProjectConfig LoadProjectConfig(const std::filesystem::path& project_dir);

}  // namespace memomut

#endif  // MEMOMUT_CONFIG_H_
