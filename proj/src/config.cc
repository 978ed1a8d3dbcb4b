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

#include "memomut/config.h"

#include <fstream>
#include <sstream>

#include "memomut/error.h"

namespace memomut {
namespace {

std::string_view Trim(std::string_view s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

int64_t ParseInt(std::string_view key, std::string_view value, int64_t min) {
  std::string s(value);
  size_t used = 0;
  int64_t v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) {
    throw Error(ErrorCode::kUsage, std::string(key) + ": expected an integer, got '" + s + "'");
  }
  if (v < min) {
    throw Error(ErrorCode::kUsage, std::string(key) + " must be at least " + std::to_string(min));
  }
  return v;
}

bool ParseBool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw Error(ErrorCode::kUsage, std::string(key) + ": expected true or false");
}

}  // namespace

void ProjectConfig::Set(std::string_view key, std::string_view value) {
  // Quotes are optional around values.
  if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
    value = value.substr(1, value.size() - 2);
  }
  try {
    if (key == "tau") {
      criterion.tau_ns = ParseDuration(value);
    } else if (key == "limit") {
      ParseLimit(value, criterion);
    } else if (key == "tau-mode" || key == "tau_mode") {
      criterion.tau_mode = ParseTauMode(value);
    } else if (key == "step-limit-factor" || key == "step_limit_factor") {
      step_limit_factor = ParseInt(key, value, 2);
    } else if (key == "workers") {
      workers = static_cast<int>(ParseInt(key, value, 1));
    } else if (key == "miss-tolerance" || key == "miss_tolerance") {
      miss_tolerance = ParseInt(key, value, 0);
    } else if (key == "profile-reps" || key == "profile_reps") {
      profile_reps = static_cast<int>(ParseInt(key, value, 1));
    } else if (key == "seed") {
      seed = static_cast<uint64_t>(ParseInt(key, value, 0));
    } else if (key == "fake-time" || key == "fake_time") {
      fake_time = ParseBool(key, value);
    } else if (key == "artifact-dir" || key == "artifact_dir") {
      artifact_dir = std::string(value);
    } else {
      throw Error(ErrorCode::kUsage, "unknown setting '" + std::string(key) + "'");
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kUsage) throw;
    throw Error(ErrorCode::kUsage, std::string(key) + ": " + e.what());
  }
}

ProjectConfig ParseConfig(std::string_view text) {
  ProjectConfig cfg;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view s = raw;
    if (size_t hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = Trim(s);
    if (s.empty()) continue;
    size_t eq = s.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::kUsage, std::string(kConfigFileName) + ":" + std::to_string(line) +
                                         ": expected key = value");
    }
    try {
      cfg.Set(Trim(s.substr(0, eq)), Trim(s.substr(eq + 1)));
    } catch (const Error& e) {
      throw Error(ErrorCode::kUsage,
                  std::string(kConfigFileName) + ":" + std::to_string(line) + ": " + e.what());
    }
  }
  return cfg;
}

ProjectConfig LoadProjectConfig(const std::filesystem::path& project_dir) {
  std::filesystem::path path = project_dir / kConfigFileName;
  if (!std::filesystem::is_regular_file(path)) return {};
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ParseConfig(ss.str());
}

}  // namespace memomut
