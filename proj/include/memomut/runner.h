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

// Mutation-testing engine: runs each mutant against its covering tests,
// optionally bypassing memoized calls, and scores the pool.

#ifndef MEMOMUT_RUNNER_H_
#define MEMOMUT_RUNNER_H_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "memomut/analysis.h"
#include "memomut/ast.h"
#include "memomut/interpreter.h"
#include "memomut/memo.h"
#include "memomut/mutation.h"
#include "memomut/profiler.h"

namespace memomut {

struct RunConfig {
  bool memo = false;
  int64_t step_limit_factor = 10;  // >= 2
  bool all_tests = false;
  int workers = 1;  // >= 1
  // Record which functions each mutant's runs bypassed.
  bool log_decisions = false;
  ExecOptions exec;  // seed, fake time, max depth

  void Validate() const;
};

enum class MutantStatus : uint8_t { kKilled, kSurvived, kNotCovered };
std::string_view MutantStatusName(MutantStatus s);

struct MutantResult {
  int32_t id = 0;
  MutantStatus status = MutantStatus::kNotCovered;
  std::string killing_test;        // when killed
  Verdict cause = Verdict::kPass;  // when killed
  int32_t tests_run = 0;
  int64_t steps = 0;
  int64_t wall_ns = 0;
  int64_t hits = 0;
  int64_t misses = 0;
  int64_t gated = 0;
  // Function -> bypass count; filled only with `log_decisions`.
  std::map<std::string, int64_t> bypassed;

  // "Killed(test, AssertFail)", "Survived" or "NotCovered".
  std::string VerdictString() const;
  bool SameVerdict(const MutantResult& other) const;
};

struct MethodCounters {
  int64_t hits = 0;
  int64_t misses = 0;
  int64_t gated = 0;
};

struct MutationReport {
  uint64_t fingerprint = 0;
  bool memo = false;
  double score = 0.0;
  int32_t killed = 0;
  int32_t total = 0;
  std::vector<MutantResult> results;  // sorted by id
  std::map<std::string, MethodCounters> methods;
  int64_t wall_ns = 0;
  int64_t total_steps = 0;
};

// Throws Error(kFingerprintMismatch) if the profile or the database belongs
// to another program and Error(kInvalidPool) for a stale mutant.
MutationReport RunMutationAnalysis(const Program& program, const MutantPool& pool,
                                   const Profile& profile, const DependencyClosure& closure,
                                   const SideEffectSummary& effects, const MemoDB* db,
                                   const RunConfig& cfg);

// Killed / total; throws Error(kEmptyPool) for no results.
double ComputeScore(const std::vector<MutantResult>& results);
// Six decimals.
std::string FormatScore(double score);

struct Comparison {
  double base_score = 0.0;
  double memo_score = 0.0;
  int64_t base_ns = 0;
  int64_t memo_ns = 0;
  double speedup_percent = 0.0;  // (t_base - t_memo) / t_base * 100
  int64_t base_steps = 0;
  int64_t memo_steps = 0;
  double step_reduction_percent = 0.0;
  std::vector<int32_t> verdict_mismatches;  // mutant ids
  std::map<std::string, MethodCounters> methods;
};

// Throws Error(kScoreMismatch) when the scores differ.
Comparison CompareRuns(const MutationReport& base, const MutationReport& memo);

std::string ReportToJson(const MutationReport& report);
MutationReport ReportFromJson(std::string_view text);
std::string ComparisonToJson(const Comparison& c);
std::string ComparisonToText(const Comparison& c);

}  // namespace memomut

#endif  // MEMOMUT_RUNNER_H_
