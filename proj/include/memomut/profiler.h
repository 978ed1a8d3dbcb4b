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

// Instrumented baseline runs of the test suite and selection of expensive
// memoization candidates.

#ifndef MEMOMUT_PROFILER_H_
#define MEMOMUT_PROFILER_H_

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "memomut/analysis.h"
#include "memomut/ast.h"
#include "memomut/interpreter.h"

namespace memomut {

struct FunctionProfile {
  int64_t invocations = 0;
  int64_t inclusive_ns = 0;
  int64_t inclusive_steps = 0;

  double mean_ns() const {
    return invocations ? static_cast<double>(inclusive_ns) / invocations : 0.0;
  }
  bool operator==(const FunctionProfile&) const = default;
};

struct TestProfile {
  TestOutcome outcome;
  std::set<std::string> covered;  // functions whose enter hook fired
  // Inclusive time of the calls made directly from the test body.
  int64_t top_level_ns = 0;
};

struct Profile {
  uint64_t fingerprint = 0;
  std::map<std::string, FunctionProfile> functions;  // every user function
  std::map<std::string, TestProfile> tests;
  int64_t total_ns = 0;
  int64_t total_steps = 0;

  // Tests that passed and entered `fn`, sorted by name.
  std::vector<std::string> CoveringPassingTests(const std::string& fn) const;
};

struct ProfileOptions {
  ExecOptions exec;
  int reps = 1;  // timings are per-rep medians
};

// Throws Error(kSuiteEmpty) when the program has no tests.
Profile ProfileSuite(const Program& program, const ProfileOptions& options);

enum class TauMode : uint8_t { kMean, kCumulative };

struct ExpensivenessCriterion {
  int64_t tau_ns = 1'000'000;
  bool limit_is_percent = true;
  double limit = 20.0;  // percent of non-test functions, or a count
  TauMode tau_mode = TauMode::kMean;

  // Number of candidates allowed among `num_functions` functions; percent
  // limits round up.
  int ResolveLimit(int num_functions) const;
  std::string ToString() const;
  bool operator==(const ExpensivenessCriterion&) const = default;
};

// "1ms", "500us", "2s", "250ns" (a bare number means milliseconds).
int64_t ParseDuration(std::string_view text);
// "20%" or an absolute count.
void ParseLimit(std::string_view text, ExpensivenessCriterion& crit);
TauMode ParseTauMode(std::string_view text);
std::string_view TauModeName(TauMode mode);

struct Candidate {
  std::string fn;
  int64_t inclusive_ns = 0;
  std::vector<std::string> covering_tests;
};

std::vector<Candidate> SelectCandidates(const Profile& profile, const DeterminacyReport& det,
                                        const ExpensivenessCriterion& crit);

struct CostBreakdown {
  int64_t top_ns = 0;
  int64_t total_ns = 0;
  double share = 0.0;
  std::vector<std::string> top;
};

// Share of the time spent in calls made directly by tests that is covered by
// the ceil(top_fraction * N) most expensive non-test functions.
CostBreakdown ComputeCostBreakdown(const Profile& profile, double top_fraction);

std::string ProfileToJson(const Profile& profile,
                          const std::vector<Candidate>* candidates = nullptr,
                          const ExpensivenessCriterion* crit = nullptr);
Profile ProfileFromJson(std::string_view text);

}  // namespace memomut

#endif  // MEMOMUT_PROFILER_H_
