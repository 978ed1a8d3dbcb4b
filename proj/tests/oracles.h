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

// Independent reference implementations used to check the library, plus a
// helper that runs the whole pipeline on a corpus program.

#ifndef MEMOMUT_TESTS_ORACLES_H_
#define MEMOMUT_TESTS_ORACLES_H_

#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "memomut/analysis.h"
#include "memomut/ast.h"
#include "memomut/interpreter.h"
#include "memomut/memo.h"
#include "memomut/mutation.h"
#include "memomut/profiler.h"

namespace memomut::testing {

// Nodes reachable from `start` by breadth-first search, `start` included.
std::set<std::string> BfsReachable(const Digraph& graph, const std::string& start);

// Random digraph over nodes "n0".."n{size-1}".
Digraph RandomDigraph(std::mt19937_64& rng, int size, double edge_probability);

// (function, node, operator, detail) where detail is the replacement
// operator, the RVM default type, or 0.
using MutantSite = std::tuple<std::string, NodeId, MutationOperator, int>;

// Straightforward enumeration of every mutation site, in pool order.
std::vector<MutantSite> BruteForceMutants(const Program& program);
MutantSite SiteOf(const Mutant& m);

// Runs every test of the program against every mutant, no selection and no
// memoization. A mutant is killed when a test that passes on the original
// program fails on it. Step limits are baseline steps * 10 + 1000.
std::set<int32_t> ExhaustiveKilled(const Program& program, const MutantPool& pool,
                                   const ExecOptions& exec);

// Steps taken by the body of `fn` called with integer arguments, counted by
// a separate evaluator for the integer/boolean subset of the language
// (locals, arithmetic, comparisons, if, while, direct calls). Empty when the
// function leaves that subset.
std::optional<int64_t> CountBodySteps(const Program& program, const std::string& fn,
                                      const std::vector<int64_t>& args);

struct PipelineOptions {
  ExpensivenessCriterion criterion;
  DeterminacyOptions determinacy;
  uint64_t seed = 42;
  bool fake_time = true;
  int64_t miss_tolerance = 0;

  // tau = 1ns, limit = 100%: every deterministic function is a candidate.
  static PipelineOptions Maximal();
};

struct Artifacts {
  Program program;
  Analysis analysis;
  Profile profile;
  std::vector<Candidate> candidates;
  MutantPool pool;
  MemoDB raw;
  MemoDB db;
  ProvisionalStats stats;

  ExecOptions exec;  // seed and fake time used throughout
};

Artifacts BuildArtifacts(const std::string& corpus_name, const PipelineOptions& options);

}  // namespace memomut::testing

#endif  // MEMOMUT_TESTS_ORACLES_H_
