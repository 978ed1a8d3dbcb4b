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

// Whole-program static analyses: call graph (0-CFA for indirect calls),
// dependency closure, side effects and determinacy.

#ifndef MEMOMUT_ANALYSIS_H_
#define MEMOMUT_ANALYSIS_H_

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "memomut/ast.h"

namespace memomut {

// Adjacency by name; every node appears as a key.
using Digraph = std::map<std::string, std::set<std::string>>;

struct CallGraph {
  // User functions in declaration order, then builtins.
  std::vector<std::string> nodes;
  // (caller, call-site node id, callee).
  std::set<std::tuple<std::string, NodeId, std::string>> edges;
  // Possible callees per (caller, site).
  std::map<std::pair<std::string, NodeId>, std::set<std::string>> resolution;
  // Indirect sites with an empty resolution set.
  std::vector<std::string> warnings;

  Digraph Adjacency() const;
};

CallGraph BuildCallGraph(const Program& program);

// f -> every node reachable from f, including f itself.
using DependencyClosure = std::map<std::string, std::set<std::string>>;

DependencyClosure ComputeClosure(const Digraph& graph);
DependencyClosure DependencyClosureOf(const CallGraph& cg);

struct FunctionEffects {
  std::set<std::string> reads;
  std::set<std::string> writes;
  std::set<int32_t> mutargs;

  bool operator==(const FunctionEffects&) const = default;
};

using SideEffectSummary = std::map<std::string, FunctionEffects>;

SideEffectSummary AnalyzeSideEffects(const Program& program, const CallGraph& cg);

enum class NondetReason : uint8_t {
  kCallsTime,
  kCallsRand,
  kPerformsIo,
  kTaintedGlobal,
  kTransitiveVia,
};

struct NondetCause {
  NondetReason reason;
  std::string subject;  // global or callee name where applicable

  std::string ToString() const;
  bool operator==(const NondetCause&) const = default;
};

struct DeterminacyOptions {
  // Taint: reading a global written by a nondeterministic function.
  bool global_taint = true;
  // Treat `print` as nondeterministic. Turning this off is only useful for
  // experiments on the provisional-memoization failure rule.
  bool print_is_nondeterministic = true;
};

struct DeterminacyReport {
  std::map<std::string, NondetCause> nondet;

  bool IsDeterministic(const std::string& fn) const { return !nondet.count(fn); }
};

DeterminacyReport AnalyzeDeterminacy(const Program& program, const CallGraph& cg,
                                     const SideEffectSummary& effects,
                                     const DeterminacyOptions& options = {});

struct Analysis {
  CallGraph call_graph;
  DependencyClosure closure;
  SideEffectSummary effects;
  DeterminacyReport determinacy;
};

Analysis Analyze(const Program& program, const DeterminacyOptions& options = {});

// Key-sorted JSON document for `memomut analyze`.
std::string AnalysisJson(const Analysis& analysis);

}  // namespace memomut

#endif  // MEMOMUT_ANALYSIS_H_
