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

#include "memomut/analysis.h"

#include <gtest/gtest.h>

#include <random>

#include "memomut/parser.h"
#include "oracles.h"
#include "test_util.h"

namespace memomut {
namespace {

using Names = std::set<std::string>;

// Every callee resolved at any site in `caller`, direct calls and builtins included.
Names ResolvedAt(const CallGraph& cg, const std::string& caller) {
  Names out;
  for (const auto& [site, callees] : cg.resolution) {
    if (site.first == caller) out.insert(callees.begin(), callees.end());
  }
  return out;
}

bool HasEdge(const CallGraph& cg, const std::string& a, const std::string& b) {
  for (const auto& [caller, site, callee] : cg.edges) {
    if (caller == a && callee == b) return true;
  }
  return false;
}

TEST(CallGraphTest, DirectEdge) {
  CallGraph cg = BuildCallGraph(Parse("fn a(){ b(); } fn b(){}"));
  EXPECT_TRUE(HasEdge(cg, "a", "b"));
  EXPECT_FALSE(HasEdge(cg, "b", "a"));
}

TEST(CallGraphTest, OnlyFlowingReferencesResolve) {
  CallGraph cg = BuildCallGraph(Parse("fn a(){ let v=&b; v(); } fn b(){} fn c(){}"));
  EXPECT_EQ(ResolvedAt(cg, "a"), (Names{"b"}));
}

TEST(CallGraphTest, ContextInsensitiveMerge) {
  CallGraph cg = BuildCallGraph(Parse("fn a(p){ p(); } fn m(){ a(&b); a(&c); } fn b(){} fn c(){}"));
  EXPECT_EQ(ResolvedAt(cg, "a"), (Names{"b", "c"}));
}

TEST(CallGraphTest, FlowsThroughGlobalsArraysAndReturns) {
  CallGraph cg = BuildCallGraph(Parse(
      "let h = 0;"
      "fn pick() { return &b; }"
      "fn a() { let f = pick(); f(); h = &c; let g = h; g(); let arr = [&d]; let k = arr[0]; k(); }"
      "fn b(){} fn c(){} fn d(){}"));
  EXPECT_EQ(ResolvedAt(cg, "a"), (Names{"b", "c", "d", "pick"}));
}

TEST(CallGraphTest, ArityFiltersTargetsAndEmptySitesWarn) {
  CallGraph cg =
      BuildCallGraph(Parse("fn a(p){ p(1); } fn m(){ a(&one); a(&two); } fn one(x){} fn two(x, y){}"
                           " fn lonely(q) { q(); }"));
  EXPECT_EQ(ResolvedAt(cg, "a"), (Names{"one"}));
  EXPECT_FALSE(cg.warnings.empty());
}

TEST(CallGraphTest, IndirectCorpus) {
  CallGraph cg = BuildCallGraph(testing::LoadCorpus("indirect"));
  EXPECT_EQ(ResolvedAt(cg, "apply"), (Names{"double", "negate"}));
  EXPECT_EQ(ResolvedAt(cg, "twice"), (Names{"double", "inc"}));
  EXPECT_EQ(ResolvedAt(cg, "map"), (Names{"inc", "len", "push"}));
}

TEST(ClosureTest, Chain) {
  DependencyClosure c = ComputeClosure({{"a", {"b"}}, {"b", {"c"}}, {"c", {}}});
  EXPECT_EQ(c.at("a"), (Names{"a", "b", "c"}));
  EXPECT_EQ(c.at("c"), (Names{"c"}));
}

TEST(ClosureTest, SelfRecursion) {
  EXPECT_EQ(ComputeClosure({{"f", {"f"}}}).at("f"), (Names{"f"}));
}

TEST(ClosureTest, MatchesBfsOnRandomDigraphs) {
  std::mt19937_64 rng(50);
  for (int g = 0; g < 100; ++g) {
    Digraph graph = testing::RandomDigraph(rng, 50, 0.1);
    DependencyClosure c = ComputeClosure(graph);
    for (const auto& [node, succ] : graph) {
      ASSERT_EQ(c.at(node), testing::BfsReachable(graph, node)) << "graph " << g << " " << node;
    }
  }
}

TEST(ClosureTest, DagSizesMatchBfs) {
  std::mt19937_64 rng(51);
  std::bernoulli_distribution edge(0.1);
  for (int g = 0; g < 20; ++g) {
    Digraph dag;
    for (int i = 0; i < 50; ++i) {
      auto& out = dag["n" + std::to_string(i)];
      for (int j = i + 1; j < 50; ++j) {
        if (edge(rng)) out.insert("n" + std::to_string(j));
      }
    }
    DependencyClosure c = ComputeClosure(dag);
    for (const auto& [node, succ] : dag) {
      EXPECT_EQ(c.at(node).size(), testing::BfsReachable(dag, node).size());
    }
  }
}

TEST(SideEffectTest, DirectWrite) {
  Program p = Parse("let G = 0; fn f(){ G = 1; }");
  SideEffectSummary s = AnalyzeSideEffects(p, BuildCallGraph(p));
  EXPECT_EQ(s.at("f").writes, (Names{"G"}));
  EXPECT_TRUE(s.at("f").reads.empty());
}

TEST(SideEffectTest, TransitiveRead) {
  Program p = Parse("let H = 0; fn f(){ g(); } fn g(){ return H; }");
  SideEffectSummary s = AnalyzeSideEffects(p, BuildCallGraph(p));
  EXPECT_EQ(s.at("f").reads, (Names{"H"}));
}

TEST(SideEffectTest, ArgumentMutation) {
  Program p = Parse("fn f(a){ push(a, 1); } fn g(a, b){ f(b); } fn h(a){ return len(a); }");
  SideEffectSummary s = AnalyzeSideEffects(p, BuildCallGraph(p));
  EXPECT_EQ(s.at("f").mutargs, (std::set<int32_t>{0}));
  EXPECT_EQ(s.at("g").mutargs, (std::set<int32_t>{1}));
  EXPECT_TRUE(s.at("h").mutargs.empty());
}

TEST(SideEffectTest, InPlaceMutationOfGlobalArrayIsAWrite) {
  Program p = Parse(
      "let A = [0]; fn f(){ A[0] = 5; } fn g(){ let x = A; push(x, 1); }"
      " fn k(a){ a[0] = 1; } fn h(){ k(A); }");
  SideEffectSummary s = AnalyzeSideEffects(p, BuildCallGraph(p));
  EXPECT_EQ(s.at("f").writes, (Names{"A"}));
  EXPECT_EQ(s.at("g").writes, (Names{"A"}));
  EXPECT_EQ(s.at("h").writes, (Names{"A"}));
}

TEST(SideEffectTest, GlobalsCorpus) {
  SideEffectSummary s = Analyze(testing::LoadCorpus("globals")).effects;
  EXPECT_EQ(s.at("bump").writes, (Names{"counter", "history"}));
  EXPECT_EQ(s.at("scaled").reads, (Names{"factor"}));
  EXPECT_TRUE(s.at("scaled").writes.empty());
  EXPECT_EQ(s.at("set_factor").writes, (Names{"factor"}));
  EXPECT_EQ(s.at("history_total").reads, (Names{"history"}));
  EXPECT_EQ(s.at("reset").writes, (Names{"counter", "history"}));
}

std::string Reason(const DeterminacyReport& r, const std::string& fn) {
  auto it = r.nondet.find(fn);
  return it == r.nondet.end() ? "deterministic" : it->second.ToString();
}

TEST(DeterminacyTest, Rules) {
  Program p = Parse(
      "let G = 0;"
      "fn f(){ return rand(10); } fn g(){ return f(); }"
      "fn w(){ G = rand(2); } fn r(){ return G; }"
      "fn t(){ return time_now(); } fn io(){ print(1); } fn n(){ return log_size(); }"
      "fn pure(x){ return x + 1; }");
  DeterminacyReport d = Analyze(p).determinacy;
  EXPECT_EQ(Reason(d, "f"), "CallsRand");
  EXPECT_EQ(Reason(d, "g"), "TransitiveVia(f)");
  EXPECT_EQ(Reason(d, "r"), "TaintedGlobal(G)");
  EXPECT_EQ(Reason(d, "t"), "CallsTime");
  EXPECT_EQ(Reason(d, "io"), "PerformsIO");
  EXPECT_EQ(Reason(d, "n"), "PerformsIO");
  EXPECT_EQ(Reason(d, "pure"), "deterministic");

  DeterminacyOptions relaxed;
  relaxed.global_taint = false;
  relaxed.print_is_nondeterministic = false;
  DeterminacyReport d2 = Analyze(p, relaxed).determinacy;
  EXPECT_EQ(Reason(d2, "r"), "deterministic");
  EXPECT_EQ(Reason(d2, "io"), "deterministic");
  EXPECT_EQ(Reason(d2, "f"), "CallsRand");
}

TEST(DeterminacyTest, NondetCorpus) {
  DeterminacyReport d = Analyze(testing::LoadCorpus("nondet")).determinacy;
  EXPECT_EQ(Reason(d, "noise"), "CallsRand");
  EXPECT_EQ(Reason(d, "jitter"), "TransitiveVia(noise)");
  EXPECT_EQ(Reason(d, "stamp"), "CallsTime");
  EXPECT_EQ(Reason(d, "f"), "deterministic");
}

TEST(AnalysisTest, JsonIsStable) {
  Program p = testing::LoadCorpus("indirect");
  EXPECT_EQ(AnalysisJson(Analyze(p)), AnalysisJson(Analyze(p)));
}

}  // namespace
}  // namespace memomut
