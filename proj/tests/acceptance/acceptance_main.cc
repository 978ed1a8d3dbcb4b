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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "memomut/analysis.h"
#include "memomut/error.h"
#include "memomut/memo.h"
#include "memomut/mutation.h"
#include "memomut/printer.h"
#include "memomut/profiler.h"
#include "memomut/runner.h"
#include "oracles.h"
#include "test_util.h"

namespace memomut::testing {
namespace {

// Tolerances.
constexpr double kMinBenchShare = 0.40;
constexpr double kShareSpread = 0.05;
constexpr double kMinWallReduction = 0.15;
constexpr double kMinStepReduction = 0.25;
constexpr int kBenchRuns = 3;
constexpr int kFuzzRuns = 1000;
constexpr int kCorruptOffsets = 20;
constexpr int kRandomGraphs = 100;
constexpr int kGraphSize = 50;

struct Outcome {
  bool pass = false;
  std::string detail;
};

RunConfig Config(bool memo, bool log, const ExecOptions& exec) {
  RunConfig c;
  c.memo = memo;
  c.log_decisions = log;
  c.workers = 1;
  c.exec = exec;
  return c;
}

MutationReport RunPool(const Artifacts& a, bool memo, bool log = false) {
  return RunMutationAnalysis(a.program, a.pool, a.profile, a.analysis.closure, a.analysis.effects,
                             memo ? &a.db : nullptr, Config(memo, log, a.exec));
}

double Median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

std::string Fmt(double v, int digits = 3) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

class Acceptance {
 public:
  Acceptance() {
    for (const std::string& name : CorpusProjects()) {
      artifacts_.emplace(name, BuildArtifacts(name, PipelineOptions::Maximal()));
    }
  }

  int RunAll() {
    std::vector<std::pair<std::string, std::function<Outcome()>>> checks = {
        {"lossless scoring", [&] { return Lossless(); }},
        {"benchmark speed-up", [&] { return SpeedUp(); }},
        {"cost breakdown", [&] { return CostShare(); }},
        {"provisional failure rule", [&] { return FailureRule(); }},
        {"provisional miss rule", [&] { return MissRule(); }},
        {"determinacy exclusion", [&] { return Determinacy(); }},
        {"skip-gate soundness", [&] { return GateSoundness(); }},
        {"oracle equivalences", [&] { return Oracles(); }},
        {"transparency fuzz", [&] { return Transparency(); }},
        {"persistence", [&] { return Persistence(); }},
    };
    int failures = 0;
    for (size_t i = 0; i < checks.size(); ++i) {
      auto start = std::chrono::steady_clock::now();
      Outcome o;
      try {
        o = checks[i].second();
      } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
      }
      double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      if (!o.pass) ++failures;
      std::cout << (o.pass ? "PASS" : "FAIL") << " [" << i + 1 << "] " << checks[i].first << ": "
                << o.detail << " (" << Fmt(secs, 1) << "s)" << std::endl;
    }
    return failures == 0 ? 0 : 1;
  }

 private:
  // 1. Per-mutant verdicts identical with and without memoization.
  Outcome Lossless() {
    int mutants = 0, mismatches = 0;
    int64_t hits = 0;
    std::string where;
    for (auto& [name, a] : artifacts_) {
      MutationReport base = RunPool(a, false);
      MutationReport memo = RunPool(a, true, true);
      memo_reports_[name] = memo;
      for (size_t i = 0; i < base.results.size(); ++i) {
        ++mutants;
        if (!base.results[i].SameVerdict(memo.results[i])) {
          ++mismatches;
          where += " " + name + "#" + std::to_string(base.results[i].id);
        }
        hits += memo.results[i].hits;
      }
    }
    return {mismatches == 0 && artifacts_.size() >= 8,
            std::to_string(artifacts_.size()) + " programs, " + std::to_string(mutants) +
                " mutants, " + std::to_string(mismatches) + " verdict mismatches, " +
                std::to_string(hits) + " bypassed calls" + where};
  }

  // 2. Wall-time and step reduction on the designed benchmark.
  Outcome SpeedUp() {
    Artifacts a = BuildArtifacts("bench_expensive", PipelineOptions());
    std::vector<double> base_ns, memo_ns;
    int64_t base_steps = 0, memo_steps = 0;
    for (int r = 0; r < kBenchRuns; ++r) {
      MutationReport base = RunPool(a, false);
      MutationReport memo = RunPool(a, true);
      CompareRuns(base, memo);
      base_ns.push_back(static_cast<double>(base.wall_ns));
      memo_ns.push_back(static_cast<double>(memo.wall_ns));
      base_steps = base.total_steps;
      memo_steps = memo.total_steps;
    }
    double wall = (Median(base_ns) - Median(memo_ns)) / Median(base_ns);
    double steps = static_cast<double>(base_steps - memo_steps) / static_cast<double>(base_steps);
    std::string tables;
    for (const auto& [fn, t] : a.db.tables) tables += (tables.empty() ? "" : ",") + fn;
    return {wall >= kMinWallReduction && steps >= kMinStepReduction,
            "memoized {" + tables + "}, median wall-time reduction " + Fmt(wall * 100, 1) +
                "% (>= 15%), step reduction " + Fmt(steps * 100, 1) + "% (>= 25%)"};
  }

  // 3. Top-20% cost share.
  Outcome CostShare() {
    Program bench = LoadCorpus("bench_expensive");
    ProfileOptions p;
    p.exec = artifacts_.at("bench_expensive").exec;
    std::vector<double> shares;
    for (int r = 0; r < 3; ++r) {
      shares.push_back(ComputeCostBreakdown(ProfileSuite(bench, p), 0.2).share);
    }
    double med = Median(shares);
    bool ok = true;
    std::string list;
    for (double s : shares) {
      ok = ok && s >= kMinBenchShare && std::abs(s - med) <= kShareSpread;
      list += (list.empty() ? "" : ", ") + Fmt(s);
    }
    double single = ComputeCostBreakdown(ProfileSuite(LoadCorpus("single"), p), 0.2).share;
    ok = ok && single == 1.0;
    return {ok, "bench shares {" + list + "} (>= 0.40, +-0.05 of median), single-function share " +
                    Fmt(single, 6) + " (== 1.0)"};
  }

  // 4. A candidate whose memoized run fails a test is excluded.
  Outcome FailureRule() {
    PipelineOptions o = PipelineOptions::Maximal();
    o.determinacy.global_taint = false;
    o.determinacy.print_is_nondeterministic = false;
    print_candidate_ = BuildArtifacts("print_candidate", o);
    const MemoDB& db = print_candidate_->db;
    auto it = db.exclusions.find("noisy");
    bool excluded =
        it != db.exclusions.end() && it->second.reason == ExclusionReason::kNewTestFailure;
    int leaked = 0;
    auto check = [&](const MemoDB& d) {
      for (const auto& [fn, ex] : d.exclusions) {
        if (ex.reason == ExclusionReason::kNewTestFailure && d.tables.count(fn)) ++leaked;
      }
    };
    check(db);
    for (const auto& [name, a] : artifacts_) check(a.db);
    return {excluded && leaked == 0,
            "noisy -> " +
                (it == db.exclusions.end() ? std::string("not excluded") : it->second.ToString()) +
                ", " + std::to_string(leaked) + " failure-excluded functions in final tables"};
  }

  // 5. A candidate fed random inputs misses and is excluded; retained
  // functions never miss on the unmutated program.
  Outcome MissRule() {
    const MemoDB& db = artifacts_.at("nondet").db;
    auto it = db.exclusions.find("f");
    bool excluded =
        it != db.exclusions.end() && it->second.reason == ExclusionReason::kCacheMissOnCoveringTest;
    int64_t misses = 0, hits = 0;
    for (const auto& [name, a] : artifacts_) {
      std::vector<MemoSpec> specs = BuildMemoSpecs(a.program, a.analysis.effects);
      MemoInterceptor interceptor(a.program, a.db, specs);
      std::set<std::string> tests;
      for (const auto& [fn, t] : a.db.tables) {
        for (const std::string& test : a.profile.CoveringPassingTests(fn)) tests.insert(test);
      }
      for (const std::string& test : tests) {
        ExecOptions e = a.exec;
        e.stream = TestStream(test);
        e.step_limit = TestStepLimit(a.profile, test, 10);
        RunTest(a.program, test, &interceptor, e);
      }
      for (int64_t m : interceptor.misses()) misses += m;
      for (int64_t h : interceptor.hits()) hits += h;
    }
    return {excluded && misses == 0, "f -> " +
                                         (it == db.exclusions.end() ? std::string("not excluded")
                                                                    : it->second.ToString() + " [" +
                                                                          it->second.detail + "]") +
                                         ", re-run of retained tables: " + std::to_string(hits) +
                                         " hits, " + std::to_string(misses) + " misses"};
  }

  // Counts nondeterministic builtins fired inside memoized extents.
  class ExtentWatcher : public InstrumentationHooks {
   public:
    explicit ExtentWatcher(std::vector<bool> watched) : watched_(std::move(watched)) {}
    unsigned interests() const override { return kCalls | kBuiltins; }
    std::optional<Substitution> OnCallEnter(FunctionId fn, std::span<const Value>,
                                            const ExecState&) override {
      stack_.push_back(watched_[static_cast<size_t>(fn)]);
      if (stack_.back()) ++inside_;
      return std::nullopt;
    }
    void OnCallExit(FunctionId, std::span<const Value>, const Value&, const ExecState&) override {
      if (stack_.back()) --inside_;
      stack_.pop_back();
    }
    void OnBuiltin(Builtin b, const ExecState&) override {
      if (inside_ > 0 && (b == Builtin::kTimeNow || b == Builtin::kRand || b == Builtin::kPrint ||
                          b == Builtin::kLogSize)) {
        ++violations;
      }
    }
    void Reset() {
      stack_.clear();
      inside_ = 0;
    }
    int violations = 0;

   private:
    std::vector<bool> watched_;
    std::vector<bool> stack_;
    int inside_ = 0;
  };

  // 6. No candidate reaches a nondeterministic builtin.
  Outcome Determinacy() {
    int static_bad = 0, candidates = 0, dynamic_bad = 0;
    for (const auto& [name, a] : artifacts_) {
      std::vector<bool> watched(a.program.num_functions(), false);
      for (const Candidate& c : a.candidates) {
        ++candidates;
        const auto& reach = a.analysis.closure.at(c.fn);
        if (reach.count("time_now") || reach.count("rand") || reach.count("print") ||
            reach.count("log_size")) {
          ++static_bad;
        }
        watched[static_cast<size_t>(*a.program.FindFunction(c.fn))] = true;
      }
      ExtentWatcher watcher(watched);
      for (const std::string& test : a.program.tests()) {
        watcher.Reset();
        ExecOptions e = a.exec;
        e.stream = TestStream(test);
        RunTest(a.program, test, &watcher, e);
      }
      dynamic_bad += watcher.violations;
    }
    return {static_bad == 0 && dynamic_bad == 0,
            std::to_string(candidates) + " candidates, " + std::to_string(static_bad) +
                " reach time_now/rand/print statically, " + std::to_string(dynamic_bad) +
                " nondeterministic builtin calls inside memoized extents"};
  }

  // 7. No bypass of a function that is or reaches the mutated function.
  Outcome GateSoundness() {
    int64_t bypasses = 0, violations = 0;
    for (const auto& [name, a] : artifacts_) {
      auto it = memo_reports_.find(name);
      MutationReport memo = it != memo_reports_.end() ? it->second : RunPool(a, true, true);
      std::map<int32_t, const Mutant*> by_id;
      for (const Mutant& m : a.pool.mutants) by_id[m.id] = &m;
      for (const MutantResult& r : memo.results) {
        const std::string& mutated = by_id.at(r.id)->fn;
        for (const auto& [fn, count] : r.bypassed) {
          bypasses += count;
          if (fn == mutated || a.analysis.closure.at(fn).count(mutated)) violations += count;
        }
      }
    }
    return {violations == 0 && bypasses > 0, std::to_string(bypasses) + " logged bypasses, " +
                                                 std::to_string(violations) +
                                                 " with the mutated function in the closure"};
  }

  // 8. Closure vs BFS, generator vs brute force, runner vs exhaustive.
  Outcome Oracles() {
    std::mt19937_64 rng(2026);
    int closure_bad = 0;
    for (int g = 0; g < kRandomGraphs; ++g) {
      Digraph graph = RandomDigraph(rng, kGraphSize, g % 2 ? 0.03 : 0.1);
      DependencyClosure c = ComputeClosure(graph);
      for (const auto& [node, succ] : graph) {
        if (c.at(node) != BfsReachable(graph, node)) ++closure_bad;
      }
    }
    int pool_bad = 0, killed_bad = 0;
    for (const auto& [name, a] : artifacts_) {
      std::vector<MutantSite> expected = BruteForceMutants(a.program);
      std::vector<MutantSite> actual;
      for (const Mutant& m : a.pool.mutants) actual.push_back(SiteOf(m));
      if (expected != actual) ++pool_bad;
      MutationReport base = RunPool(a, false);
      std::set<int32_t> killed;
      for (const MutantResult& r : base.results) {
        if (r.status == MutantStatus::kKilled) killed.insert(r.id);
      }
      if (killed != ExhaustiveKilled(a.program, a.pool, a.exec)) ++killed_bad;
    }
    return {closure_bad == 0 && pool_bad == 0 && killed_bad == 0,
            "closure mismatches " + std::to_string(closure_bad) + "/" +
                std::to_string(kRandomGraphs * kGraphSize) + " nodes, pool mismatches " +
                std::to_string(pool_bad) + ", killed-set mismatches " + std::to_string(killed_bad) +
                " over " + std::to_string(artifacts_.size()) + " programs"};
  }

  // 9. Calls with and without look-up leave identical state.
  Outcome Transparency() {
    struct Target {
      const Artifacts* a;
      std::string fn;
    };
    std::vector<Target> targets;
    for (const auto& [name, a] : artifacts_) {
      for (const auto& [fn, t] : a.db.tables) targets.push_back({&a, fn});
    }
    std::mt19937_64 rng(9);
    int differences = 0, hits = 0;
    for (int i = 0; i < kFuzzRuns; ++i) {
      const Target& t = targets[rng() % targets.size()];
      const Artifacts& a = *t.a;
      FunctionId fid = *a.program.FindFunction(t.fn);
      std::vector<MemoSpec> specs = BuildMemoSpecs(a.program, a.analysis.effects);
      const MemoSpec& spec = specs[static_cast<size_t>(fid)];
      const MemoTable& table = a.db.tables.at(t.fn);
      auto entry = table.entries.begin();
      std::advance(entry, static_cast<long>(rng() % table.entries.size()));
      // Decode the recorded inputs, then perturb integers half the time.
      std::vector<Value> inputs;
      size_t pos = 0;
      while (pos < entry->first.size()) inputs.push_back(DecodeValue(entry->first, &pos));
      bool perturb = rng() % 2 == 0;
      std::function<Value(const Value&)> mutate = [&](const Value& v) -> Value {
        if (v.is_int() && rng() % 2 == 0) {
          return Value::Int(v.as_int() + static_cast<int64_t>(rng() % 7) - 3);
        }
        if (v.is_arr()) {
          std::vector<Value> items;
          for (const Value& x : v.as_arr()->items) items.push_back(mutate(x));
          return Value::Arr(std::move(items));
        }
        return v;
      };
      if (perturb) {
        for (Value& v : inputs) v = mutate(v);
      }
      size_t nargs = a.program.function(fid).params.size();
      ExecOptions e = a.exec;
      e.seed = rng();
      e.stream = "fuzz";
      auto run = [&](bool lookup) {
        ExecState state = InitialState(a.program, e);
        for (size_t g = 0; g < spec.key_globals.size(); ++g) {
          state.globals[static_cast<size_t>(spec.key_globals[g])] = DeepCopy(inputs[nargs + g]);
        }
        std::vector<Value> args;
        for (size_t k = 0; k < nargs; ++k) args.push_back(DeepCopy(inputs[k]));
        MemoInterceptor interceptor(a.program, a.db, specs);
        interceptor.EnableOnly(fid);
        CallRun r = CallFunction(a.program, fid, std::move(args), std::move(state),
                                 lookup ? &interceptor : nullptr, e);
        if (lookup) hits += static_cast<int>(interceptor.hits()[static_cast<size_t>(fid)]);
        return r;
      };
      CallRun plain = run(false);
      CallRun memo = run(true);
      bool same = plain.result.has_value() == memo.result.has_value() &&
                  (!plain.result || DeepEqual(*plain.result, *memo.result)) &&
                  plain.fault.has_value() == memo.fault.has_value() &&
                  (!plain.fault || plain.fault->verdict == memo.fault->verdict) &&
                  plain.state.output == memo.state.output && plain.args.size() == memo.args.size();
      for (size_t k = 0; same && k < plain.args.size(); ++k) {
        same = DeepEqual(plain.args[k], memo.args[k]);
      }
      for (size_t g = 0; same && g < plain.state.globals.size(); ++g) {
        same = DeepEqual(plain.state.globals[g], memo.state.globals[g]);
      }
      if (!same) ++differences;
    }
    return {differences == 0 && hits > 0,
            std::to_string(kFuzzRuns) + " executions over " + std::to_string(targets.size()) +
                " memoized functions, " + std::to_string(hits) + " hits, " +
                std::to_string(differences) + " differences"};
  }

  // 10. Round trip and corruption detection for every generated database.
  Outcome Persistence() {
    std::vector<std::pair<const Program*, const MemoDB*>> dbs;
    for (const auto& [name, a] : artifacts_) {
      dbs.emplace_back(&a.program, &a.raw);
      dbs.emplace_back(&a.program, &a.db);
    }
    if (print_candidate_) dbs.emplace_back(&print_candidate_->program, &print_candidate_->db);
    std::filesystem::path dir = MakeTempDir("memomut-acceptance");
    std::mt19937_64 rng(10);
    int round_trip_bad = 0, undetected = 0, corruptions = 0, index = 0;
    for (const auto& [program, db] : dbs) {
      std::filesystem::path path = dir / ("db" + std::to_string(index++) + ".memo");
      SaveDb(*db, path);
      if (!(LoadDb(path, *program) == *db)) ++round_trip_bad;
      std::string bytes = SerializeDb(*db);
      for (int k = 0; k < kCorruptOffsets; ++k) {
        std::string bad = bytes;
        size_t offset = rng() % bad.size();
        bad[offset] = static_cast<char>(bad[offset] ^ static_cast<char>(1 + rng() % 255));
        ++corruptions;
        try {
          DeserializeDb(bad, program);
          ++undetected;
        } catch (const Error& e) {
          if (e.code() != ErrorCode::kCorruptDb) ++undetected;
        }
      }
    }
    std::filesystem::remove_all(dir);
    return {round_trip_bad == 0 && undetected == 0,
            std::to_string(dbs.size()) + " databases, " + std::to_string(round_trip_bad) +
                " round-trip differences, " + std::to_string(corruptions - undetected) + "/" +
                std::to_string(corruptions) + " corruptions reported as CorruptDB"};
  }

  std::map<std::string, Artifacts> artifacts_;
  std::map<std::string, MutationReport> memo_reports_;
  std::optional<Artifacts> print_candidate_;
};

}  // namespace
}  // namespace memomut::testing

int main() {
  try {
    memomut::testing::Acceptance acceptance;
    return acceptance.RunAll();
  } catch (const std::exception& e) {
    std::cout << "FAIL setup: " << e.what() << std::endl;
    return 1;
  }
}
