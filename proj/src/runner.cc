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

#include "memomut/runner.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <exception>
#include <memory>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "memomut/error.h"
#include "memomut/printer.h"

namespace memomut {
namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

int64_t ElapsedNs(Clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start).count();
}

// Runs mutants; one per worker thread.
class MutantExecutor {
 public:
  MutantExecutor(const Program& program, const Profile& profile, const DependencyClosure& closure,
                 const std::vector<MemoSpec>* specs, const MemoDB* db, const RunConfig& cfg)
      : program_(program), profile_(profile), closure_(closure), cfg_(cfg) {
    if (cfg.memo) {
      interceptor_ = std::make_unique<MemoInterceptor>(program, *db, *specs);
      interceptor_->set_log_decisions(cfg.log_decisions);
    }
    for (const auto& [name, t] : profile.tests) {
      if (t.outcome.passed()) passing_.push_back(name);
    }
  }

  MutantResult Run(const Mutant& m) {
    Clock::time_point start = Clock::now();
    MutantResult r;
    r.id = m.id;
    std::vector<std::string> covering = profile_.CoveringPassingTests(m.fn);
    if (covering.empty()) {
      r.status = MutantStatus::kNotCovered;
      r.wall_ns = ElapsedNs(start);
      return r;
    }
    const std::vector<std::string>& tests = cfg_.all_tests ? passing_ : covering;

    Program mutated;
    try {
      mutated = ApplyMutant(program_, m);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kStaleMutant) throw;
      throw Error(ErrorCode::kInvalidPool, e.what());
    }

    if (interceptor_) {
      std::vector<bool> gated(program_.num_functions(), false);
      for (size_t f = 0; f < program_.num_functions(); ++f) {
        const std::string& name = program_.function(static_cast<FunctionId>(f)).name;
        auto it = closure_.find(name);
        // closure(f) contains f itself, so this also gates f == m.fn.
        gated[f] = name == m.fn || (it != closure_.end() && it->second.count(m.fn));
      }
      interceptor_->SetGated(std::move(gated));
      interceptor_->ResetCounters();
    }

    r.status = MutantStatus::kSurvived;
    for (const std::string& test : tests) {
      ExecOptions exec = cfg_.exec;
      exec.stream = TestStream(test);
      exec.step_limit = TestStepLimit(profile_, test, cfg_.step_limit_factor);
      TestRun run = RunTest(mutated, test, interceptor_.get(), exec);
      ++r.tests_run;
      r.steps += run.outcome.steps;
      if (!run.outcome.passed()) {
        r.status = MutantStatus::kKilled;
        r.killing_test = test;
        r.cause = run.outcome.verdict;
        break;
      }
    }

    if (interceptor_) {
      for (size_t f = 0; f < program_.num_functions(); ++f) {
        int64_t h = interceptor_->hits()[f], mi = interceptor_->misses()[f],
                g = interceptor_->gated()[f];
        if (h + mi + g == 0) continue;
        r.hits += h;
        r.misses += mi;
        r.gated += g;
        MethodCounters& c = counters_[program_.function(static_cast<FunctionId>(f)).name];
        c.hits += h;
        c.misses += mi;
        c.gated += g;
      }
      for (const auto& d : interceptor_->decisions()) {
        if (d.event == MemoInterceptor::Event::kHit) {
          ++r.bypassed[program_.function(d.fn).name];
        }
      }
    }
    r.wall_ns = ElapsedNs(start);
    return r;
  }

  const std::map<std::string, MethodCounters>& counters() const { return counters_; }

 private:
  const Program& program_;
  const Profile& profile_;
  const DependencyClosure& closure_;
  const RunConfig& cfg_;
  std::unique_ptr<MemoInterceptor> interceptor_;
  std::vector<std::string> passing_;
  std::map<std::string, MethodCounters> counters_;
};

json CountersJson(const std::map<std::string, MethodCounters>& methods) {
  json out = json::object();
  for (const auto& [name, c] : methods) {
    out[name] = {{"hits", c.hits}, {"misses", c.misses}, {"gated", c.gated}};
  }
  return out;
}

std::map<std::string, MethodCounters> CountersFromJson(const json& j) {
  std::map<std::string, MethodCounters> out;
  for (const auto& [name, c] : j.items()) {
    out[name] = {c.at("hits").get<int64_t>(), c.at("misses").get<int64_t>(),
                 c.at("gated").get<int64_t>()};
  }
  return out;
}

std::string Percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f%%", v);
  return buf;
}

}  // namespace

void RunConfig::Validate() const {
  if (step_limit_factor < 2) {
    throw Error(ErrorCode::kInvalidArgument, "step-limit-factor must be at least 2");
  }
  if (workers < 1) throw Error(ErrorCode::kInvalidArgument, "workers must be at least 1");
}

std::string_view MutantStatusName(MutantStatus s) {
  switch (s) {
    case MutantStatus::kKilled:
      return "Killed";
    case MutantStatus::kSurvived:
      return "Survived";
    case MutantStatus::kNotCovered:
      return "NotCovered";
  }
  return "?";
}

std::string MutantResult::VerdictString() const {
  if (status != MutantStatus::kKilled) return std::string(MutantStatusName(status));
  std::string cause_name =
      cause == Verdict::kStepLimitExceeded ? "StepLimit" : std::string(VerdictName(cause));
  return "Killed(" + killing_test + ", " + cause_name + ")";
}

bool MutantResult::SameVerdict(const MutantResult& other) const {
  return id == other.id && status == other.status && killing_test == other.killing_test &&
         cause == other.cause;
}

MutationReport RunMutationAnalysis(const Program& program, const MutantPool& pool,
                                   const Profile& profile, const DependencyClosure& closure,
                                   const SideEffectSummary& effects, const MemoDB* db,
                                   const RunConfig& cfg) {
  cfg.Validate();
  uint64_t fp = Fingerprint(program);
  if (profile.fingerprint != fp) {
    throw Error(ErrorCode::kFingerprintMismatch, "profile was taken from a different program");
  }
  if (cfg.memo) {
    if (!db) throw Error(ErrorCode::kInvalidArgument, "memo run without a memo database");
    if (db->fingerprint != fp) {
      throw Error(ErrorCode::kFingerprintMismatch,
                  "memo database was built for a different program");
    }
  }
  std::vector<MemoSpec> specs;
  if (cfg.memo) specs = BuildMemoSpecs(program, effects);

  MutationReport report;
  report.fingerprint = fp;
  report.memo = cfg.memo;
  report.results.resize(pool.mutants.size());

  Clock::time_point start = Clock::now();
  std::atomic<size_t> next{0};
  std::mutex mu;
  std::exception_ptr failure;
  auto work = [&] {
    MutantExecutor exec(program, profile, closure, &specs, db, cfg);
    try {
      for (size_t i = next++; i < pool.mutants.size(); i = next++) {
        report.results[i] = exec.Run(pool.mutants[i]);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(mu);
      if (!failure) failure = std::current_exception();
      next = pool.mutants.size();
    }
    std::lock_guard<std::mutex> lock(mu);
    for (const auto& [name, c] : exec.counters()) {
      MethodCounters& t = report.methods[name];
      t.hits += c.hits;
      t.misses += c.misses;
      t.gated += c.gated;
    }
  };
  int workers = std::min<int>(cfg.workers, std::max<int>(1, static_cast<int>(pool.mutants.size())));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w) threads.emplace_back(work);
    for (std::thread& t : threads) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  report.wall_ns = ElapsedNs(start);

  std::sort(report.results.begin(), report.results.end(),
            [](const MutantResult& a, const MutantResult& b) { return a.id < b.id; });
  report.total = static_cast<int32_t>(report.results.size());
  for (const MutantResult& r : report.results) {
    if (r.status == MutantStatus::kKilled) ++report.killed;
    report.total_steps += r.steps;
  }
  if (!report.results.empty()) report.score = ComputeScore(report.results);
  return report;
}

double ComputeScore(const std::vector<MutantResult>& results) {
  if (results.empty()) throw Error(ErrorCode::kEmptyPool, "no mutants to score");
  size_t killed = std::count_if(results.begin(), results.end(), [](const MutantResult& r) {
    return r.status == MutantStatus::kKilled;
  });
  return static_cast<double>(killed) / static_cast<double>(results.size());
}

std::string FormatScore(double score) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", score);
  return buf;
}

Comparison CompareRuns(const MutationReport& base, const MutationReport& memo) {
  if (base.score != memo.score || base.killed != memo.killed || base.total != memo.total) {
    throw Error(ErrorCode::kScoreMismatch, "mutation score changed: " + FormatScore(base.score) +
                                               " without memoization, " + FormatScore(memo.score) +
                                               " with");
  }
  Comparison c;
  c.base_score = base.score;
  c.memo_score = memo.score;
  c.base_ns = base.wall_ns;
  c.memo_ns = memo.wall_ns;
  if (base.wall_ns > 0) {
    c.speedup_percent = 100.0 * static_cast<double>(base.wall_ns - memo.wall_ns) /
                        static_cast<double>(base.wall_ns);
  }
  c.base_steps = base.total_steps;
  c.memo_steps = memo.total_steps;
  if (base.total_steps > 0) {
    c.step_reduction_percent = 100.0 * static_cast<double>(base.total_steps - memo.total_steps) /
                               static_cast<double>(base.total_steps);
  }
  std::map<int32_t, const MutantResult*> by_id;
  for (const MutantResult& r : memo.results) by_id[r.id] = &r;
  for (const MutantResult& r : base.results) {
    auto it = by_id.find(r.id);
    if (it == by_id.end() || !r.SameVerdict(*it->second)) c.verdict_mismatches.push_back(r.id);
  }
  c.methods = memo.methods;
  return c;
}

std::string ReportToJson(const MutationReport& report) {
  json results = json::array();
  for (const MutantResult& r : report.results) {
    json jr = {{"id", r.id},
               {"status", MutantStatusName(r.status)},
               {"verdict", r.VerdictString()},
               {"tests_run", r.tests_run},
               {"steps", r.steps},
               {"wall_ns", r.wall_ns},
               {"hits", r.hits},
               {"misses", r.misses},
               {"gated", r.gated}};
    if (r.status == MutantStatus::kKilled) {
      jr["killing_test"] = r.killing_test;
      jr["cause"] = VerdictName(r.cause);
    }
    if (!r.bypassed.empty()) jr["bypassed"] = r.bypassed;
    results.push_back(std::move(jr));
  }
  char fp[17];
  std::snprintf(fp, sizeof(fp), "%016llx", static_cast<unsigned long long>(report.fingerprint));
  json doc = {{"fingerprint", fp},
              {"memo", report.memo},
              {"score", report.score},
              {"score_text", FormatScore(report.score)},
              {"killed", report.killed},
              {"total", report.total},
              {"results", std::move(results)},
              {"methods", CountersJson(report.methods)},
              {"wall_ns", report.wall_ns},
              {"total_steps", report.total_steps}};
  return doc.dump(2) + "\n";
}

MutationReport ReportFromJson(std::string_view text) {
  try {
    json doc = json::parse(text);
    MutationReport report;
    report.fingerprint = std::stoull(doc.at("fingerprint").get<std::string>(), nullptr, 16);
    report.memo = doc.at("memo").get<bool>();
    report.score = doc.at("score").get<double>();
    report.killed = doc.at("killed").get<int32_t>();
    report.total = doc.at("total").get<int32_t>();
    report.wall_ns = doc.at("wall_ns").get<int64_t>();
    report.total_steps = doc.at("total_steps").get<int64_t>();
    report.methods = CountersFromJson(doc.at("methods"));
    for (const json& jr : doc.at("results")) {
      MutantResult r;
      r.id = jr.at("id").get<int32_t>();
      std::string status = jr.at("status").get<std::string>();
      if (status == "Killed") {
        r.status = MutantStatus::kKilled;
        r.killing_test = jr.at("killing_test").get<std::string>();
        auto v = VerdictByName(jr.at("cause").get<std::string>());
        if (!v) throw Error(ErrorCode::kInvalidArgument, "bad cause in report");
        r.cause = *v;
      } else if (status == "Survived") {
        r.status = MutantStatus::kSurvived;
      } else if (status == "NotCovered") {
        r.status = MutantStatus::kNotCovered;
      } else {
        throw Error(ErrorCode::kInvalidArgument, "bad mutant status '" + status + "'");
      }
      r.tests_run = jr.at("tests_run").get<int32_t>();
      r.steps = jr.at("steps").get<int64_t>();
      r.wall_ns = jr.at("wall_ns").get<int64_t>();
      r.hits = jr.at("hits").get<int64_t>();
      r.misses = jr.at("misses").get<int64_t>();
      r.gated = jr.at("gated").get<int64_t>();
      if (jr.contains("bypassed")) {
        r.bypassed = jr.at("bypassed").get<std::map<std::string, int64_t>>();
      }
      report.results.push_back(std::move(r));
    }
    return report;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("malformed report: ") + e.what());
  }
}

std::string ComparisonToJson(const Comparison& c) {
  json doc = {{"base_score", FormatScore(c.base_score)},
              {"memo_score", FormatScore(c.memo_score)},
              {"base_ns", c.base_ns},
              {"memo_ns", c.memo_ns},
              {"speedup_percent", c.speedup_percent},
              {"base_steps", c.base_steps},
              {"memo_steps", c.memo_steps},
              {"step_reduction_percent", c.step_reduction_percent},
              {"verdict_mismatches", c.verdict_mismatches},
              {"methods", CountersJson(c.methods)}};
  return doc.dump(2) + "\n";
}

std::string ComparisonToText(const Comparison& c) {
  std::ostringstream out;
  out << "score            " << FormatScore(c.base_score) << " -> " << FormatScore(c.memo_score)
      << "\n";
  out << "mutant testing   " << c.base_ns / 1'000'000 << " ms -> " << c.memo_ns / 1'000'000
      << " ms (speed-up " << Percent(c.speedup_percent) << ")\n";
  out << "steps            " << c.base_steps << " -> " << c.memo_steps << " ("
      << Percent(c.step_reduction_percent) << " fewer)\n";
  out << "verdict changes  " << c.verdict_mismatches.size() << "\n";
  if (!c.methods.empty()) {
    out << "method                         hits     misses      gated\n";
    for (const auto& [name, m] : c.methods) {
      char line[160];
      std::snprintf(line, sizeof(line), "%-24s %10lld %10lld %10lld\n", name.c_str(),
                    static_cast<long long>(m.hits), static_cast<long long>(m.misses),
                    static_cast<long long>(m.gated));
      out << line;
    }
  }
  return out.str();
}

}  // namespace memomut
