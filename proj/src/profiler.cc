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

#include "memomut/profiler.h"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>

#include "json.hpp"
#include "memomut/error.h"
#include "memomut/printer.h"

namespace memomut {
namespace {

int64_t NowNs() {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

class ProfilingHooks : public InstrumentationHooks {
 public:
  explicit ProfilingHooks(const Program& program)
      : program_(program), stats_(program.num_functions()) {}

  unsigned interests() const override { return kCalls; }

  std::optional<Substitution> OnCallEnter(FunctionId fn, std::span<const Value>,
                                          const ExecState& state) override {
    stats_[static_cast<size_t>(fn)].invocations++;
    covered_.insert(fn);
    open_.push_back({state.call_stack.size() == 1, state.steps, NowNs()});
    return std::nullopt;
  }

  void OnCallExit(FunctionId fn, std::span<const Value>, const Value&,
                  const ExecState& state) override {
    int64_t now = NowNs();
    Open o = open_.back();
    open_.pop_back();
    FunctionProfile& p = stats_[static_cast<size_t>(fn)];
    p.inclusive_ns += now - o.start_ns;
    p.inclusive_steps += state.steps - o.start_steps;
    if (o.top_level) top_level_ns_ += now - o.start_ns;
  }

  // Per-test state; function totals keep accumulating.
  void BeginTest() {
    covered_.clear();
    open_.clear();
    top_level_ns_ = 0;
  }

  std::set<std::string> Covered() const {
    std::set<std::string> out;
    for (FunctionId f : covered_) out.insert(program_.function(f).name);
    return out;
  }
  int64_t top_level_ns() const { return top_level_ns_; }
  const std::vector<FunctionProfile>& stats() const { return stats_; }

 private:
  struct Open {
    bool top_level;
    int64_t start_steps;
    int64_t start_ns;
  };

  const Program& program_;
  std::vector<FunctionProfile> stats_;
  std::set<FunctionId> covered_;
  std::vector<Open> open_;
  int64_t top_level_ns_ = 0;
};

int64_t Median(std::vector<int64_t> v) {
  if (v.empty()) return 0;
  std::sort(v.begin(), v.end());
  size_t mid = v.size() / 2;
  if (v.size() % 2) return v[mid];
  return (v[mid - 1] + v[mid]) / 2;
}

std::string Hex64(uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

std::vector<std::string> Profile::CoveringPassingTests(const std::string& fn) const {
  std::vector<std::string> out;
  for (const auto& [name, t] : tests) {
    if (t.outcome.passed() && t.covered.count(fn)) out.push_back(name);
  }
  return out;
}

Profile ProfileSuite(const Program& program, const ProfileOptions& options) {
  if (program.tests().empty()) {
    throw Error(ErrorCode::kSuiteEmpty, "program has no test_* functions");
  }
  int reps = std::max(1, options.reps);
  std::vector<Profile> runs;
  for (int rep = 0; rep < reps; ++rep) {
    ProfilingHooks hooks(program);
    Profile p;
    for (const std::string& test : program.tests()) {
      hooks.BeginTest();
      ExecOptions exec = options.exec;
      exec.stream = TestStream(test);
      TestRun run = RunTest(program, test, &hooks, exec);
      TestProfile& tp = p.tests[test];
      tp.outcome = run.outcome;
      tp.covered = hooks.Covered();
      tp.top_level_ns = hooks.top_level_ns();
    }
    for (size_t f = 0; f < program.num_functions(); ++f) {
      p.functions[program.function(static_cast<FunctionId>(f)).name] = hooks.stats()[f];
    }
    runs.push_back(std::move(p));
  }

  // Counts, steps, coverage and verdicts come from the first rep; timings are
  // medians across reps.
  Profile out = runs.front();
  out.fingerprint = Fingerprint(program);
  for (auto& [name, fp] : out.functions) {
    std::vector<int64_t> ns;
    for (const Profile& r : runs) ns.push_back(r.functions.at(name).inclusive_ns);
    fp.inclusive_ns = Median(ns);
  }
  for (auto& [name, tp] : out.tests) {
    std::vector<int64_t> wall, top;
    for (const Profile& r : runs) {
      wall.push_back(r.tests.at(name).outcome.wall_ns);
      top.push_back(r.tests.at(name).top_level_ns);
    }
    tp.outcome.wall_ns = Median(wall);
    tp.top_level_ns = Median(top);
    out.total_ns += tp.outcome.wall_ns;
    out.total_steps += tp.outcome.steps;
  }
  return out;
}

int ExpensivenessCriterion::ResolveLimit(int num_functions) const {
  if (!limit_is_percent) return std::max(0, static_cast<int>(limit));
  double raw = limit * num_functions / 100.0;
  // Guard against 20% of 10 landing at 2.0000000004.
  return std::max(0, static_cast<int>(std::ceil(raw - 1e-9)));
}

std::string ExpensivenessCriterion::ToString() const {
  std::string lim =
      limit_is_percent ? std::to_string(limit) : std::to_string(static_cast<int64_t>(limit));
  if (limit_is_percent) {
    // Trim trailing zeros of the percentage.
    while (!lim.empty() && lim.back() == '0') lim.pop_back();
    if (!lim.empty() && lim.back() == '.') lim.pop_back();
    lim += "%";
  }
  return "tau=" + std::to_string(tau_ns) + "ns limit=" + lim +
         " mode=" + std::string(TauModeName(tau_mode));
}

int64_t ParseDuration(std::string_view text) {
  size_t i = 0;
  while (i < text.size() && (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '.'))
    ++i;
  std::string number(text.substr(0, i));
  std::string_view unit = text.substr(i);
  if (number.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "bad duration: " + std::string(text));
  }
  double v = std::stod(number);
  double scale;
  if (unit == "ns") {
    scale = 1;
  } else if (unit == "us") {
    scale = 1e3;
  } else if (unit == "ms" || unit.empty()) {
    scale = 1e6;
  } else if (unit == "s") {
    scale = 1e9;
  } else {
    throw Error(ErrorCode::kInvalidArgument, "bad duration unit: " + std::string(text));
  }
  int64_t ns = static_cast<int64_t>(std::llround(v * scale));
  if (ns <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "tau must be positive: " + std::string(text));
  }
  return ns;
}

void ParseLimit(std::string_view text, ExpensivenessCriterion& crit) {
  bool percent = !text.empty() && text.back() == '%';
  std::string number(percent ? text.substr(0, text.size() - 1) : text);
  double v = 0;
  try {
    size_t used = 0;
    v = std::stod(number, &used);
    if (used != number.size()) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw Error(ErrorCode::kInvalidArgument, "bad limit: " + std::string(text));
  }
  if (v < 0 || (!percent && v != std::floor(v))) {
    throw Error(ErrorCode::kInvalidArgument, "bad limit: " + std::string(text));
  }
  crit.limit_is_percent = percent;
  crit.limit = v;
}

TauMode ParseTauMode(std::string_view text) {
  if (text == "mean") return TauMode::kMean;
  if (text == "cumulative") return TauMode::kCumulative;
  throw Error(ErrorCode::kInvalidArgument, "bad tau mode: " + std::string(text));
}

std::string_view TauModeName(TauMode mode) {
  return mode == TauMode::kMean ? "mean" : "cumulative";
}

std::vector<Candidate> SelectCandidates(const Profile& profile, const DeterminacyReport& det,
                                        const ExpensivenessCriterion& crit) {
  int non_tests = 0;
  std::vector<Candidate> out;
  for (const auto& [name, fp] : profile.functions) {
    if (IsTestName(name)) continue;
    ++non_tests;
    if (!det.IsDeterministic(name)) continue;
    double t =
        crit.tau_mode == TauMode::kMean ? fp.mean_ns() : static_cast<double>(fp.inclusive_ns);
    if (!(t > static_cast<double>(crit.tau_ns))) continue;
    std::vector<std::string> covering = profile.CoveringPassingTests(name);
    if (covering.empty()) continue;
    out.push_back({name, fp.inclusive_ns, std::move(covering)});
  }
  std::sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
    if (a.inclusive_ns != b.inclusive_ns) return a.inclusive_ns > b.inclusive_ns;
    return a.fn < b.fn;
  });
  size_t limit = static_cast<size_t>(crit.ResolveLimit(non_tests));
  if (out.size() > limit) out.resize(limit);
  return out;
}

CostBreakdown ComputeCostBreakdown(const Profile& profile, double top_fraction) {
  if (!(top_fraction > 0) || top_fraction > 1) {
    throw Error(ErrorCode::kInvalidArgument, "top fraction must be in (0, 1]");
  }
  std::vector<std::pair<std::string, int64_t>> ranked;
  for (const auto& [name, fp] : profile.functions) {
    if (!IsTestName(name)) ranked.emplace_back(name, fp.inclusive_ns);
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  size_t k =
      static_cast<size_t>(std::ceil(top_fraction * static_cast<double>(ranked.size()) - 1e-9));
  k = std::min(k, ranked.size());
  CostBreakdown cb;
  for (size_t i = 0; i < k; ++i) {
    cb.top_ns += ranked[i].second;
    cb.top.push_back(ranked[i].first);
  }
  for (const auto& [name, tp] : profile.tests) cb.total_ns += tp.top_level_ns;
  cb.share =
      cb.total_ns > 0 ? static_cast<double>(cb.top_ns) / static_cast<double>(cb.total_ns) : 0.0;
  return cb;
}

std::string ProfileToJson(const Profile& profile, const std::vector<Candidate>* candidates,
                          const ExpensivenessCriterion* crit) {
  using nlohmann::json;
  json doc;
  doc["fingerprint"] = Hex64(profile.fingerprint);
  doc["total_ns"] = profile.total_ns;
  doc["total_steps"] = profile.total_steps;
  json fns = json::object();
  for (const auto& [name, fp] : profile.functions) {
    fns[name] = {{"invocations", fp.invocations},
                 {"inclusive_ns", fp.inclusive_ns},
                 {"inclusive_steps", fp.inclusive_steps},
                 {"mean_ns", fp.mean_ns()}};
  }
  doc["functions"] = std::move(fns);
  json tests = json::object();
  for (const auto& [name, tp] : profile.tests) {
    const TestOutcome& o = tp.outcome;
    json t = {{"verdict", VerdictName(o.verdict)},
              {"steps", o.steps},
              {"duration_ns", o.wall_ns},
              {"top_level_ns", tp.top_level_ns},
              {"covered", tp.covered}};
    if (o.verdict == Verdict::kRuntimeError) t["fault"] = FaultKindName(o.fault);
    if (!o.passed()) {
      t["node"] = o.node;
      t["fault_function"] = o.fault_function;
    }
    tests[name] = std::move(t);
  }
  doc["tests"] = std::move(tests);
  if (crit) {
    doc["criterion"] = {{"tau_ns", crit->tau_ns},
                        {"limit", crit->limit},
                        {"limit_is_percent", crit->limit_is_percent},
                        {"tau_mode", TauModeName(crit->tau_mode)}};
  }
  if (candidates) {
    json list = json::array();
    for (const Candidate& c : *candidates) {
      list.push_back(
          {{"fn", c.fn}, {"inclusive_ns", c.inclusive_ns}, {"covering_tests", c.covering_tests}});
    }
    doc["candidates"] = std::move(list);
  }
  return doc.dump(2) + "\n";
}

Profile ProfileFromJson(std::string_view text) {
  using nlohmann::json;
  Profile p;
  try {
    json doc = json::parse(text);
    std::string fp = doc.at("fingerprint").get<std::string>();
    p.fingerprint = std::stoull(fp, nullptr, 16);
    p.total_ns = doc.at("total_ns").get<int64_t>();
    p.total_steps = doc.at("total_steps").get<int64_t>();
    for (const auto& [name, f] : doc.at("functions").items()) {
      FunctionProfile& fp2 = p.functions[name];
      fp2.invocations = f.at("invocations").get<int64_t>();
      fp2.inclusive_ns = f.at("inclusive_ns").get<int64_t>();
      fp2.inclusive_steps = f.at("inclusive_steps").get<int64_t>();
    }
    for (const auto& [name, t] : doc.at("tests").items()) {
      TestProfile& tp = p.tests[name];
      tp.outcome.test = name;
      auto verdict = VerdictByName(t.at("verdict").get<std::string>());
      if (!verdict) throw std::invalid_argument("bad verdict");
      tp.outcome.verdict = *verdict;
      tp.outcome.steps = t.at("steps").get<int64_t>();
      tp.outcome.wall_ns = t.at("duration_ns").get<int64_t>();
      tp.top_level_ns = t.at("top_level_ns").get<int64_t>();
      tp.covered = t.at("covered").get<std::set<std::string>>();
      if (t.contains("node")) tp.outcome.node = t.at("node").get<NodeId>();
      if (t.contains("fault_function")) {
        tp.outcome.fault_function = t.at("fault_function").get<std::string>();
      }
      if (t.contains("fault")) {
        std::string fault = t.at("fault").get<std::string>();
        for (int k = 0; k <= static_cast<int>(FaultKind::kStackOverflow); ++k) {
          if (FaultKindName(static_cast<FaultKind>(k)) == fault) {
            tp.outcome.fault = static_cast<FaultKind>(k);
          }
        }
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kIo, std::string("malformed profile: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw Error(ErrorCode::kIo, std::string("malformed profile: ") + e.what());
  }
  return p;
}

}  // namespace memomut
