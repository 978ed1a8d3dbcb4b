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

// memomut: mutation analysis with memoized expensive functions.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "memomut/analysis.h"
#include "memomut/config.h"
#include "memomut/error.h"
#include "memomut/memo.h"
#include "memomut/mutation.h"
#include "memomut/parser.h"
#include "memomut/printer.h"
#include "memomut/profiler.h"
#include "memomut/runner.h"

namespace memomut {
namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitDb = 2;
constexpr int kExitScoreMismatch = 3;
constexpr int kExitUsage = 64;

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
}

// Writes to `path`, or stdout when it is empty.
void Emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
  } else {
    WriteFile(path, text);
  }
}

// Options shared by the subcommands. Tuning flags are collected as raw
// strings and applied on top of the project's config file.
struct Options {
  std::string dir;
  std::map<std::string, std::string> overrides;
  bool no_global_taint = false;
  bool print_deterministic = false;
  std::string output;
  std::string mutants;
  std::string memo;
  std::string profile;
  std::string dump_json;
  std::string out_dir;
  bool all_tests = false;
  bool log_decisions = false;
  std::string base_report;
  std::string memo_report;
};

void AddOverride(CLI::App* app, Options& o, const std::string& flag, const std::string& key,
                 const std::string& help) {
  app->add_option_function<std::string>(
      flag, [&o, key](const std::string& v) { o.overrides[key] = v; }, help);
}

void AddExecFlags(CLI::App* app, Options& o) {
  AddOverride(app, o, "--seed", "seed", "Seed of the rand builtin");
  app->add_flag_callback(
      "--fake-time", [&o] { o.overrides["fake-time"] = "true"; },
      "time_now returns seed-derived monotonic fake time");
  AddOverride(app, o, "--step-limit-factor", "step-limit-factor",
              "Step limit = baseline steps x factor + 1000");
}

void AddAnalysisFlags(CLI::App* app, Options& o) {
  app->add_flag("--no-global-taint", o.no_global_taint,
                "Do not treat readers of nondeterministically written globals as nondeterministic");
  app->add_flag("--print-deterministic", o.print_deterministic,
                "Do not treat print as nondeterministic");
}

void AddCriterionFlags(CLI::App* app, Options& o) {
  AddOverride(app, o, "--tau", "tau", "Expensiveness threshold, e.g. 1ms, 500us");
  AddOverride(app, o, "--limit", "limit", "Candidate cap: a count or a percentage like 20%");
  AddOverride(app, o, "--tau-mode", "tau-mode", "mean or cumulative");
  AddOverride(app, o, "--profile-reps", "profile-reps", "Profile repetitions (median)");
}

void AddMemoFlags(CLI::App* app, Options& o) {
  AddOverride(app, o, "--miss-tolerance", "miss-tolerance",
              "Cache misses allowed per function during provisional runs");
}

void AddRunFlags(CLI::App* app, Options& o) {
  AddOverride(app, o, "--workers", "workers", "Parallel mutant executors");
  app->add_flag("--all-tests", o.all_tests, "Run every passing test, not just covering ones");
  app->add_flag("--log-decisions", o.log_decisions, "Record bypassed functions per mutant");
}

// Everything a stage may need, built lazily.
class Session {
 public:
  explicit Session(const Options& o) : o_(o) {
    cfg_ = LoadProjectConfig(o.dir);
    for (const auto& [key, value] : o.overrides) cfg_.Set(key, value);
    program_ = LoadProject(o.dir);
  }

  const ProjectConfig& cfg() const { return cfg_; }
  const Program& program() const { return program_; }

  ExecOptions Exec() const {
    ExecOptions e;
    e.seed = cfg_.seed;
    e.fake_time = cfg_.fake_time;
    return e;
  }

  const Analysis& analysis() {
    if (!analysis_) {
      DeterminacyOptions d;
      d.global_taint = !o_.no_global_taint;
      d.print_is_nondeterministic = !o_.print_deterministic;
      analysis_ = Analyze(program_, d);
      for (const std::string& w : analysis_->call_graph.warnings) {
        std::cerr << "warning: " << w << "\n";
      }
    }
    return *analysis_;
  }

  const Profile& profile() {
    if (!profile_) {
      if (!o_.profile.empty()) {
        profile_ = ProfileFromJson(ReadFile(o_.profile));
      } else {
        ProfileOptions p;
        p.exec = Exec();
        p.reps = cfg_.profile_reps;
        profile_ = ProfileSuite(program_, p);
      }
    }
    return *profile_;
  }

  std::vector<Candidate> Candidates() {
    return SelectCandidates(profile(), analysis().determinacy, cfg_.criterion);
  }

  MemoDB BuildDb(ProvisionalStats* stats) {
    MemoOptions m;
    m.exec = Exec();
    m.step_limit_factor = cfg_.step_limit_factor;
    m.miss_tolerance = cfg_.miss_tolerance;
    MemoDB raw = RecordTables(program_, analysis(), Candidates(), profile(), cfg_.criterion, m);
    return ProvisionalMemoization(program_, analysis(), std::move(raw), profile(), m, stats);
  }

  RunConfig Run(bool memo) const {
    RunConfig r;
    r.memo = memo;
    r.step_limit_factor = cfg_.step_limit_factor;
    r.all_tests = o_.all_tests;
    r.workers = cfg_.workers;
    r.log_decisions = o_.log_decisions;
    r.exec = Exec();
    return r;
  }

 private:
  const Options& o_;
  ProjectConfig cfg_;
  Program program_;
  std::optional<Analysis> analysis_;
  std::optional<Profile> profile_;
};

std::string DbSummary(const MemoDB& db, const ProvisionalStats* stats) {
  std::ostringstream out;
  out << "criterion " << db.criterion.ToString() << "\n";
  for (const auto& [name, table] : db.tables) {
    out << "memoized  " << name << " (" << table.entries.size() << " entries";
    if (stats && stats->hits.count(name))
      out << ", " << stats->hits.at(name) << " provisional hits";
    out << ")\n";
  }
  for (const auto& [name, ex] : db.exclusions) {
    out << "excluded  " << name << ": " << ex.ToString();
    if (ex.reason != ExclusionReason::kNewTestFailure && !ex.detail.empty()) {
      out << " [" << ex.detail << "]";
    }
    out << "\n";
  }
  return out.str();
}

int CmdAnalyze(const Options& o) {
  Session s(o);
  Emit(o.output, AnalysisJson(s.analysis()));
  return kExitOk;
}

int CmdProfile(const Options& o) {
  Session s(o);
  std::vector<Candidate> c = s.Candidates();
  Emit(o.output, ProfileToJson(s.profile(), &c, &s.cfg().criterion));
  return kExitOk;
}

int CmdMutate(const Options& o) {
  Session s(o);
  MutantPool pool = GenerateMutants(s.program());
  Emit(o.output, MutantsToJson(pool));
  if (!o.output.empty()) std::cout << pool.mutants.size() << " mutants\n";
  return kExitOk;
}

int CmdMemoize(const Options& o) {
  Session s(o);
  ProvisionalStats stats;
  MemoDB db = s.BuildDb(&stats);
  std::string out = o.output.empty() ? "memo.db" : o.output;
  SaveDb(db, out);
  if (!o.dump_json.empty()) WriteFile(o.dump_json, DbToJson(db));
  std::cout << DbSummary(db, &stats);
  return kExitOk;
}

int CmdRun(const Options& o) {
  Session s(o);
  MutantPool pool = o.mutants.empty() ? GenerateMutants(s.program())
                                      : MutantsFromJson(ReadFile(o.mutants), s.program());
  std::optional<MemoDB> db;
  if (!o.memo.empty()) db = LoadDb(o.memo, s.program());
  MutationReport r =
      RunMutationAnalysis(s.program(), pool, s.profile(), s.analysis().closure,
                          s.analysis().effects, db ? &*db : nullptr, s.Run(db.has_value()));
  Emit(o.output, ReportToJson(r));
  if (!o.output.empty()) {
    std::cout << "score " << FormatScore(r.score) << " (" << r.killed << "/" << r.total
              << " killed)\n";
  }
  return kExitOk;
}

int CmdReport(const Options& o) {
  MutationReport base = ReportFromJson(ReadFile(o.base_report));
  MutationReport memo = ReportFromJson(ReadFile(o.memo_report));
  if (base.fingerprint != memo.fingerprint) {
    throw Error(ErrorCode::kFingerprintMismatch, "reports come from different programs");
  }
  Comparison c = CompareRuns(base, memo);
  std::cout << ComparisonToText(c);
  if (!o.output.empty()) WriteFile(o.output, ComparisonToJson(c));
  return kExitOk;
}

int CmdPipeline(const Options& o) {
  Session s(o);
  fs::path out_dir = o.out_dir;
  if (out_dir.empty() && !s.cfg().artifact_dir.empty()) {
    out_dir = fs::path(o.dir) / s.cfg().artifact_dir;
  }
  auto save = [&](const std::string& name, const std::string& text) {
    if (!out_dir.empty()) WriteFile(out_dir / name, text);
  };

  const Analysis& analysis = s.analysis();
  save("analysis.json", AnalysisJson(analysis));
  std::vector<Candidate> candidates = s.Candidates();
  save("profile.json", ProfileToJson(s.profile(), &candidates, &s.cfg().criterion));
  MutantPool pool = GenerateMutants(s.program());
  save("mutants.json", MutantsToJson(pool));
  std::cout << pool.mutants.size() << " mutants, " << candidates.size() << " candidates\n";

  ProvisionalStats stats;
  MemoDB db = s.BuildDb(&stats);
  if (!out_dir.empty()) SaveDb(db, out_dir / "memo.db");
  std::cout << DbSummary(db, &stats);

  MutationReport base = RunMutationAnalysis(s.program(), pool, s.profile(), analysis.closure,
                                            analysis.effects, nullptr, s.Run(false));
  save("report_base.json", ReportToJson(base));
  MutationReport memo = RunMutationAnalysis(s.program(), pool, s.profile(), analysis.closure,
                                            analysis.effects, &db, s.Run(true));
  save("report_memo.json", ReportToJson(memo));
  Comparison c = CompareRuns(base, memo);
  save("comparison.json", ComparisonToJson(c));
  std::cout << ComparisonToText(c);
  return kExitOk;
}

int ExitCodeFor(const Error& e) {
  switch (e.code()) {
    case ErrorCode::kUsage:
      return kExitUsage;
    case ErrorCode::kFingerprintMismatch:
    case ErrorCode::kSchemaVersionMismatch:
    case ErrorCode::kCorruptDb:
      return kExitDb;
    case ErrorCode::kScoreMismatch:
      return kExitScoreMismatch;
    default:
      return kExitError;
  }
}

int Main(int argc, char** argv) {
  CLI::App app{"Mutation analysis with memoized expensive functions"};
  app.require_subcommand(0, 1);
  app.set_version_flag("--version", std::to_string(kDbSchemaVersion),
                       "Print the memo database schema version");
  Options o;

  CLI::App* analyze = app.add_subcommand("analyze", "Call graph, closure, effects, determinacy");
  CLI::App* profile = app.add_subcommand("profile", "Profile the suite and list candidates");
  CLI::App* mutate = app.add_subcommand("mutate", "Generate the mutant pool");
  CLI::App* memoize = app.add_subcommand("memoize", "Record and filter memo tables");
  CLI::App* run = app.add_subcommand("run", "Run the mutant pool");
  CLI::App* report = app.add_subcommand("report", "Compare a base and a memo run");
  CLI::App* pipeline = app.add_subcommand("pipeline", "All stages, ending with the comparison");

  for (CLI::App* sub : {analyze, profile, mutate, memoize, run, pipeline}) {
    sub->add_option("project", o.dir, "Project directory")
        ->required()
        ->check(CLI::ExistingDirectory);
    AddExecFlags(sub, o);
  }
  for (CLI::App* sub : {analyze, profile, mutate, memoize, run}) {
    sub->add_option("-o,--output", o.output, "Output file (default: stdout)");
  }
  for (CLI::App* sub : {analyze, profile, memoize, run, pipeline}) AddAnalysisFlags(sub, o);
  for (CLI::App* sub : {profile, memoize, pipeline}) AddCriterionFlags(sub, o);
  for (CLI::App* sub : {memoize, run}) {
    sub->add_option("--profile", o.profile, "Reuse a saved profile")->check(CLI::ExistingFile);
  }
  for (CLI::App* sub : {memoize, pipeline}) AddMemoFlags(sub, o);
  for (CLI::App* sub : {run, pipeline}) AddRunFlags(sub, o);
  memoize->add_option("--dump-json", o.dump_json, "Also write the tables as JSON");
  run->add_option("--mutants", o.mutants, "Mutant pool JSON (default: generate)")
      ->check(CLI::ExistingFile);
  run->add_option("--memo", o.memo, "Memo database; enables look-up")->check(CLI::ExistingFile);
  report->add_option("base", o.base_report, "Report without memoization")
      ->required()
      ->check(CLI::ExistingFile);
  report->add_option("memo", o.memo_report, "Report with memoization")
      ->required()
      ->check(CLI::ExistingFile);
  report->add_option("-o,--output", o.output, "Write the comparison as JSON");
  pipeline->add_option("--out-dir", o.out_dir, "Directory for every artifact");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }
  if (app.get_subcommands().empty()) {
    std::cerr << app.help();
    return kExitUsage;
  }

  try {
    if (analyze->parsed()) return CmdAnalyze(o);
    if (profile->parsed()) return CmdProfile(o);
    if (mutate->parsed()) return CmdMutate(o);
    if (memoize->parsed()) return CmdMemoize(o);
    if (run->parsed()) return CmdRun(o);
    if (report->parsed()) return CmdReport(o);
    return CmdPipeline(o);
  } catch (const Error& e) {
    std::cerr << "memomut: " << ErrorCodeName(e.code()) << ": " << e.what() << "\n";
    return ExitCodeFor(e);
  } catch (const std::exception& e) {
    std::cerr << "memomut: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace
}  // namespace memomut

int main(int argc, char** argv) { return memomut::Main(argc, argv); }
