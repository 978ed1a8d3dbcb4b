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

// Runs the built command-line tool and checks exit codes and artifacts.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "memomut/memo.h"
#include "test_util.h"

namespace memomut {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code = -1;
  std::string out;
};

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override { dir_ = testing::MakeTempDir("cli"); }

  Result Cli(const std::string& args) {
    fs::path log = dir_ / "out.txt";
    std::string cmd = "cd '" + dir_.string() + "' && '" MEMOMUT_CLI_PATH "' " + args + " > '" +
                      log.string() + "' 2>&1";
    int status = std::system(cmd.c_str());
    Result r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = Slurp(log);
    return r;
  }

  // Copy of a corpus project that the test may edit.
  fs::path CopyProject(const std::string& name) {
    fs::path to = dir_ / name;
    fs::copy(testing::CorpusProject(name), to, fs::copy_options::recursive);
    return to;
  }

  fs::path dir_;
};

TEST_F(CliTest, Version) {
  Result r = Cli("--version");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find(std::to_string(kDbSchemaVersion)), std::string::npos);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(Cli("").code, 64);
  EXPECT_EQ(Cli("pipeline " + testing::CorpusProject("fib").string() + " --bogus").code, 64);
  EXPECT_EQ(Cli("frobnicate").code, 64);
  EXPECT_EQ(Cli("analyze /nonexistent/project").code, 64);
  EXPECT_EQ(Cli("profile " + testing::CorpusProject("fib").string() + " --tau never").code, 64);
}

TEST_F(CliTest, BadConfigIsUsageError) {
  fs::path p = CopyProject("fib");
  std::ofstream(p / "memomut.toml") << "tau = 1ms\nnot_a_key = 1\n";
  Result r = Cli("analyze " + p.string());
  EXPECT_EQ(r.code, 64);
  EXPECT_NE(r.out.find("memomut.toml:2"), std::string::npos) << r.out;
}

TEST_F(CliTest, SyntaxErrorIsGeneralError) {
  fs::path p = CopyProject("fib");
  std::ofstream(p / "fib.mini", std::ios::app) << "\nfn broken( {\n";
  EXPECT_EQ(Cli("analyze " + p.string()).code, 1);
}

TEST_F(CliTest, PipelineWritesEveryArtifact) {
  Result r = Cli("pipeline " + testing::CorpusProject("fib").string() +
                 " --seed 42 --fake-time --tau 1ns --limit 100% --out-dir art");
  ASSERT_EQ(r.code, 0) << r.out;
  for (const char* f : {"analysis.json", "profile.json", "mutants.json", "memo.db",
                        "report_base.json", "report_memo.json", "comparison.json"}) {
    EXPECT_TRUE(fs::exists(dir_ / "art" / f)) << f;
  }
  EXPECT_NE(r.out.find("speed-up"), std::string::npos);
  EXPECT_NE(r.out.find("verdict changes  0"), std::string::npos) << r.out;
}

TEST_F(CliTest, ArtifactDirFromConfig) {
  fs::path p = CopyProject("sample");
  std::ofstream(p / "memomut.toml") << "seed = 42\nfake-time = true\nartifact-dir = build\n";
  ASSERT_EQ(Cli("pipeline " + p.string()).code, 0);
  EXPECT_TRUE(fs::exists(p / "build" / "comparison.json"));
}

TEST_F(CliTest, StagesComposeAndReportCompares) {
  std::string fib = testing::CorpusProject("fib").string();
  std::string exec = " --seed 42 --fake-time";
  std::string common = exec + " --tau 1ns --limit 100%";
  ASSERT_EQ(Cli("profile " + fib + common + " -o profile.json").code, 0);
  ASSERT_EQ(Cli("mutate " + fib + " -o mutants.json").code, 0);
  Result m =
      Cli("memoize " + fib + common + " --profile profile.json -o memo.db --dump-json memo.json");
  ASSERT_EQ(m.code, 0) << m.out;
  EXPECT_TRUE(fs::exists(dir_ / "memo.json"));
  ASSERT_EQ(
      Cli("run " + fib + exec + " --profile profile.json --mutants mutants.json -o base.json").code,
      0);
  Result run = Cli("run " + fib + exec +
                   " --profile profile.json --mutants mutants.json --memo memo.db --workers 2 -o "
                   "memo_report.json");
  ASSERT_EQ(run.code, 0) << run.out;
  Result rep = Cli("report base.json memo_report.json -o cmp.json");
  EXPECT_EQ(rep.code, 0) << rep.out;
  EXPECT_TRUE(fs::exists(dir_ / "cmp.json"));

  // A tampered report with a different score is a hard failure.
  std::string text = Slurp(dir_ / "memo_report.json");
  text = std::regex_replace(text, std::regex("\"killed\": [0-9]+"), "\"killed\": 0");
  text = std::regex_replace(text, std::regex("\"score\": [0-9.e+-]+"), "\"score\": 0.0");
  std::ofstream(dir_ / "tampered.json") << text;
  Result bad = Cli("report base.json tampered.json");
  EXPECT_EQ(bad.code, 3) << bad.out;
  EXPECT_NE(bad.out.find("ScoreMismatch"), std::string::npos) << bad.out;
}

TEST_F(CliTest, DatabaseFromEditedSourceIsRejected) {
  fs::path p = CopyProject("fib");
  std::string exec = " --seed 42 --fake-time";
  std::string common = exec + " --tau 1ns --limit 100%";
  ASSERT_EQ(Cli("memoize " + p.string() + common + " -o memo.db").code, 0);
  ASSERT_EQ(Cli("run " + p.string() + exec + " --memo memo.db -o r.json").code, 0);

  std::string src = Slurp(p / "fib.mini");
  src.replace(src.find("return a + b;"), 13, "return b + a;");
  std::ofstream(p / "fib.mini", std::ios::trunc) << src;
  Result r = Cli("run " + p.string() + exec + " --memo memo.db -o r.json");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("FingerprintMismatch"), std::string::npos) << r.out;
}

TEST_F(CliTest, CorruptDatabaseIsRejected) {
  std::string fib = testing::CorpusProject("fib").string();
  std::string exec = " --seed 42 --fake-time";
  std::string common = exec + " --tau 1ns --limit 100%";
  ASSERT_EQ(Cli("memoize " + fib + common + " -o memo.db").code, 0);
  std::string bytes = Slurp(dir_ / "memo.db");
  bytes[bytes.size() / 2] = static_cast<char>(bytes[bytes.size() / 2] ^ 1);
  std::ofstream(dir_ / "memo.db", std::ios::binary | std::ios::trunc) << bytes;
  Result r = Cli("run " + fib + exec + " --memo memo.db");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("CorruptDB"), std::string::npos) << r.out;
}

}  // namespace
}  // namespace memomut
