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

#include "memomut/config.h"

#include <gtest/gtest.h>

#include <fstream>

#include "memomut/error.h"
#include "test_util.h"

namespace memomut {
namespace {

TEST(ConfigTest, Defaults) {
  ProjectConfig c = ParseConfig("");
  EXPECT_EQ(c.criterion.tau_ns, 1'000'000);
  EXPECT_TRUE(c.criterion.limit_is_percent);
  EXPECT_EQ(c.criterion.limit, 20.0);
  EXPECT_EQ(c.step_limit_factor, 10);
  EXPECT_EQ(c.workers, 1);
  EXPECT_EQ(c.miss_tolerance, 0);
  EXPECT_TRUE(c.artifact_dir.empty());
}

TEST(ConfigTest, ParsesEveryKey) {
  ProjectConfig c = ParseConfig(
      "# memomut settings\n"
      "tau = 250us\n"
      "limit = 3        # absolute\n"
      "tau_mode = cumulative\n"
      "step-limit-factor = 4\n"
      "workers = 8\n"
      "miss_tolerance = 2\n"
      "profile-reps = 5\n"
      "seed = 99\n"
      "fake-time = true\n"
      "artifact_dir = \"out\"\n");
  EXPECT_EQ(c.criterion.tau_ns, 250'000);
  EXPECT_FALSE(c.criterion.limit_is_percent);
  EXPECT_EQ(c.criterion.limit, 3.0);
  EXPECT_EQ(c.criterion.tau_mode, TauMode::kCumulative);
  EXPECT_EQ(c.step_limit_factor, 4);
  EXPECT_EQ(c.workers, 8);
  EXPECT_EQ(c.miss_tolerance, 2);
  EXPECT_EQ(c.profile_reps, 5);
  EXPECT_EQ(c.seed, 99u);
  EXPECT_TRUE(c.fake_time);
  EXPECT_EQ(c.artifact_dir, "out");
}

void ExpectUsage(const std::string& text, const std::string& fragment) {
  try {
    ParseConfig(text);
    ADD_FAILURE() << "accepted: " << text;
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUsage);
    EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
  }
}

TEST(ConfigTest, ErrorsNameTheLine) {
  ExpectUsage("tau = 1ms\ncolour = blue\n", ":2:");
  ExpectUsage("\n\nworkers\n", ":3:");
  ExpectUsage("workers = 0\n", "workers");
  ExpectUsage("step-limit-factor = 1\n", "step-limit-factor");
  ExpectUsage("tau = soon\n", "tau");
  ExpectUsage("fake-time = maybe\n", "fake-time");
  ExpectUsage("seed = -3\n", "seed");
}

TEST(ConfigTest, LoadsFromProjectDirectory) {
  auto dir = testing::MakeTempDir("config");
  EXPECT_EQ(LoadProjectConfig(dir).workers, 1);
  std::ofstream(dir / kConfigFileName) << "workers = 3\n";
  EXPECT_EQ(LoadProjectConfig(dir).workers, 3);
}

}  // namespace
}  // namespace memomut
