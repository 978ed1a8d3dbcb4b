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

#include "memomut/mutation.h"

#include <gtest/gtest.h>

#include <map>

#include "memomut/error.h"
#include "memomut/parser.h"
#include "memomut/printer.h"
#include "oracles.h"
#include "test_util.h"

namespace memomut {
namespace {

std::map<std::string, int> OperatorCounts(const MutantPool& pool) {
  std::map<std::string, int> out;
  for (const Mutant& m : pool.mutants) out[std::string(OperatorName(m.op))]++;
  return out;
}

TEST(GenerateTest, AdditionHasTwoArithmeticMutants) {
  MutantPool pool = GenerateMutants(Parse("fn f(a, b) { return a + b; }"));
  ASSERT_EQ(pool.mutants.size(), 2u);
  EXPECT_EQ(OperatorCounts(pool), (std::map<std::string, int>{{"AOR", 1}, {"RVM", 1}}));
  EXPECT_EQ(pool.mutants[0].after, "return 0;");
  EXPECT_EQ(pool.mutants[1].before, "a + b");
  EXPECT_EQ(pool.mutants[1].after, "a - b");
  EXPECT_EQ(PrintProgram(ApplyMutant(Parse("fn f(a, b) { return a + b; }"), pool.mutants[1])),
            PrintProgram(Parse("fn f(a, b) { return a - b; }")));
}

TEST(GenerateTest, EmptyFunctionHasNone) {
  EXPECT_TRUE(GenerateMutants(Parse("fn f() {}")).mutants.empty());
}

TEST(GenerateTest, TestBodiesAreNotMutated) {
  MutantPool pool = GenerateMutants(Parse("fn test_x() { assert(1 + 1 == 2); }"));
  EXPECT_TRUE(pool.mutants.empty());
}

TEST(GenerateTest, ConditionalExample) {
  MutantPool pool = GenerateMutants(Parse("fn f(x) { if (x < 2) { return 1; } return 0; }"));
  // ROR to <= and >=, UOI-NEG on the condition, RVM on both returns (the
  // second is an identity mutant), CRP on 2, 1 and 0. Eight in total.
  EXPECT_EQ(OperatorCounts(pool),
            (std::map<std::string, int>{{"ROR", 2}, {"UOI-NEG", 1}, {"RVM", 2}, {"CRP", 3}}));
  EXPECT_EQ(pool.mutants.size(), 8u);
}

TEST(GenerateTest, IdsAreDenseAndIndexed) {
  MutantPool pool = GenerateMutants(testing::LoadCorpus("matrix"));
  size_t indexed = 0;
  for (size_t i = 0; i < pool.mutants.size(); ++i) {
    EXPECT_EQ(pool.mutants[i].id, static_cast<int32_t>(i));
  }
  for (const auto& [fn, ids] : pool.by_function) {
    for (int32_t id : ids) EXPECT_EQ(pool.mutants[static_cast<size_t>(id)].fn, fn);
    indexed += ids.size();
  }
  EXPECT_EQ(indexed, pool.mutants.size());
}

TEST(GenerateTest, MatchesBruteForceOnCorpus) {
  for (const std::string& name : testing::CorpusProjects()) {
    Program p = testing::LoadCorpus(name);
    MutantPool pool = GenerateMutants(p);
    std::vector<testing::MutantSite> got;
    for (const Mutant& m : pool.mutants) got.push_back(testing::SiteOf(m));
    EXPECT_EQ(got, testing::BruteForceMutants(p)) << name;
  }
}

TEST(GenerateTest, Deterministic) {
  Program p = testing::LoadCorpus("strings");
  EXPECT_EQ(GenerateMutants(p).mutants, GenerateMutants(p).mutants);
  EXPECT_EQ(MutantsToJson(GenerateMutants(p)), MutantsToJson(GenerateMutants(p)));
}

TEST(ApplyTest, SinglePointChangeThatReparses) {
  for (const std::string& name : testing::CorpusProjects()) {
    Program p = testing::LoadCorpus(name);
    for (const Mutant& m : GenerateMutants(p).mutants) {
      Program mutated = ApplyMutant(p, m);
      ASSERT_EQ(mutated.num_functions(), p.num_functions());
      int changed = 0;
      for (FunctionId f = 0; f < static_cast<FunctionId>(p.num_functions()); ++f) {
        if (PrintFunction(p.function(f)) != PrintFunction(mutated.function(f))) {
          ++changed;
          EXPECT_EQ(p.function(f).name, m.fn);
        }
      }
      // RVM on a return that already yields the default changes nothing.
      bool identity = m.op == MutationOperator::kRvm && m.before == m.after;
      ASSERT_EQ(changed, identity ? 0 : 1) << name << " #" << m.id;
      std::string text = PrintProgram(mutated);
      EXPECT_EQ(PrintProgram(Parse(text)), text) << name << " #" << m.id;
      // The original is untouched.
      EXPECT_EQ(Fingerprint(p), Fingerprint(testing::LoadCorpus(name)));
    }
  }
}

TEST(ApplyTest, StaleMutantIsRejected) {
  Program p = Parse("fn f(a, b) { return a + b; }");
  Mutant m = GenerateMutants(p).mutants.at(1);  // + -> -
  Program other = Parse("fn f(a, b) { return a * b; }");
  try {
    ApplyMutant(other, m);
    FAIL() << "expected StaleMutant";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kStaleMutant);
  }
  m.fn = "missing";
  EXPECT_THROW(ApplyMutant(p, m), Error);
}

TEST(PoolJsonTest, RoundTrip) {
  Program p = testing::LoadCorpus("recursive");
  MutantPool pool = GenerateMutants(p);
  MutantPool back = MutantsFromJson(MutantsToJson(pool), p);
  EXPECT_EQ(back.mutants, pool.mutants);
  EXPECT_EQ(back.by_function, pool.by_function);
}

TEST(PoolJsonTest, PoolForEditedSourceIsInvalid) {
  Program p = Parse("fn f(x) { if (x < 2) { return 1; } return 0; }");
  std::string json = MutantsToJson(GenerateMutants(p));
  Program edited = Parse("fn f(x) { if (x > 2) { return 1; } return 0; }");
  try {
    MutantsFromJson(json, edited);
    FAIL() << "expected InvalidPool";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidPool);
  }
  EXPECT_THROW(MutantsFromJson("not json", p), Error);
}

}  // namespace
}  // namespace memomut
