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

#ifndef MEMOMUT_MUTATION_H_
#define MEMOMUT_MUTATION_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "memomut/ast.h"

namespace memomut {

enum class MutationOperator : uint8_t {
  kAor,     // arithmetic operator replacement
  kRor,     // relational operator replacement
  kLcr,     // logical connector replacement
  kUoiNeg,  // negate an if/while condition
  kRvm,     // return the type's default value
  kCrp,     // integer constant k -> k+1
  kAod,     // delete unary minus
  kSvr,     // delete an assignment statement
};
inline constexpr int kNumOperators = 8;

std::string_view OperatorName(MutationOperator op);
std::optional<MutationOperator> OperatorByName(std::string_view name);

struct Mutant {
  int32_t id = 0;
  MutationOperator op = MutationOperator::kAor;
  std::string fn;
  NodeId node = -1;
  BinaryOp replacement = BinaryOp::kAdd;     // AOR, ROR, LCR
  ValueType default_type = ValueType::kInt;  // RVM
  std::string before;
  std::string after;

  bool operator==(const Mutant&) const = default;
};

struct MutantPool {
  std::vector<Mutant> mutants;
  std::map<std::string, std::vector<int32_t>> by_function;  // fn -> ids
};

// One mutant per applicable (operator, node, replacement); test bodies are
// skipped. Ordered by function name, node id, then operator.
MutantPool GenerateMutants(const Program& program);

// Throws Error(kStaleMutant) when `m` does not apply to `program`.
Program ApplyMutant(const Program& program, const Mutant& m);

inline const std::string& MutatedFunction(const Mutant& m) { return m.fn; }

// Static type of an expression when obvious, else kUnit.
ValueType InferType(const Program& program, FunctionId fn, NodeId expr);

std::string MutantsToJson(const MutantPool& pool);
// Parses a pool and checks every entry against a fresh generation over
// `program`; throws Error(kInvalidPool) on any mismatch.
MutantPool MutantsFromJson(std::string_view text, const Program& program);

}  // namespace memomut

#endif  // MEMOMUT_MUTATION_H_
