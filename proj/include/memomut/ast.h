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

// Resolved Mini syntax trees.
//
// Every function body is stored as a flat vector of nodes in preorder, so a
// node's id is its index and children are referenced by id. Node 0 is always
// the body block. Identifiers are resolved at parse time: locals to frame
// slots, globals to global indices, direct callees to function indices.

#ifndef MEMOMUT_AST_H_
#define MEMOMUT_AST_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "memomut/value.h"

namespace memomut {

using FunctionId = int32_t;
using NodeId = int32_t;

enum class NodeKind : uint8_t {
  // Statements.
  kBlock,
  kLet,       // text = name, ref = slot, kids = {init}
  kAssign,    // kids = {target, value}; target is kLocal, kGlobal or kIndex
  kIf,        // kids = {cond, then_block[, else_block_or_if]}
  kWhile,     // kids = {cond, body}
  kReturn,    // kids = {} or {value}
  kAssert,    // kids = {cond}
  kExprStmt,  // kids = {expr}
  // Expressions.
  kIntLit,
  kBoolLit,
  kStrLit,
  kArrayLit,
  kFnRefLit,  // text = function name, ref = function id
  kLocal,     // text = name, ref = slot
  kGlobal,    // text = name, ref = global index
  kIndex,     // kids = {base, index}
  kUnary,
  kBinary,
  kCall,          // direct call: ref = function id, kids = args
  kBuiltinCall,   // kids = args
  kIndirectCall,  // kids = {callee (kLocal|kGlobal), args...}
};

enum class BinaryOp : uint8_t {
  kAdd,
  kSub,
  kMul,
  kDiv,
  kMod,
  kEq,
  kNe,
  kLt,
  kLe,
  kGt,
  kGe,
  kAnd,
  kOr,
};

enum class UnaryOp : uint8_t { kNeg, kNot };

enum class Builtin : uint8_t { kLen, kPush, kPrint, kTimeNow, kRand, kLogSize };
inline constexpr int kNumBuiltins = 6;

// In-place semantic overrides set by mutation operators that do not simply
// swap an operator or literal.
enum class Mark : uint8_t {
  kNone,
  kNegateCondition,  // if/while condition is negated
  kDeleted,          // assignment statement removed
  kReturnDefault,    // return default_type's default instead of the operand
  kDropNegation,     // unary minus removed
};

std::string_view BinaryOpText(BinaryOp op);
std::string_view UnaryOpText(UnaryOp op);
std::string_view BuiltinName(Builtin b);
std::optional<Builtin> BuiltinByName(std::string_view name);
int BuiltinArity(Builtin b);
bool IsArithmetic(BinaryOp op);
bool IsRelational(BinaryOp op);
bool IsLogical(BinaryOp op);

struct Node {
  NodeKind kind = NodeKind::kBlock;
  BinaryOp binary = BinaryOp::kAdd;
  UnaryOp unary = UnaryOp::kNeg;
  Builtin builtin = Builtin::kLen;
  Mark mark = Mark::kNone;
  ValueType default_type = ValueType::kUnit;
  int32_t ref = -1;
  int32_t line = 0;
  int64_t int_value = 0;  // kIntLit value, kBoolLit 0/1
  std::string text;
  std::vector<NodeId> kids;

  bool operator==(const Node&) const = default;
};

struct FunctionDef {
  std::string name;
  std::vector<std::string> params;
  int32_t num_slots = 0;  // params occupy slots [0, params.size())
  int32_t line = 0;
  bool is_test = false;
  std::vector<Node> nodes;

  const Node& node(NodeId id) const { return nodes[static_cast<size_t>(id)]; }
  bool operator==(const FunctionDef&) const = default;
};

struct GlobalDef {
  std::string name;
  Value initial;  // literal; arrays are deep-copied into each execution
  int32_t line = 0;
};

// Immutable after parsing. Copies share function bodies; `WithFunction`
// builds a view that differs in one function body only.
class Program {
 public:
  Program() = default;
  Program(std::vector<GlobalDef> globals,
          std::vector<std::shared_ptr<const FunctionDef>> functions);

  const std::vector<GlobalDef>& globals() const { return meta_->globals; }
  size_t num_functions() const { return functions_.size(); }
  const FunctionDef& function(FunctionId id) const { return *functions_[static_cast<size_t>(id)]; }
  std::optional<FunctionId> FindFunction(std::string_view name) const;
  std::optional<int32_t> FindGlobal(std::string_view name) const;
  // Test function names in declaration order.
  const std::vector<std::string>& tests() const { return meta_->tests; }

  Program WithFunction(FunctionId id, FunctionDef def) const;

 private:
  struct Meta {
    std::vector<GlobalDef> globals;
    std::vector<std::string> tests;
    std::unordered_map<std::string, FunctionId> function_index;
    std::unordered_map<std::string, int32_t> global_index;
  };
  std::shared_ptr<const Meta> meta_ = std::make_shared<Meta>();
  std::vector<std::shared_ptr<const FunctionDef>> functions_;
};

bool IsTestName(std::string_view name);

}  // namespace memomut

#endif  // MEMOMUT_AST_H_
