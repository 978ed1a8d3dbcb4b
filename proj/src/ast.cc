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

#include "memomut/ast.h"

#include <array>

namespace memomut {

namespace {

constexpr std::array<std::string_view, 13> kBinaryText = {
    "+", "-", "*", "/", "%", "==", "!=", "<", "<=", ">", ">=", "&&", "||"};
constexpr std::array<std::string_view, kNumBuiltins> kBuiltinNames = {
    "len", "push", "print", "time_now", "rand", "log_size"};
constexpr std::array<int, kNumBuiltins> kBuiltinArity = {1, 2, 1, 0, 1, 0};

}  // namespace

std::string_view BinaryOpText(BinaryOp op) { return kBinaryText[static_cast<size_t>(op)]; }

std::string_view UnaryOpText(UnaryOp op) { return op == UnaryOp::kNeg ? "-" : "!"; }

std::string_view BuiltinName(Builtin b) { return kBuiltinNames[static_cast<size_t>(b)]; }

std::optional<Builtin> BuiltinByName(std::string_view name) {
  for (size_t i = 0; i < kBuiltinNames.size(); ++i) {
    if (kBuiltinNames[i] == name) return static_cast<Builtin>(i);
  }
  return std::nullopt;
}

int BuiltinArity(Builtin b) { return kBuiltinArity[static_cast<size_t>(b)]; }

bool IsArithmetic(BinaryOp op) { return op <= BinaryOp::kMod; }
bool IsRelational(BinaryOp op) { return op >= BinaryOp::kEq && op <= BinaryOp::kGe; }
bool IsLogical(BinaryOp op) { return op == BinaryOp::kAnd || op == BinaryOp::kOr; }

bool IsTestName(std::string_view name) { return name.starts_with("test_"); }

Program::Program(std::vector<GlobalDef> globals,
                 std::vector<std::shared_ptr<const FunctionDef>> functions)
    : functions_(std::move(functions)) {
  auto meta = std::make_shared<Meta>();
  meta->globals = std::move(globals);
  for (size_t i = 0; i < meta->globals.size(); ++i) {
    meta->global_index.emplace(meta->globals[i].name, static_cast<int32_t>(i));
  }
  for (size_t i = 0; i < functions_.size(); ++i) {
    const FunctionDef& fn = *functions_[i];
    meta->function_index.emplace(fn.name, static_cast<FunctionId>(i));
    if (fn.is_test) meta->tests.push_back(fn.name);
  }
  meta_ = std::move(meta);
}

std::optional<FunctionId> Program::FindFunction(std::string_view name) const {
  auto it = meta_->function_index.find(std::string(name));
  if (it == meta_->function_index.end()) return std::nullopt;
  return it->second;
}

std::optional<int32_t> Program::FindGlobal(std::string_view name) const {
  auto it = meta_->global_index.find(std::string(name));
  if (it == meta_->global_index.end()) return std::nullopt;
  return it->second;
}

Program Program::WithFunction(FunctionId id, FunctionDef def) const {
  Program view = *this;
  view.functions_[static_cast<size_t>(id)] = std::make_shared<const FunctionDef>(std::move(def));
  return view;
}

}  // namespace memomut
