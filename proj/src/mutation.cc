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

#include <algorithm>
#include <tuple>

#include "json.hpp"
#include "memomut/error.h"
#include "memomut/printer.h"

namespace memomut {

std::string_view OperatorName(MutationOperator op) {
  switch (op) {
    case MutationOperator::kAor:
      return "AOR";
    case MutationOperator::kRor:
      return "ROR";
    case MutationOperator::kLcr:
      return "LCR";
    case MutationOperator::kUoiNeg:
      return "UOI-NEG";
    case MutationOperator::kRvm:
      return "RVM";
    case MutationOperator::kCrp:
      return "CRP";
    case MutationOperator::kAod:
      return "AOD";
    case MutationOperator::kSvr:
      return "SVR";
  }
  return "?";
}

std::optional<MutationOperator> OperatorByName(std::string_view name) {
  for (int i = 0; i < kNumOperators; ++i) {
    auto op = static_cast<MutationOperator>(i);
    if (OperatorName(op) == name) return op;
  }
  return std::nullopt;
}

namespace {

// Lattice element: kBottom (nothing known yet), a concrete type, or kTop.
constexpr int kBottom = -1;
constexpr int kTop = 100;

int Join(int a, int b) {
  if (a == kBottom) return b;
  if (b == kBottom || a == b) return a;
  return kTop;
}

class TypeInference {
 public:
  explicit TypeInference(const Program& program) : program_(program) {
    slots_.resize(program.num_functions());
    for (size_t f = 0; f < program.num_functions(); ++f) {
      const FunctionDef& def = program.function(static_cast<FunctionId>(f));
      slots_[f].assign(static_cast<size_t>(def.num_slots), kBottom);
      for (size_t p = 0; p < def.params.size(); ++p) slots_[f][p] = kTop;
    }
    for (const GlobalDef& g : program.globals()) {
      globals_.push_back(static_cast<int>(g.initial.type()));
    }
    bool changed = true;
    while (changed) {
      changed = false;
      for (size_t f = 0; f < program.num_functions(); ++f) {
        const FunctionDef& def = program.function(static_cast<FunctionId>(f));
        for (const Node& n : def.nodes) {
          int* target = nullptr;
          NodeId value = -1;
          if (n.kind == NodeKind::kLet) {
            target = &slots_[f][static_cast<size_t>(n.ref)];
            value = n.kids[0];
          } else if (n.kind == NodeKind::kAssign) {
            const Node& t = def.node(n.kids[0]);
            if (t.kind == NodeKind::kLocal) target = &slots_[f][static_cast<size_t>(t.ref)];
            if (t.kind == NodeKind::kGlobal) target = &globals_[static_cast<size_t>(t.ref)];
            value = n.kids[1];
          }
          if (!target) continue;
          int joined = Join(*target, Infer(static_cast<FunctionId>(f), value));
          if (joined != *target) {
            *target = joined;
            changed = true;
          }
        }
      }
    }
  }

  int Infer(FunctionId fn, NodeId id) const {
    const FunctionDef& def = program_.function(fn);
    const Node& n = def.node(id);
    auto t = [](ValueType v) { return static_cast<int>(v); };
    switch (n.kind) {
      case NodeKind::kIntLit:
        return t(ValueType::kInt);
      case NodeKind::kBoolLit:
        return t(ValueType::kBool);
      case NodeKind::kStrLit:
        return t(ValueType::kStr);
      case NodeKind::kArrayLit:
        return t(ValueType::kArr);
      case NodeKind::kFnRefLit:
        return t(ValueType::kFnRef);
      case NodeKind::kLocal:
        return slots_[static_cast<size_t>(fn)][static_cast<size_t>(n.ref)];
      case NodeKind::kGlobal:
        return globals_[static_cast<size_t>(n.ref)];
      case NodeKind::kUnary:
        return t(n.unary == UnaryOp::kNeg ? ValueType::kInt : ValueType::kBool);
      case NodeKind::kBinary:
        if (IsRelational(n.binary) || IsLogical(n.binary) || n.binary == BinaryOp::kEq ||
            n.binary == BinaryOp::kNe) {
          return t(ValueType::kBool);
        }
        if (n.binary == BinaryOp::kAdd && (Infer(fn, n.kids[0]) == t(ValueType::kStr) ||
                                           Infer(fn, n.kids[1]) == t(ValueType::kStr))) {
          return t(ValueType::kStr);
        }
        return t(ValueType::kInt);
      case NodeKind::kBuiltinCall:
        switch (n.builtin) {
          case Builtin::kLen:
          case Builtin::kTimeNow:
          case Builtin::kRand:
          case Builtin::kLogSize:
            return t(ValueType::kInt);
          default:
            return t(ValueType::kUnit);
        }
      default:
        return kTop;
    }
  }

 private:
  const Program& program_;
  std::vector<std::vector<int>> slots_;
  std::vector<int> globals_;
};

struct Site {
  MutationOperator op;
  BinaryOp replacement = BinaryOp::kAdd;
  ValueType default_type = ValueType::kInt;
};

// Mutation opportunities at one node, in operator order.
std::vector<Site> SitesAt(const TypeInference& types, FunctionId fn, const FunctionDef& def,
                          NodeId id) {
  const Node& n = def.node(id);
  std::vector<Site> out;
  switch (n.kind) {
    case NodeKind::kBinary: {
      using B = BinaryOp;
      switch (n.binary) {
        case B::kAdd:
          out.push_back({MutationOperator::kAor, B::kSub});
          break;
        case B::kSub:
          out.push_back({MutationOperator::kAor, B::kAdd});
          break;
        case B::kMul:
          out.push_back({MutationOperator::kAor, B::kDiv});
          break;
        case B::kDiv:
          out.push_back({MutationOperator::kAor, B::kMul});
          break;
        case B::kMod:
          out.push_back({MutationOperator::kAor, B::kMul});
          break;
        case B::kEq:
          out.push_back({MutationOperator::kRor, B::kNe});
          break;
        case B::kNe:
          out.push_back({MutationOperator::kRor, B::kEq});
          break;
        // Boundary neighbour first, then negation.
        case B::kLt:
          out.push_back({MutationOperator::kRor, B::kLe});
          out.push_back({MutationOperator::kRor, B::kGe});
          break;
        case B::kLe:
          out.push_back({MutationOperator::kRor, B::kLt});
          out.push_back({MutationOperator::kRor, B::kGt});
          break;
        case B::kGt:
          out.push_back({MutationOperator::kRor, B::kGe});
          out.push_back({MutationOperator::kRor, B::kLe});
          break;
        case B::kGe:
          out.push_back({MutationOperator::kRor, B::kGt});
          out.push_back({MutationOperator::kRor, B::kLt});
          break;
        case B::kAnd:
          out.push_back({MutationOperator::kLcr, B::kOr});
          break;
        case B::kOr:
          out.push_back({MutationOperator::kLcr, B::kAnd});
          break;
      }
      break;
    }
    case NodeKind::kIf:
    case NodeKind::kWhile:
      out.push_back({MutationOperator::kUoiNeg});
      break;
    case NodeKind::kReturn:
      if (!n.kids.empty()) {
        int t = types.Infer(fn, n.kids[0]);
        if (t == static_cast<int>(ValueType::kInt) || t == static_cast<int>(ValueType::kBool) ||
            t == static_cast<int>(ValueType::kStr) || t == static_cast<int>(ValueType::kArr)) {
          out.push_back({MutationOperator::kRvm, BinaryOp::kAdd, static_cast<ValueType>(t)});
        }
      }
      break;
    case NodeKind::kIntLit:
      out.push_back({MutationOperator::kCrp});
      break;
    case NodeKind::kUnary:
      if (n.unary == UnaryOp::kNeg) out.push_back({MutationOperator::kAod});
      break;
    case NodeKind::kAssign:
      out.push_back({MutationOperator::kSvr});
      break;
    default:
      break;
  }
  return out;
}

FunctionDef Mutate(const FunctionDef& def, NodeId id, const Site& s) {
  FunctionDef out = def;
  Node& n = out.nodes[static_cast<size_t>(id)];
  switch (s.op) {
    case MutationOperator::kAor:
    case MutationOperator::kRor:
    case MutationOperator::kLcr:
      n.binary = s.replacement;
      break;
    case MutationOperator::kUoiNeg:
      n.mark = Mark::kNegateCondition;
      break;
    case MutationOperator::kRvm:
      n.mark = Mark::kReturnDefault;
      n.default_type = s.default_type;
      break;
    case MutationOperator::kCrp:
      n.int_value = static_cast<int64_t>(static_cast<uint64_t>(n.int_value) + 1);
      break;
    case MutationOperator::kAod:
      n.mark = Mark::kDropNegation;
      break;
    case MutationOperator::kSvr:
      n.mark = Mark::kDeleted;
      break;
  }
  return out;
}

bool SameSite(const Site& s, const Mutant& m) {
  if (s.op != m.op) return false;
  switch (s.op) {
    case MutationOperator::kAor:
    case MutationOperator::kRor:
    case MutationOperator::kLcr:
      return s.replacement == m.replacement;
    case MutationOperator::kRvm:
      return s.default_type == m.default_type;
    default:
      return true;
  }
}

}  // namespace

ValueType InferType(const Program& program, FunctionId fn, NodeId expr) {
  int t = TypeInference(program).Infer(fn, expr);
  if (t == kBottom || t == kTop) return ValueType::kUnit;
  return static_cast<ValueType>(t);
}

MutantPool GenerateMutants(const Program& program) {
  TypeInference types(program);
  std::vector<FunctionId> order;
  for (size_t f = 0; f < program.num_functions(); ++f) {
    if (!program.function(static_cast<FunctionId>(f)).is_test) {
      order.push_back(static_cast<FunctionId>(f));
    }
  }
  std::sort(order.begin(), order.end(), [&](FunctionId a, FunctionId b) {
    return program.function(a).name < program.function(b).name;
  });
  MutantPool pool;
  for (FunctionId f : order) {
    const FunctionDef& def = program.function(f);
    for (size_t i = 0; i < def.nodes.size(); ++i) {
      NodeId id = static_cast<NodeId>(i);
      for (const Site& s : SitesAt(types, f, def, id)) {
        Mutant m;
        m.id = static_cast<int32_t>(pool.mutants.size());
        m.op = s.op;
        m.fn = def.name;
        m.node = id;
        m.replacement = s.replacement;
        m.default_type = s.default_type;
        m.before = PrintNode(def, id);
        m.after = PrintNode(Mutate(def, id, s), id);
        pool.by_function[m.fn].push_back(m.id);
        pool.mutants.push_back(std::move(m));
      }
    }
  }
  return pool;
}

Program ApplyMutant(const Program& program, const Mutant& m) {
  auto fn = program.FindFunction(m.fn);
  auto stale = [&]() {
    return Error(ErrorCode::kStaleMutant, "mutant " + std::to_string(m.id) + " (" +
                                              std::string(OperatorName(m.op)) + " in " + m.fn +
                                              " at node " + std::to_string(m.node) +
                                              ") does not match the program");
  };
  if (!fn) throw stale();
  const FunctionDef& def = program.function(*fn);
  if (def.is_test || m.node < 0 || static_cast<size_t>(m.node) >= def.nodes.size()) {
    throw stale();
  }
  TypeInference types(program);
  for (const Site& s : SitesAt(types, *fn, def, m.node)) {
    if (SameSite(s, m)) return program.WithFunction(*fn, Mutate(def, m.node, s));
  }
  throw stale();
}

std::string MutantsToJson(const MutantPool& pool) {
  using nlohmann::json;
  json list = json::array();
  for (const Mutant& m : pool.mutants) {
    list.push_back({{"id", m.id},
                    {"op", OperatorName(m.op)},
                    {"fn", m.fn},
                    {"node", m.node},
                    {"before", m.before},
                    {"after", m.after}});
  }
  return list.dump(2) + "\n";
}

MutantPool MutantsFromJson(std::string_view text, const Program& program) {
  using nlohmann::json;
  MutantPool fresh = GenerateMutants(program);
  std::map<std::tuple<MutationOperator, std::string, NodeId, std::string>, const Mutant*> index;
  for (const Mutant& m : fresh.mutants) index[{m.op, m.fn, m.node, m.after}] = &m;

  MutantPool pool;
  try {
    json list = json::parse(text);
    if (!list.is_array()) throw Error(ErrorCode::kInvalidPool, "mutant pool must be a JSON list");
    for (const json& e : list) {
      auto op = OperatorByName(e.at("op").get<std::string>());
      if (!op) throw Error(ErrorCode::kInvalidPool, "unknown operator " + e.at("op").dump());
      auto key = std::make_tuple(*op, e.at("fn").get<std::string>(), e.at("node").get<NodeId>(),
                                 e.at("after").get<std::string>());
      auto it = index.find(key);
      if (it == index.end() || it->second->before != e.at("before").get<std::string>()) {
        throw Error(ErrorCode::kInvalidPool, "stale mutant " + e.at("id").dump() + ": " + e.dump());
      }
      Mutant m = *it->second;
      m.id = e.at("id").get<int32_t>();
      pool.by_function[m.fn].push_back(m.id);
      pool.mutants.push_back(std::move(m));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidPool, std::string("malformed mutant pool: ") + e.what());
  }
  std::sort(pool.mutants.begin(), pool.mutants.end(),
            [](const Mutant& a, const Mutant& b) { return a.id < b.id; });
  for (size_t i = 1; i < pool.mutants.size(); ++i) {
    if (pool.mutants[i].id == pool.mutants[i - 1].id) {
      throw Error(ErrorCode::kInvalidPool,
                  "duplicate mutant id " + std::to_string(pool.mutants[i].id));
    }
  }
  return pool;
}

}  // namespace memomut
