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

#include "memomut/printer.h"

#include "memomut/hash.h"

namespace memomut {
namespace {

constexpr int kUnaryPrec = 7;
constexpr int kPostfixPrec = 8;
constexpr int kPrimaryPrec = 9;

int BinaryPrec(BinaryOp op) {
  switch (op) {
    case BinaryOp::kOr:
      return 1;
    case BinaryOp::kAnd:
      return 2;
    case BinaryOp::kEq:
    case BinaryOp::kNe:
      return 3;
    case BinaryOp::kLt:
    case BinaryOp::kLe:
    case BinaryOp::kGt:
    case BinaryOp::kGe:
      return 4;
    case BinaryOp::kAdd:
    case BinaryOp::kSub:
      return 5;
    default:
      return 6;
  }
}

class Printer {
 public:
  explicit Printer(const FunctionDef& fn) : fn_(fn) {}

  int Prec(NodeId id) const {
    const Node& n = fn_.node(id);
    switch (n.kind) {
      case NodeKind::kBinary:
        return BinaryPrec(n.binary);
      case NodeKind::kUnary:
        return n.mark == Mark::kDropNegation ? Prec(n.kids[0]) : kUnaryPrec;
      case NodeKind::kIndex:
        return kPostfixPrec;
      default:
        return kPrimaryPrec;
    }
  }

  std::string Expr(NodeId id) const {
    const Node& n = fn_.node(id);
    switch (n.kind) {
      case NodeKind::kIntLit:
        return std::to_string(n.int_value);
      case NodeKind::kBoolLit:
        return n.int_value ? "true" : "false";
      case NodeKind::kStrLit:
        return Repr(Value::Str(n.text));
      case NodeKind::kFnRefLit:
        return "&" + n.text;
      case NodeKind::kLocal:
      case NodeKind::kGlobal:
        return n.text;
      case NodeKind::kArrayLit:
        return "[" + Args(n, 0) + "]";
      case NodeKind::kIndex:
        return Wrap(n.kids[0], kPostfixPrec) + "[" + Expr(n.kids[1]) + "]";
      case NodeKind::kUnary:
        if (n.mark == Mark::kDropNegation) return Expr(n.kids[0]);
        return std::string(UnaryOpText(n.unary)) + Wrap(n.kids[0], kUnaryPrec);
      case NodeKind::kBinary: {
        int p = BinaryPrec(n.binary);
        return Wrap(n.kids[0], p) + " " + std::string(BinaryOpText(n.binary)) + " " +
               Wrap(n.kids[1], p + 1);
      }
      case NodeKind::kCall:
      case NodeKind::kBuiltinCall:
        return n.text + "(" + Args(n, 0) + ")";
      case NodeKind::kIndirectCall:
        return n.text + "(" + Args(n, 1) + ")";
      default:
        return "?";
    }
  }

  void Stmt(NodeId id, int indent, std::string& out) const {
    const Node& n = fn_.node(id);
    if (n.mark == Mark::kDeleted) return;
    std::string pad(static_cast<size_t>(indent) * 2, ' ');
    out += pad;
    StmtBody(n, indent, out);
    out += "\n";
  }

  // Statement text without leading indent or trailing newline.
  void StmtBody(const Node& n, int indent, std::string& out) const {
    switch (n.kind) {
      case NodeKind::kBlock:
        Block(n, indent, out);
        break;
      case NodeKind::kLet:
        out += "let " + n.text + " = " + Expr(n.kids[0]) + ";";
        break;
      case NodeKind::kAssign:
        out += Expr(n.kids[0]) + " = " + Expr(n.kids[1]) + ";";
        break;
      case NodeKind::kIf:
        If(n, indent, out);
        break;
      case NodeKind::kWhile:
        out += "while (" + Condition(n) + ") ";
        Block(fn_.node(n.kids[1]), indent, out);
        break;
      case NodeKind::kReturn:
        if (n.mark == Mark::kReturnDefault) {
          out += "return " + Repr(Value::DefaultOf(n.default_type)) + ";";
        } else if (n.kids.empty()) {
          out += "return;";
        } else {
          out += "return " + Expr(n.kids[0]) + ";";
        }
        break;
      case NodeKind::kAssert:
        out += "assert(" + Expr(n.kids[0]) + ");";
        break;
      case NodeKind::kExprStmt:
        out += Expr(n.kids[0]) + ";";
        break;
      default:
        out += Expr(static_cast<NodeId>(&n - fn_.nodes.data()));
        break;
    }
  }

  void Block(const Node& n, int indent, std::string& out) const {
    bool any = false;
    for (NodeId k : n.kids) any |= fn_.node(k).mark != Mark::kDeleted;
    if (!any) {
      out += "{}";
      return;
    }
    out += "{\n";
    for (NodeId k : n.kids) Stmt(k, indent + 1, out);
    out += std::string(static_cast<size_t>(indent) * 2, ' ') + "}";
  }

 private:
  std::string Wrap(NodeId id, int min_prec) const {
    std::string s = Expr(id);
    return Prec(id) < min_prec ? "(" + s + ")" : s;
  }

  std::string Args(const Node& n, size_t first) const {
    std::string s;
    for (size_t i = first; i < n.kids.size(); ++i) {
      if (i > first) s += ", ";
      s += Expr(n.kids[i]);
    }
    return s;
  }

  std::string Condition(const Node& n) const {
    if (n.mark == Mark::kNegateCondition) return "!" + Wrap(n.kids[0], kUnaryPrec);
    return Expr(n.kids[0]);
  }

  void If(const Node& n, int indent, std::string& out) const {
    out += "if (" + Condition(n) + ") ";
    Block(fn_.node(n.kids[1]), indent, out);
    if (n.kids.size() > 2) {
      out += " else ";
      const Node& alt = fn_.node(n.kids[2]);
      if (alt.kind == NodeKind::kIf) {
        If(alt, indent, out);
      } else {
        Block(alt, indent, out);
      }
    }
  }

  const FunctionDef& fn_;
};

}  // namespace

std::string PrintFunction(const FunctionDef& fn) {
  std::string out = "fn " + fn.name + "(";
  for (size_t i = 0; i < fn.params.size(); ++i) {
    if (i) out += ", ";
    out += fn.params[i];
  }
  out += ") ";
  Printer p(fn);
  p.Block(fn.node(0), 0, out);
  out += "\n";
  return out;
}

std::string PrintProgram(const Program& program) {
  std::string out;
  for (const GlobalDef& g : program.globals()) {
    out += "let " + g.name + " = " + Repr(g.initial) + ";\n";
  }
  for (size_t i = 0; i < program.num_functions(); ++i) {
    if (!out.empty()) out += "\n";
    out += PrintFunction(program.function(static_cast<FunctionId>(i)));
  }
  return out;
}

std::string PrintNode(const FunctionDef& fn, NodeId id) {
  Printer p(fn);
  const Node& n = fn.node(id);
  switch (n.kind) {
    case NodeKind::kBlock:
    case NodeKind::kLet:
    case NodeKind::kAssign:
    case NodeKind::kIf:
    case NodeKind::kWhile:
    case NodeKind::kReturn:
    case NodeKind::kAssert:
    case NodeKind::kExprStmt: {
      if (n.mark == Mark::kDeleted) return "";
      std::string out;
      p.StmtBody(n, 0, out);
      return out;
    }
    default:
      return p.Expr(id);
  }
}

uint64_t Fingerprint(const Program& program) { return Fnv1a64(PrintProgram(program)); }

}  // namespace memomut
