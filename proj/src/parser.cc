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

#include "memomut/parser.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "memomut/error.h"

namespace memomut {
namespace {

enum class Tok {
  kIdent,
  kInt,
  kStr,
  kPunct,
  kEnd,
};

struct Token {
  Tok kind = Tok::kEnd;
  std::string text;
  int line = 1;
  int col = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> Run() {
    std::vector<Token> out;
    while (true) {
      SkipSpaceAndComments();
      Token t;
      t.line = line_;
      t.col = col_;
      if (pos_ >= src_.size()) {
        out.push_back(t);
        return out;
      }
      char c = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        t.kind = Tok::kIdent;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
          t.text += Advance();
        }
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        t.kind = Tok::kInt;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
          t.text += Advance();
        }
      } else if (c == '"') {
        t.kind = Tok::kStr;
        Advance();
        while (true) {
          if (pos_ >= src_.size() || src_[pos_] == '\n') {
            throw Error::Syntax(t.line, t.col, "unterminated string literal");
          }
          char d = Advance();
          if (d == '"') break;
          if (d == '\\') {
            if (pos_ >= src_.size()) {
              throw Error::Syntax(t.line, t.col, "unterminated string literal");
            }
            char e = Advance();
            switch (e) {
              case 'n':
                t.text += '\n';
                break;
              case 't':
                t.text += '\t';
                break;
              case '"':
                t.text += '"';
                break;
              case '\\':
                t.text += '\\';
                break;
              default:
                throw Error::Syntax(line_, col_ - 1, std::string("bad escape \\") + e);
            }
          } else {
            t.text += d;
          }
        }
      } else {
        t.kind = Tok::kPunct;
        static const char* kTwo[] = {"==", "!=", "<=", ">=", "&&", "||"};
        for (const char* two : kTwo) {
          if (src_.substr(pos_, 2) == two) t.text = two;
        }
        if (t.text.empty()) {
          if (std::string_view("+-*/%<>=!&()[]{},;").find(c) == std::string_view::npos) {
            throw Error::Syntax(t.line, t.col, std::string("unexpected character '") + c + "'");
          }
          t.text = std::string(1, c);
        }
        for (size_t i = 0; i < t.text.size(); ++i) Advance();
      }
      out.push_back(std::move(t));
    }
  }

 private:
  char Advance() {
    char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void SkipSpaceAndComments() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        Advance();
      } else if (src_.substr(pos_, 2) == "//") {
        while (pos_ < src_.size() && src_[pos_] != '\n') Advance();
      } else {
        break;
      }
    }
  }

  std::string_view src_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

// Unresolved tree produced by the parser; flattened by Resolver.
enum class RawKind {
  kBlock,
  kLet,
  kAssign,
  kIf,
  kWhile,
  kReturn,
  kAssert,
  kExprStmt,
  kInt,
  kBool,
  kStr,
  kArray,
  kFnRef,
  kName,
  kIndex,
  kUnary,
  kBinary,
  kCall,
};

struct RawNode {
  RawKind kind;
  BinaryOp binary = BinaryOp::kAdd;
  UnaryOp unary = UnaryOp::kNeg;
  int64_t int_value = 0;
  std::string text;
  int line = 0;
  int col = 0;
  std::vector<std::unique_ptr<RawNode>> kids;
};
using RawPtr = std::unique_ptr<RawNode>;

struct RawFunction {
  std::string name;
  std::vector<std::string> params;
  int line = 0;
  int col = 0;
  RawPtr body;
};

const std::unordered_set<std::string>& Keywords() {
  static const auto* kw = new std::unordered_set<std::string>{
      "fn", "let", "if", "else", "while", "return", "assert", "true", "false"};
  return *kw;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  void Run(std::vector<GlobalDef>& globals, std::vector<RawFunction>& fns) {
    while (Peek().kind != Tok::kEnd) {
      if (IsWord("let")) {
        globals.push_back(ParseGlobal());
      } else if (IsWord("fn")) {
        fns.push_back(ParseFunction());
      } else {
        Fail("expected 'let' or 'fn' at top level");
      }
    }
  }

 private:
  const Token& Peek(size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  bool IsPunct(std::string_view p, size_t ahead = 0) const {
    return Peek(ahead).kind == Tok::kPunct && Peek(ahead).text == p;
  }
  bool IsWord(std::string_view w) const { return Peek().kind == Tok::kIdent && Peek().text == w; }
  [[noreturn]] void Fail(const std::string& msg) const {
    const Token& t = Peek();
    std::string got = t.kind == Tok::kEnd ? "end of input" : "'" + t.text + "'";
    throw Error::Syntax(t.line, t.col, msg + ", got " + got);
  }
  Token Take() { return toks_[pos_++]; }
  void Expect(std::string_view p) {
    if (!IsPunct(p)) Fail("expected '" + std::string(p) + "'");
    ++pos_;
  }
  void ExpectWord(std::string_view w) {
    if (!IsWord(w)) Fail("expected '" + std::string(w) + "'");
    ++pos_;
  }
  std::string ExpectIdent() {
    if (Peek().kind != Tok::kIdent || Keywords().count(Peek().text)) {
      Fail("expected identifier");
    }
    return Take().text;
  }

  RawPtr Make(RawKind kind, const Token& at) {
    auto n = std::make_unique<RawNode>();
    n->kind = kind;
    n->line = at.line;
    n->col = at.col;
    return n;
  }

  int64_t ParseIntText(const Token& t, bool negative) {
    // Magnitude may be 2^63 only when negated.
    unsigned long long limit =
        static_cast<unsigned long long>(std::numeric_limits<int64_t>::max()) +
        (negative ? 1ULL : 0ULL);
    unsigned long long v = 0;
    for (char c : t.text) {
      unsigned long long digit = static_cast<unsigned long long>(c - '0');
      if (v > (limit - digit) / 10) {
        throw Error::Syntax(t.line, t.col, "integer literal out of range");
      }
      v = v * 10 + digit;
    }
    if (negative) return static_cast<int64_t>(0ULL - v);
    return static_cast<int64_t>(v);
  }

  Value ParseLiteralValue() {
    if (IsPunct("-") && Peek(1).kind == Tok::kInt) {
      Take();
      return Value::Int(ParseIntText(Take(), true));
    }
    if (Peek().kind == Tok::kInt) return Value::Int(ParseIntText(Take(), false));
    if (Peek().kind == Tok::kStr) return Value::Str(Take().text);
    if (IsWord("true")) {
      Take();
      return Value::Bool(true);
    }
    if (IsWord("false")) {
      Take();
      return Value::Bool(false);
    }
    if (IsPunct("[")) {
      Take();
      std::vector<Value> items;
      if (!IsPunct("]")) {
        while (true) {
          items.push_back(ParseLiteralValue());
          if (!IsPunct(",")) break;
          Take();
        }
      }
      Expect("]");
      return Value::Arr(std::move(items));
    }
    Fail("globals must be initialized with a literal");
  }

  GlobalDef ParseGlobal() {
    ExpectWord("let");
    GlobalDef g;
    g.line = Peek().line;
    g.name = ExpectIdent();
    Expect("=");
    g.initial = ParseLiteralValue();
    Expect(";");
    return g;
  }

  RawFunction ParseFunction() {
    ExpectWord("fn");
    RawFunction f;
    f.line = Peek().line;
    f.col = Peek().col;
    f.name = ExpectIdent();
    Expect("(");
    if (!IsPunct(")")) {
      while (true) {
        f.params.push_back(ExpectIdent());
        if (!IsPunct(",")) break;
        Take();
      }
    }
    Expect(")");
    f.body = ParseBlock();
    return f;
  }

  RawPtr ParseBlock() {
    if (!IsPunct("{")) Fail("expected '{'");
    RawPtr block = Make(RawKind::kBlock, Take());
    while (!IsPunct("}")) {
      if (Peek().kind == Tok::kEnd) Fail("expected '}'");
      block->kids.push_back(ParseStatement());
    }
    Take();
    return block;
  }

  RawPtr ParseIf() {
    RawPtr n = Make(RawKind::kIf, Take());
    Expect("(");
    n->kids.push_back(ParseExpr());
    Expect(")");
    n->kids.push_back(ParseBlock());
    if (IsWord("else")) {
      Take();
      if (IsWord("if")) {
        n->kids.push_back(ParseIf());
      } else {
        n->kids.push_back(ParseBlock());
      }
    }
    return n;
  }

  RawPtr ParseStatement() {
    const Token& t = Peek();
    if (IsWord("let")) {
      RawPtr n = Make(RawKind::kLet, Take());
      n->text = ExpectIdent();
      Expect("=");
      n->kids.push_back(ParseExpr());
      Expect(";");
      return n;
    }
    if (IsWord("if")) return ParseIf();
    if (IsWord("while")) {
      RawPtr n = Make(RawKind::kWhile, Take());
      Expect("(");
      n->kids.push_back(ParseExpr());
      Expect(")");
      n->kids.push_back(ParseBlock());
      return n;
    }
    if (IsWord("return")) {
      RawPtr n = Make(RawKind::kReturn, Take());
      if (!IsPunct(";")) n->kids.push_back(ParseExpr());
      Expect(";");
      return n;
    }
    if (IsWord("assert")) {
      RawPtr n = Make(RawKind::kAssert, Take());
      Expect("(");
      n->kids.push_back(ParseExpr());
      Expect(")");
      Expect(";");
      return n;
    }
    Token start = t;
    RawPtr e = ParseExpr();
    if (IsPunct("=")) {
      const RawNode* root = e.get();
      while (root->kind == RawKind::kIndex) root = root->kids[0].get();
      if (root->kind != RawKind::kName) {
        throw Error::Syntax(start.line, start.col, "invalid assignment target");
      }
      Take();
      RawPtr n = Make(RawKind::kAssign, start);
      n->kids.push_back(std::move(e));
      n->kids.push_back(ParseExpr());
      Expect(";");
      return n;
    }
    RawPtr n = Make(RawKind::kExprStmt, start);
    n->kids.push_back(std::move(e));
    Expect(";");
    return n;
  }

  RawPtr ParseExpr() { return ParseBinary(0); }

  static int Precedence(std::string_view op) {
    if (op == "||") return 1;
    if (op == "&&") return 2;
    if (op == "==" || op == "!=") return 3;
    if (op == "<" || op == "<=" || op == ">" || op == ">=") return 4;
    if (op == "+" || op == "-") return 5;
    if (op == "*" || op == "/" || op == "%") return 6;
    return -1;
  }

  static BinaryOp OpFor(std::string_view op) {
    for (int i = 0; i <= static_cast<int>(BinaryOp::kOr); ++i) {
      if (BinaryOpText(static_cast<BinaryOp>(i)) == op) {
        return static_cast<BinaryOp>(i);
      }
    }
    return BinaryOp::kAdd;
  }

  // Precedence climbing; all binary operators are left-associative.
  RawPtr ParseBinary(int min_prec) {
    RawPtr lhs = ParseUnary();
    while (Peek().kind == Tok::kPunct) {
      int prec = Precedence(Peek().text);
      if (prec < 0 || prec < min_prec) break;
      Token op = Take();
      RawPtr rhs = ParseBinary(prec + 1);
      RawPtr n = Make(RawKind::kBinary, op);
      n->line = lhs->line;
      n->col = lhs->col;
      n->binary = OpFor(op.text);
      n->kids.push_back(std::move(lhs));
      n->kids.push_back(std::move(rhs));
      lhs = std::move(n);
    }
    return lhs;
  }

  RawPtr ParseUnary() {
    if (IsPunct("-") || IsPunct("!")) {
      Token op = Take();
      RawPtr n = Make(RawKind::kUnary, op);
      n->unary = op.text == "-" ? UnaryOp::kNeg : UnaryOp::kNot;
      n->kids.push_back(ParseUnary());
      return n;
    }
    return ParsePostfix();
  }

  RawPtr ParsePostfix() {
    RawPtr e = ParsePrimary();
    while (IsPunct("[")) {
      Token at = Take();
      RawPtr n = Make(RawKind::kIndex, at);
      n->line = e->line;
      n->col = e->col;
      n->kids.push_back(std::move(e));
      n->kids.push_back(ParseExpr());
      Expect("]");
      e = std::move(n);
    }
    return e;
  }

  RawPtr ParsePrimary() {
    const Token& t = Peek();
    if (t.kind == Tok::kInt) {
      RawPtr n = Make(RawKind::kInt, t);
      n->int_value = ParseIntText(Take(), false);
      return n;
    }
    if (t.kind == Tok::kStr) {
      RawPtr n = Make(RawKind::kStr, t);
      n->text = Take().text;
      return n;
    }
    if (IsWord("true") || IsWord("false")) {
      RawPtr n = Make(RawKind::kBool, t);
      n->int_value = Take().text == "true" ? 1 : 0;
      return n;
    }
    if (IsPunct("[")) {
      RawPtr n = Make(RawKind::kArray, Take());
      if (!IsPunct("]")) {
        while (true) {
          n->kids.push_back(ParseExpr());
          if (!IsPunct(",")) break;
          Take();
        }
      }
      Expect("]");
      return n;
    }
    if (IsPunct("&")) {
      RawPtr n = Make(RawKind::kFnRef, Take());
      n->text = ExpectIdent();
      return n;
    }
    if (IsPunct("(")) {
      Take();
      RawPtr e = ParseExpr();
      Expect(")");
      return e;
    }
    if (t.kind == Tok::kIdent && !Keywords().count(t.text)) {
      Token name = Take();
      if (IsPunct("(")) {
        Take();
        RawPtr n = Make(RawKind::kCall, name);
        n->text = name.text;
        if (!IsPunct(")")) {
          while (true) {
            n->kids.push_back(ParseExpr());
            if (!IsPunct(",")) break;
            Take();
          }
        }
        Expect(")");
        return n;
      }
      RawPtr n = Make(RawKind::kName, name);
      n->text = name.text;
      return n;
    }
    Fail("expected expression");
  }

  std::vector<Token> toks_;
  size_t pos_ = 0;
};

// Resolves names and flattens one function into preorder node ids.
class Resolver {
 public:
  Resolver(const std::unordered_map<std::string, FunctionId>& fn_index,
           const std::vector<RawFunction>& fns,
           const std::unordered_map<std::string, int32_t>& global_index)
      : fn_index_(fn_index), fns_(fns), global_index_(global_index) {}

  FunctionDef Resolve(const RawFunction& raw) {
    def_ = FunctionDef{};
    def_.name = raw.name;
    def_.params = raw.params;
    def_.line = raw.line;
    def_.is_test = IsTestName(raw.name);
    scopes_.clear();
    scopes_.emplace_back();
    for (const std::string& p : raw.params) {
      if (scopes_.back().count(p)) {
        throw Error::Syntax(raw.line, raw.col, "duplicate parameter '" + p + "'");
      }
      scopes_.back()[p] = def_.num_slots++;
    }
    Emit(*raw.body);
    return std::move(def_);
  }

 private:
  std::optional<int32_t> FindLocal(const std::string& name) const {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      auto found = it->find(name);
      if (found != it->end()) return found->second;
    }
    return std::nullopt;
  }

  // Emits a kLocal/kGlobal node for a variable name.
  NodeId EmitVariable(const std::string& name, int line) {
    Node n;
    n.line = line;
    n.text = name;
    if (auto slot = FindLocal(name)) {
      n.kind = NodeKind::kLocal;
      n.ref = *slot;
    } else if (auto it = global_index_.find(name); it != global_index_.end()) {
      n.kind = NodeKind::kGlobal;
      n.ref = it->second;
    } else {
      if (fn_index_.count(name)) {
        throw Error::Syntax(line, 0, "function '" + name + "' used as a value; write &" + name);
      }
      throw Error::Resolution(name, line);
    }
    NodeId id = static_cast<NodeId>(def_.nodes.size());
    def_.nodes.push_back(std::move(n));
    return id;
  }

  NodeId Emit(const RawNode& raw) {
    NodeId id = static_cast<NodeId>(def_.nodes.size());
    def_.nodes.emplace_back();
    Node n;
    n.line = raw.line;
    switch (raw.kind) {
      case RawKind::kBlock:
        n.kind = NodeKind::kBlock;
        scopes_.emplace_back();
        for (const auto& k : raw.kids) n.kids.push_back(Emit(*k));
        scopes_.pop_back();
        break;
      case RawKind::kLet:
        n.kind = NodeKind::kLet;
        n.text = raw.text;
        n.kids.push_back(Emit(*raw.kids[0]));
        n.ref = def_.num_slots++;
        scopes_.back()[raw.text] = n.ref;
        break;
      case RawKind::kAssign:
        n.kind = NodeKind::kAssign;
        n.kids.push_back(EmitTarget(*raw.kids[0]));
        n.kids.push_back(Emit(*raw.kids[1]));
        break;
      case RawKind::kIf:
        n.kind = NodeKind::kIf;
        for (const auto& k : raw.kids) n.kids.push_back(Emit(*k));
        break;
      case RawKind::kWhile:
        n.kind = NodeKind::kWhile;
        for (const auto& k : raw.kids) n.kids.push_back(Emit(*k));
        break;
      case RawKind::kReturn:
        n.kind = NodeKind::kReturn;
        for (const auto& k : raw.kids) n.kids.push_back(Emit(*k));
        break;
      case RawKind::kAssert:
        n.kind = NodeKind::kAssert;
        n.kids.push_back(Emit(*raw.kids[0]));
        break;
      case RawKind::kExprStmt:
        n.kind = NodeKind::kExprStmt;
        n.kids.push_back(Emit(*raw.kids[0]));
        break;
      case RawKind::kInt:
        n.kind = NodeKind::kIntLit;
        n.int_value = raw.int_value;
        break;
      case RawKind::kBool:
        n.kind = NodeKind::kBoolLit;
        n.int_value = raw.int_value;
        break;
      case RawKind::kStr:
        n.kind = NodeKind::kStrLit;
        n.text = raw.text;
        break;
      case RawKind::kArray:
        n.kind = NodeKind::kArrayLit;
        for (const auto& k : raw.kids) n.kids.push_back(Emit(*k));
        break;
      case RawKind::kFnRef: {
        auto it = fn_index_.find(raw.text);
        if (it == fn_index_.end()) throw Error::Resolution(raw.text, raw.line);
        n.kind = NodeKind::kFnRefLit;
        n.text = raw.text;
        n.ref = it->second;
        break;
      }
      case RawKind::kName: {
        // Re-emit the variable node in place of the reserved slot.
        def_.nodes.pop_back();
        return EmitVariable(raw.text, raw.line);
      }
      case RawKind::kIndex:
        n.kind = NodeKind::kIndex;
        n.kids.push_back(Emit(*raw.kids[0]));
        n.kids.push_back(Emit(*raw.kids[1]));
        break;
      case RawKind::kUnary:
        n.kind = NodeKind::kUnary;
        n.unary = raw.unary;
        n.kids.push_back(Emit(*raw.kids[0]));
        break;
      case RawKind::kBinary:
        n.kind = NodeKind::kBinary;
        n.binary = raw.binary;
        n.kids.push_back(Emit(*raw.kids[0]));
        n.kids.push_back(Emit(*raw.kids[1]));
        break;
      case RawKind::kCall:
        EmitCall(raw, n);
        break;
    }
    def_.nodes[static_cast<size_t>(id)] = std::move(n);
    return id;
  }

  NodeId EmitTarget(const RawNode& raw) {
    if (raw.kind == RawKind::kName) return EmitVariable(raw.text, raw.line);
    return Emit(raw);
  }

  void EmitCall(const RawNode& raw, Node& n) {
    n.text = raw.text;
    if (FindLocal(raw.text) || global_index_.count(raw.text)) {
      n.kind = NodeKind::kIndirectCall;
      n.kids.push_back(EmitVariable(raw.text, raw.line));
    } else if (auto it = fn_index_.find(raw.text); it != fn_index_.end()) {
      const RawFunction& callee = fns_[static_cast<size_t>(it->second)];
      if (callee.params.size() != raw.kids.size()) {
        throw Error::Syntax(
            raw.line, raw.col,
            "'" + raw.text + "' expects " + std::to_string(callee.params.size()) + " argument(s)");
      }
      n.kind = NodeKind::kCall;
      n.ref = it->second;
    } else if (auto b = BuiltinByName(raw.text)) {
      if (static_cast<size_t>(BuiltinArity(*b)) != raw.kids.size()) {
        throw Error::Syntax(
            raw.line, raw.col,
            "'" + raw.text + "' expects " + std::to_string(BuiltinArity(*b)) + " argument(s)");
      }
      n.kind = NodeKind::kBuiltinCall;
      n.builtin = *b;
    } else {
      throw Error::Resolution(raw.text, raw.line);
    }
    for (const auto& k : raw.kids) n.kids.push_back(Emit(*k));
  }

  const std::unordered_map<std::string, FunctionId>& fn_index_;
  const std::vector<RawFunction>& fns_;
  const std::unordered_map<std::string, int32_t>& global_index_;
  FunctionDef def_;
  std::vector<std::unordered_map<std::string, int32_t>> scopes_;
};

}  // namespace

Program Parse(std::string_view source) {
  std::vector<GlobalDef> globals;
  std::vector<RawFunction> raw_fns;
  Parser(Lexer(source).Run()).Run(globals, raw_fns);

  std::unordered_map<std::string, int32_t> global_index;
  for (size_t i = 0; i < globals.size(); ++i) {
    if (!global_index.emplace(globals[i].name, static_cast<int32_t>(i)).second) {
      throw Error::Syntax(globals[i].line, 1, "duplicate global '" + globals[i].name + "'");
    }
  }
  std::unordered_map<std::string, FunctionId> fn_index;
  for (size_t i = 0; i < raw_fns.size(); ++i) {
    const RawFunction& f = raw_fns[i];
    if (BuiltinByName(f.name)) {
      throw Error::Syntax(f.line, f.col, "'" + f.name + "' is a builtin");
    }
    if (global_index.count(f.name)) {
      throw Error::Syntax(f.line, f.col, "'" + f.name + "' is already declared as a global");
    }
    if (!fn_index.emplace(f.name, static_cast<FunctionId>(i)).second) {
      throw Error::Syntax(f.line, f.col, "duplicate function '" + f.name + "'");
    }
    if (IsTestName(f.name) && !f.params.empty()) {
      throw Error::Syntax(f.line, f.col, "test function '" + f.name + "' takes no parameters");
    }
  }

  Resolver resolver(fn_index, raw_fns, global_index);
  std::vector<std::shared_ptr<const FunctionDef>> fns;
  fns.reserve(raw_fns.size());
  for (const RawFunction& raw : raw_fns) {
    fns.push_back(std::make_shared<const FunctionDef>(resolver.Resolve(raw)));
  }
  return Program(std::move(globals), std::move(fns));
}

namespace {

struct SourceFile {
  std::filesystem::path path;
  std::string text;
};

std::vector<SourceFile> ReadSources(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw Error(ErrorCode::kIo, "not a project directory: " + dir.string());
  }
  std::vector<std::filesystem::path> paths;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".mini") {
      paths.push_back(entry.path());
    }
  }
  std::sort(paths.begin(), paths.end(), [](const auto& a, const auto& b) {
    return a.filename().string() < b.filename().string();
  });
  std::vector<SourceFile> files;
  for (const auto& p : paths) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error(ErrorCode::kIo, "cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    std::string text = ss.str();
    if (!text.empty() && text.back() != '\n') text += '\n';
    files.push_back({p, std::move(text)});
  }
  return files;
}

}  // namespace

std::string ReadProjectSource(const std::filesystem::path& dir) {
  std::string out;
  for (const SourceFile& f : ReadSources(dir)) out += f.text;
  return out;
}

Program LoadProject(const std::filesystem::path& dir) {
  std::vector<SourceFile> files = ReadSources(dir);
  std::string source;
  for (const SourceFile& f : files) source += f.text;
  try {
    return Parse(source);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kSyntax || e.line() <= 0) throw;
    // Map the concatenated line number back to its file.
    int line = e.line();
    for (const SourceFile& f : files) {
      int lines = static_cast<int>(std::count(f.text.begin(), f.text.end(), '\n'));
      if (line <= lines) {
        throw Error::Syntax(line, e.column(), f.path.filename().string() + ": " + e.what());
      }
      line -= lines;
    }
    throw;
  }
}

}  // namespace memomut
