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

#include "memomut/interpreter.h"

#include <chrono>
#include <limits>

#include "memomut/error.h"
#include "memomut/hash.h"

namespace memomut {

std::string_view FaultKindName(FaultKind kind) {
  switch (kind) {
    case FaultKind::kDivisionByZero:
      return "DivisionByZero";
    case FaultKind::kIndexOutOfBounds:
      return "IndexOutOfBounds";
    case FaultKind::kTypeMismatch:
      return "TypeMismatch";
    case FaultKind::kArrayCycle:
      return "ArrayCycle";
    case FaultKind::kBadArgument:
      return "BadArgument";
    case FaultKind::kBadArity:
      return "BadArity";
    case FaultKind::kStackOverflow:
      return "StackOverflow";
  }
  return "?";
}

std::string_view VerdictName(Verdict v) {
  switch (v) {
    case Verdict::kPass:
      return "Pass";
    case Verdict::kAssertFail:
      return "AssertFail";
    case Verdict::kRuntimeError:
      return "RuntimeError";
    case Verdict::kStepLimitExceeded:
      return "StepLimitExceeded";
  }
  return "?";
}

std::optional<Verdict> VerdictByName(std::string_view name) {
  for (Verdict v : {Verdict::kPass, Verdict::kAssertFail, Verdict::kRuntimeError,
                    Verdict::kStepLimitExceeded}) {
    if (VerdictName(v) == name) return v;
  }
  return std::nullopt;
}

ExecState InitialState(const Program& program, const ExecOptions& options) {
  ExecState state;
  state.globals.reserve(program.globals().size());
  for (const GlobalDef& g : program.globals()) {
    state.globals.push_back(DeepCopy(g.initial));
  }
  state.rng.seed(Mix64(options.seed ^ Fnv1a64(options.stream)));
  // Fake time starts somewhere seed-dependent so tests cannot hard-code it.
  state.fake_clock = 1'000'000 + static_cast<int64_t>(Mix64(options.seed) % 1'000'000);
  return state;
}

HookChain::HookChain(std::vector<InstrumentationHooks*> hooks) : hooks_(std::move(hooks)) {
  for (InstrumentationHooks* h : hooks_) interests_ |= h->interests();
}

std::optional<Substitution> HookChain::OnCallEnter(FunctionId fn, std::span<const Value> args,
                                                   const ExecState& state) {
  for (InstrumentationHooks* h : hooks_) {
    if (!(h->interests() & kCalls)) continue;
    if (auto sub = h->OnCallEnter(fn, args, state)) return sub;
  }
  return std::nullopt;
}

void HookChain::OnCallExit(FunctionId fn, std::span<const Value> args, const Value& result,
                           const ExecState& state) {
  for (InstrumentationHooks* h : hooks_) {
    if (h->interests() & kCalls) h->OnCallExit(fn, args, result, state);
  }
}

void HookChain::OnGlobalRead(int32_t global, const ExecState& state) {
  for (InstrumentationHooks* h : hooks_) {
    if (h->interests() & kGlobals) h->OnGlobalRead(global, state);
  }
}

void HookChain::OnGlobalWrite(int32_t global, const ExecState& state) {
  for (InstrumentationHooks* h : hooks_) {
    if (h->interests() & kGlobals) h->OnGlobalWrite(global, state);
  }
}

void HookChain::OnBuiltin(Builtin builtin, const ExecState& state) {
  for (InstrumentationHooks* h : hooks_) {
    if (h->interests() & kBuiltins) h->OnBuiltin(builtin, state);
  }
}

namespace {

struct Fault {
  Verdict verdict;
  FaultKind kind;
  NodeId node;
};

class Interpreter {
 public:
  Interpreter(const Program& program, InstrumentationHooks* hooks, const ExecOptions& options,
              ExecState& state)
      : program_(program),
        hooks_(hooks),
        interests_(hooks ? hooks->interests() : 0),
        options_(options),
        state_(state) {}

  Value Call(FunctionId fn_id, std::vector<Value>& args, NodeId site) {
    if (interests_ & InstrumentationHooks::kCalls) {
      if (auto sub = hooks_->OnCallEnter(fn_id, args, state_)) {
        ApplySubstitution(*sub, args, site);
        return std::move(sub->return_value);
      }
    }
    if (static_cast<int64_t>(state_.call_stack.size()) >= options_.max_depth) {
      throw Fault{Verdict::kRuntimeError, FaultKind::kStackOverflow, site};
    }
    const FunctionDef& fn = program_.function(fn_id);
    std::vector<Value> slots(static_cast<size_t>(fn.num_slots));
    for (size_t i = 0; i < args.size(); ++i) slots[i] = args[i];
    state_.call_stack.push_back({fn_id, site});
    std::vector<Value>* saved_slots = slots_;
    const FunctionDef* saved_fn = fn_;
    slots_ = &slots;
    fn_ = &fn;
    Value result;
    ExecBlock(0, &result);
    slots_ = saved_slots;
    fn_ = saved_fn;
    state_.call_stack.pop_back();
    if (interests_ & InstrumentationHooks::kCalls) {
      hooks_->OnCallExit(fn_id, args, result, state_);
    }
    return result;
  }

 private:
  const Node& N(NodeId id) const { return fn_->node(id); }

  void Tick(NodeId id) {
    ++state_.steps;
    if (++state_.budget_used >= options_.step_limit) {
      throw Fault{Verdict::kStepLimitExceeded, FaultKind::kTypeMismatch, id};
    }
  }

  [[noreturn]] void Fail(FaultKind kind, NodeId id) {
    throw Fault{Verdict::kRuntimeError, kind, id};
  }

  void ApplySubstitution(Substitution& sub, std::vector<Value>& args, NodeId site) {
    if (static_cast<int64_t>(state_.call_stack.size()) + sub.depth_needed >= options_.max_depth) {
      throw Fault{Verdict::kRuntimeError, FaultKind::kStackOverflow, site};
    }
    state_.steps += sub.charged_steps;
    state_.budget_used += sub.charged_steps + sub.budget_steps;
    if (state_.budget_used >= options_.step_limit) {
      throw Fault{Verdict::kStepLimitExceeded, FaultKind::kTypeMismatch, site};
    }
    for (auto& w : sub.patch.globals) {
      Value& slot = state_.globals[static_cast<size_t>(w.global)];
      if (w.in_place && slot.is_arr() && w.value.is_arr()) {
        slot.as_arr()->items = std::move(w.value.as_arr()->items);
      } else {
        slot = std::move(w.value);
      }
    }
    for (auto& [pos, value] : sub.patch.args) {
      const Value& arg = args[static_cast<size_t>(pos)];
      if (arg.is_arr() && value.is_arr()) {
        arg.as_arr()->items = std::move(value.as_arr()->items);
      }
    }
  }

  // Returns true when a `return` executed; the value lands in `*ret`.
  bool ExecBlock(NodeId id, Value* ret) {
    Tick(id);
    for (NodeId k : N(id).kids) {
      if (Exec(k, ret)) return true;
    }
    return false;
  }

  bool Condition(const Node& n) {
    Value c = Eval(n.kids[0]);
    if (!c.is_bool()) Fail(FaultKind::kTypeMismatch, n.kids[0]);
    return n.mark == Mark::kNegateCondition ? !c.as_bool() : c.as_bool();
  }

  bool Exec(NodeId id, Value* ret) {
    const Node& n = N(id);
    if (n.mark == Mark::kDeleted) return false;
    switch (n.kind) {
      case NodeKind::kBlock:
        return ExecBlock(id, ret);
      case NodeKind::kLet: {
        Tick(id);
        Value v = Eval(n.kids[0]);
        (*slots_)[static_cast<size_t>(n.ref)] = std::move(v);
        return false;
      }
      case NodeKind::kAssign:
        Tick(id);
        Assign(n);
        return false;
      case NodeKind::kIf:
        Tick(id);
        if (Condition(n)) return ExecBlock(n.kids[1], ret);
        if (n.kids.size() > 2) {
          NodeId alt = n.kids[2];
          return N(alt).kind == NodeKind::kIf ? Exec(alt, ret) : ExecBlock(alt, ret);
        }
        return false;
      case NodeKind::kWhile:
        Tick(id);
        while (Condition(n)) {
          if (ExecBlock(n.kids[1], ret)) return true;
        }
        return false;
      case NodeKind::kReturn:
        Tick(id);
        if (n.mark == Mark::kReturnDefault) {
          *ret = Value::DefaultOf(n.default_type);
        } else if (!n.kids.empty()) {
          *ret = Eval(n.kids[0]);
        } else {
          *ret = Value();
        }
        return true;
      case NodeKind::kAssert: {
        Tick(id);
        Value c = Eval(n.kids[0]);
        if (!c.is_bool()) Fail(FaultKind::kTypeMismatch, n.kids[0]);
        if (!c.as_bool()) {
          throw Fault{Verdict::kAssertFail, FaultKind::kTypeMismatch, id};
        }
        return false;
      }
      case NodeKind::kExprStmt:
        Tick(id);
        Eval(n.kids[0]);
        return false;
      default:
        Eval(id);
        return false;
    }
  }

  // Global at the root of an lvalue/index chain, or -1.
  int32_t RootGlobal(NodeId id) const {
    while (N(id).kind == NodeKind::kIndex) id = N(id).kids[0];
    return N(id).kind == NodeKind::kGlobal ? N(id).ref : -1;
  }

  void NoteWrite(int32_t global) {
    if (global >= 0 && (interests_ & InstrumentationHooks::kGlobals)) {
      hooks_->OnGlobalWrite(global, state_);
    }
  }

  void Assign(const Node& n) {
    NodeId target = n.kids[0];
    const Node& t = N(target);
    if (t.kind == NodeKind::kIndex) {
      Tick(target);
      Value base = Eval(t.kids[0]);
      Value index = Eval(t.kids[1]);
      Value v = Eval(n.kids[1]);
      if (!base.is_arr() || !index.is_int()) Fail(FaultKind::kTypeMismatch, target);
      auto& items = base.as_arr()->items;
      int64_t i = index.as_int();
      if (i < 0 || i >= static_cast<int64_t>(items.size())) {
        Fail(FaultKind::kIndexOutOfBounds, target);
      }
      if (Reaches(v, base.as_arr().get())) Fail(FaultKind::kArrayCycle, target);
      items[static_cast<size_t>(i)] = std::move(v);
      NoteWrite(RootGlobal(target));
      return;
    }
    Value v = Eval(n.kids[1]);
    Tick(target);
    if (t.kind == NodeKind::kLocal) {
      (*slots_)[static_cast<size_t>(t.ref)] = std::move(v);
    } else {
      state_.globals[static_cast<size_t>(t.ref)] = std::move(v);
      NoteWrite(t.ref);
    }
  }

  static int64_t Wrap(uint64_t v) { return static_cast<int64_t>(v); }

  Value Arith(BinaryOp op, const Value& a, const Value& b, NodeId id) {
    if (op == BinaryOp::kAdd && a.is_str() && b.is_str()) {
      return Value::Str(a.as_str() + b.as_str());
    }
    if (!a.is_int() || !b.is_int()) Fail(FaultKind::kTypeMismatch, id);
    uint64_t x = static_cast<uint64_t>(a.as_int());
    uint64_t y = static_cast<uint64_t>(b.as_int());
    switch (op) {
      case BinaryOp::kAdd:
        return Value::Int(Wrap(x + y));
      case BinaryOp::kSub:
        return Value::Int(Wrap(x - y));
      case BinaryOp::kMul:
        return Value::Int(Wrap(x * y));
      case BinaryOp::kDiv:
      case BinaryOp::kMod: {
        int64_t l = a.as_int();
        int64_t r = b.as_int();
        if (r == 0) Fail(FaultKind::kDivisionByZero, id);
        if (r == -1) {
          return Value::Int(op == BinaryOp::kDiv ? Wrap(0 - x) : 0);
        }
        return Value::Int(op == BinaryOp::kDiv ? l / r : l % r);
      }
      default:
        Fail(FaultKind::kTypeMismatch, id);
    }
  }

  Value Compare(BinaryOp op, const Value& a, const Value& b, NodeId id) {
    int cmp;
    if (a.is_int() && b.is_int()) {
      cmp = a.as_int() < b.as_int() ? -1 : (a.as_int() > b.as_int() ? 1 : 0);
    } else if (a.is_str() && b.is_str()) {
      int c = a.as_str().compare(b.as_str());
      cmp = c < 0 ? -1 : (c > 0 ? 1 : 0);
    } else {
      Fail(FaultKind::kTypeMismatch, id);
    }
    switch (op) {
      case BinaryOp::kLt:
        return Value::Bool(cmp < 0);
      case BinaryOp::kLe:
        return Value::Bool(cmp <= 0);
      case BinaryOp::kGt:
        return Value::Bool(cmp > 0);
      default:
        return Value::Bool(cmp >= 0);
    }
  }

  Value Binary(NodeId id, const Node& n) {
    if (n.binary == BinaryOp::kAnd || n.binary == BinaryOp::kOr) {
      Value a = Eval(n.kids[0]);
      if (!a.is_bool()) Fail(FaultKind::kTypeMismatch, n.kids[0]);
      bool is_and = n.binary == BinaryOp::kAnd;
      if (a.as_bool() != is_and) return a;
      Value b = Eval(n.kids[1]);
      if (!b.is_bool()) Fail(FaultKind::kTypeMismatch, n.kids[1]);
      return b;
    }
    Value a = Eval(n.kids[0]);
    Value b = Eval(n.kids[1]);
    if (n.binary == BinaryOp::kEq) return Value::Bool(DeepEqual(a, b));
    if (n.binary == BinaryOp::kNe) return Value::Bool(!DeepEqual(a, b));
    if (IsRelational(n.binary)) return Compare(n.binary, a, b, id);
    return Arith(n.binary, a, b, id);
  }

  std::vector<Value> EvalArgs(const Node& n, size_t first) {
    std::vector<Value> args;
    args.reserve(n.kids.size() - first);
    for (size_t i = first; i < n.kids.size(); ++i) args.push_back(Eval(n.kids[i]));
    return args;
  }

  Value CallBuiltin(NodeId id, const Node& n) {
    std::vector<Value> args = EvalArgs(n, 0);
    if (interests_ & InstrumentationHooks::kBuiltins) {
      hooks_->OnBuiltin(n.builtin, state_);
    }
    switch (n.builtin) {
      case Builtin::kLen:
        if (args[0].is_arr()) {
          return Value::Int(static_cast<int64_t>(args[0].as_arr()->items.size()));
        }
        if (args[0].is_str()) {
          return Value::Int(static_cast<int64_t>(args[0].as_str().size()));
        }
        Fail(FaultKind::kTypeMismatch, id);
      case Builtin::kPush:
        if (!args[0].is_arr()) Fail(FaultKind::kTypeMismatch, id);
        if (Reaches(args[1], args[0].as_arr().get())) Fail(FaultKind::kArrayCycle, id);
        args[0].as_arr()->items.push_back(std::move(args[1]));
        NoteWrite(RootGlobal(n.kids[0]));
        return Value();
      case Builtin::kPrint:
        state_.output.push_back(PrintForm(args[0]));
        return Value();
      case Builtin::kTimeNow:
        if (options_.fake_time) return Value::Int(state_.fake_clock++);
        return Value::Int(std::chrono::duration_cast<std::chrono::milliseconds>(
                              std::chrono::system_clock::now().time_since_epoch())
                              .count());
      case Builtin::kRand: {
        if (!args[0].is_int()) Fail(FaultKind::kTypeMismatch, id);
        if (args[0].as_int() <= 0) Fail(FaultKind::kBadArgument, id);
        std::uniform_int_distribution<int64_t> dist(0, args[0].as_int() - 1);
        return Value::Int(dist(state_.rng));
      }
      case Builtin::kLogSize:
        return Value::Int(static_cast<int64_t>(state_.output.size()));
    }
    Fail(FaultKind::kTypeMismatch, id);
  }

  Value Eval(NodeId id) {
    const Node& n = N(id);
    if (n.kind == NodeKind::kUnary && n.mark == Mark::kDropNegation) {
      return Eval(n.kids[0]);
    }
    Tick(id);
    switch (n.kind) {
      case NodeKind::kIntLit:
        return Value::Int(n.int_value);
      case NodeKind::kBoolLit:
        return Value::Bool(n.int_value != 0);
      case NodeKind::kStrLit:
        return Value::Str(n.text);
      case NodeKind::kFnRefLit:
        return Value::Fn(n.text);
      case NodeKind::kArrayLit:
        return Value::Arr(EvalArgs(n, 0));
      case NodeKind::kLocal:
        return (*slots_)[static_cast<size_t>(n.ref)];
      case NodeKind::kGlobal:
        if (interests_ & InstrumentationHooks::kGlobals) {
          hooks_->OnGlobalRead(n.ref, state_);
        }
        return state_.globals[static_cast<size_t>(n.ref)];
      case NodeKind::kIndex: {
        Value base = Eval(n.kids[0]);
        Value index = Eval(n.kids[1]);
        if (!index.is_int()) Fail(FaultKind::kTypeMismatch, id);
        int64_t i = index.as_int();
        if (base.is_arr()) {
          const auto& items = base.as_arr()->items;
          if (i < 0 || i >= static_cast<int64_t>(items.size())) {
            Fail(FaultKind::kIndexOutOfBounds, id);
          }
          return items[static_cast<size_t>(i)];
        }
        if (base.is_str()) {
          const std::string& s = base.as_str();
          if (i < 0 || i >= static_cast<int64_t>(s.size())) {
            Fail(FaultKind::kIndexOutOfBounds, id);
          }
          return Value::Str(std::string(1, s[static_cast<size_t>(i)]));
        }
        Fail(FaultKind::kTypeMismatch, id);
      }
      case NodeKind::kUnary: {
        Value v = Eval(n.kids[0]);
        if (n.unary == UnaryOp::kNeg) {
          if (!v.is_int()) Fail(FaultKind::kTypeMismatch, id);
          return Value::Int(Wrap(0 - static_cast<uint64_t>(v.as_int())));
        }
        if (!v.is_bool()) Fail(FaultKind::kTypeMismatch, id);
        return Value::Bool(!v.as_bool());
      }
      case NodeKind::kBinary:
        return Binary(id, n);
      case NodeKind::kCall: {
        std::vector<Value> args = EvalArgs(n, 0);
        return Call(n.ref, args, id);
      }
      case NodeKind::kIndirectCall: {
        Value callee = Eval(n.kids[0]);
        if (!callee.is_fn()) Fail(FaultKind::kTypeMismatch, id);
        auto fn_id = program_.FindFunction(callee.as_fn());
        if (!fn_id) Fail(FaultKind::kTypeMismatch, id);
        if (program_.function(*fn_id).params.size() != n.kids.size() - 1) {
          Fail(FaultKind::kBadArity, id);
        }
        std::vector<Value> args = EvalArgs(n, 1);
        return Call(*fn_id, args, id);
      }
      case NodeKind::kBuiltinCall:
        return CallBuiltin(id, n);
      default:
        Fail(FaultKind::kTypeMismatch, id);
    }
  }

  const Program& program_;
  InstrumentationHooks* hooks_;
  unsigned interests_;
  const ExecOptions& options_;
  ExecState& state_;
  const FunctionDef* fn_ = nullptr;
  std::vector<Value>* slots_ = nullptr;
};

TestOutcome FaultOutcome(const Program& program, const Fault& f, const ExecState& state) {
  TestOutcome out;
  out.verdict = f.verdict;
  out.fault = f.kind;
  out.node = f.node;
  if (!state.call_stack.empty()) {
    out.fault_function = program.function(state.call_stack.back().fn).name;
  }
  return out;
}

}  // namespace

TestRun RunTest(const Program& program, std::string_view test, InstrumentationHooks* hooks,
                const ExecOptions& options) {
  auto fn = program.FindFunction(test);
  if (!fn || !program.function(*fn).is_test) {
    throw Error(ErrorCode::kInvalidArgument, "no such test: " + std::string(test));
  }
  TestRun run;
  run.state = InitialState(program, options);
  auto start = std::chrono::steady_clock::now();
  CallRun call = CallFunction(program, *fn, {}, std::move(run.state), hooks, options);
  auto end = std::chrono::steady_clock::now();
  run.state = std::move(call.state);
  if (call.fault) run.outcome = std::move(*call.fault);
  run.outcome.test = std::string(test);
  run.outcome.steps = run.state.steps;
  run.outcome.wall_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(end - start).count();
  return run;
}

CallRun CallFunction(const Program& program, FunctionId fn, std::vector<Value> args,
                     ExecState state, InstrumentationHooks* hooks, const ExecOptions& options) {
  CallRun run;
  run.state = std::move(state);
  Interpreter interp(program, hooks, options, run.state);
  try {
    run.result = interp.Call(fn, args, -1);
  } catch (const Fault& f) {
    run.fault = FaultOutcome(program, f, run.state);
    run.fault->steps = run.state.steps;
  }
  run.args = std::move(args);
  return run;
}

}  // namespace memomut
