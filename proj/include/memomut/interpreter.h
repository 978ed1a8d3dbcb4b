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

// Big-step AST interpreter for Mini with step accounting and the
// instrumentation-hook seam used by the profiler, the memo recorder and the
// mutant-testing client.

#ifndef MEMOMUT_INTERPRETER_H_
#define MEMOMUT_INTERPRETER_H_

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "memomut/ast.h"
#include "memomut/value.h"

namespace memomut {

struct CallFrameInfo {
  FunctionId fn;
  NodeId call_site;  // -1 for the test entry
};

struct ExecState {
  std::vector<Value> globals;  // indexed like Program::globals()
  std::vector<CallFrameInfo> call_stack;
  // AST nodes evaluated, plus the charge for every substituted call.
  int64_t steps = 0;
  // What the step limit is checked against. Equals `steps` unless a hook
  // substituted a call and declared the body's original cost.
  int64_t budget_used = 0;
  std::vector<std::string> output;
  std::mt19937_64 rng;
  int64_t fake_clock = 0;
};

struct ExecOptions {
  int64_t step_limit = 10'000'000;
  int32_t max_depth = 1000;
  uint64_t seed = 0;
  // Salt mixed with `seed` so each execution gets its own rand stream.
  std::string stream;
  bool fake_time = false;
};

// Fresh state: globals deep-copied from their initializers, rand stream
// derived from (seed, stream).
ExecState InitialState(const Program& program, const ExecOptions& options);

// Rand stream of ordinary test runs (profiling, mutant runs).
inline std::string TestStream(std::string_view test) { return "test/" + std::string(test); }

enum class FaultKind : uint8_t {
  kDivisionByZero,
  kIndexOutOfBounds,
  kTypeMismatch,
  kArrayCycle,
  kBadArgument,
  kBadArity,
  kStackOverflow,
};
std::string_view FaultKindName(FaultKind kind);

enum class Verdict : uint8_t {
  kPass,
  kAssertFail,
  kRuntimeError,
  kStepLimitExceeded,
};
std::string_view VerdictName(Verdict v);
std::optional<Verdict> VerdictByName(std::string_view name);

struct TestOutcome {
  std::string test;
  Verdict verdict = Verdict::kPass;
  FaultKind fault = FaultKind::kTypeMismatch;  // meaningful for kRuntimeError
  std::string fault_function;                  // where the failure happened
  NodeId node = -1;
  int64_t steps = 0;
  int64_t wall_ns = 0;

  bool passed() const { return verdict == Verdict::kPass; }
};

// State changes a hook asks the interpreter to apply in place of a body.
struct StatePatch {
  struct GlobalWrite {
    int32_t global;
    Value value;
    // Overwrite the current array's contents instead of rebinding.
    bool in_place = false;
  };
  std::vector<GlobalWrite> globals;
  // (parameter position, contents) for array arguments mutated in place.
  std::vector<std::pair<int32_t, Value>> args;
};

struct Substitution {
  Value return_value;
  StatePatch patch;
  int64_t charged_steps = 0;  // added to `steps` and `budget_used`
  int64_t budget_steps = 0;   // added to `budget_used` only
  // Deepest call-stack growth the skipped body would have needed.
  int32_t depth_needed = 0;
};

class InstrumentationHooks {
 public:
  enum Interest : unsigned {
    kCalls = 1,
    kGlobals = 2,
    kBuiltins = 4,
  };

  virtual ~InstrumentationHooks() = default;

  virtual unsigned interests() const { return kCalls; }

  // Fires before a user-function body runs; `state.call_stack` does not yet
  // contain the callee. Returning a Substitution skips the body.
  virtual std::optional<Substitution> OnCallEnter(FunctionId /*fn*/,
                                                  std::span<const Value> /*args*/,
                                                  const ExecState& /*state*/) {
    return std::nullopt;
  }
  // Fires after the body completes normally. `args` are the values passed
  // at entry (arrays alias the caller's).
  virtual void OnCallExit(FunctionId /*fn*/, std::span<const Value> /*args*/,
                          const Value& /*result*/, const ExecState& /*state*/) {}
  virtual void OnGlobalRead(int32_t /*global*/, const ExecState& /*state*/) {}
  // Assignment to a global, or in-place mutation (`push`, index store) of an
  // array expression rooted at a global.
  virtual void OnGlobalWrite(int32_t /*global*/, const ExecState& /*state*/) {}
  virtual void OnBuiltin(Builtin /*builtin*/, const ExecState& /*state*/) {}
};

// Forwards events to several hooks; the first substitution wins.
class HookChain : public InstrumentationHooks {
 public:
  explicit HookChain(std::vector<InstrumentationHooks*> hooks);

  unsigned interests() const override { return interests_; }
  std::optional<Substitution> OnCallEnter(FunctionId fn, std::span<const Value> args,
                                          const ExecState& state) override;
  void OnCallExit(FunctionId fn, std::span<const Value> args, const Value& result,
                  const ExecState& state) override;
  void OnGlobalRead(int32_t global, const ExecState& state) override;
  void OnGlobalWrite(int32_t global, const ExecState& state) override;
  void OnBuiltin(Builtin builtin, const ExecState& state) override;

 private:
  std::vector<InstrumentationHooks*> hooks_;
  unsigned interests_ = 0;
};

struct TestRun {
  TestOutcome outcome;
  ExecState state;
};

// Runs the named zero-argument test from a fresh state. `hooks` may be null.
TestRun RunTest(const Program& program, std::string_view test, InstrumentationHooks* hooks,
                const ExecOptions& options);

struct CallRun {
  std::optional<Value> result;       // set when the call completed
  std::optional<TestOutcome> fault;  // set otherwise
  std::vector<Value> args;           // the arguments as passed (post-call)
  ExecState state;
};

// Calls `fn` with `args` starting from `state`.
CallRun CallFunction(const Program& program, FunctionId fn, std::vector<Value> args,
                     ExecState state, InstrumentationHooks* hooks, const ExecOptions& options);

}  // namespace memomut

#endif  // MEMOMUT_INTERPRETER_H_
