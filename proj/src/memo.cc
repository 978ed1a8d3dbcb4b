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

#include "memomut/memo.h"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <sstream>
#include <unordered_set>

#include "json.hpp"
#include "memomut/error.h"
#include "memomut/printer.h"

namespace memomut {
namespace {

void PutU8(std::string& out, uint8_t v) { out.push_back(static_cast<char>(v)); }

void PutU16(std::string& out, uint16_t v) {
  PutU8(out, static_cast<uint8_t>(v >> 8));
  PutU8(out, static_cast<uint8_t>(v));
}

void PutU32(std::string& out, uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) PutU8(out, static_cast<uint8_t>(v >> shift));
}

void PutU64(std::string& out, uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8) PutU8(out, static_cast<uint8_t>(v >> shift));
}

void PutBytes(std::string& out, std::string_view bytes) {
  PutU32(out, static_cast<uint32_t>(bytes.size()));
  out.append(bytes);
}

// Bounds-checked big-endian reader; every failure is a CorruptDB at the
// offending offset (relative to `base`).
class Reader {
 public:
  Reader(std::string_view bytes, size_t base = 0) : bytes_(bytes), base_(base) {}

  size_t pos() const { return pos_; }
  size_t offset() const { return base_ + pos_; }
  bool done() const { return pos_ == bytes_.size(); }
  size_t remaining() const { return bytes_.size() - pos_; }

  [[noreturn]] void Fail(const std::string& what) const { throw Error::CorruptDb(offset(), what); }

  void Need(size_t n) const {
    if (remaining() < n) Fail("truncated");
  }

  uint8_t U8() {
    Need(1);
    return static_cast<uint8_t>(bytes_[pos_++]);
  }
  uint16_t U16() {
    uint16_t hi = U8();
    return static_cast<uint16_t>((hi << 8) | U8());
  }
  uint32_t U32() {
    Need(4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | U8();
    return v;
  }
  uint64_t U64() {
    Need(8);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | U8();
    return v;
  }
  std::string_view Raw(size_t n) {
    Need(n);
    std::string_view s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  std::string_view Bytes() { return Raw(U32()); }
  std::string_view rest() const { return bytes_.substr(pos_); }

 private:
  std::string_view bytes_;
  size_t base_;
  size_t pos_ = 0;
};

Value ReadValue(Reader& r, int depth) {
  if (depth > 10'000) r.Fail("value nesting too deep");
  size_t at = r.offset();
  switch (static_cast<EncodingTag>(r.U8())) {
    case EncodingTag::kInt:
      return Value::Int(static_cast<int64_t>(r.U64()));
    case EncodingTag::kBool: {
      uint8_t b = r.U8();
      if (b > 1) r.Fail("bad bool byte");
      return Value::Bool(b == 1);
    }
    case EncodingTag::kStr:
      return Value::Str(std::string(r.Bytes()));
    case EncodingTag::kArr: {
      uint32_t count = r.U32();
      // Every element needs at least one byte.
      if (count > r.remaining()) r.Fail("array count exceeds data");
      std::vector<Value> items;
      items.reserve(count);
      for (uint32_t i = 0; i < count; ++i) items.push_back(ReadValue(r, depth + 1));
      return Value::Arr(std::move(items));
    }
    case EncodingTag::kFnRef:
      return Value::Fn(std::string(r.Bytes()));
    case EncodingTag::kUnit:
      return Value();
  }
  throw Error::CorruptDb(at, "unknown value tag");
}

// Encodes `v`; returns false if an array is met twice (shared structure).
bool EncodeUnique(const Value& v, std::string& out, std::unordered_set<const Array*>& seen) {
  switch (v.type()) {
    case ValueType::kInt:
      PutU8(out, static_cast<uint8_t>(EncodingTag::kInt));
      PutU64(out, static_cast<uint64_t>(v.as_int()));
      return true;
    case ValueType::kBool:
      PutU8(out, static_cast<uint8_t>(EncodingTag::kBool));
      PutU8(out, v.as_bool() ? 1 : 0);
      return true;
    case ValueType::kStr:
      PutU8(out, static_cast<uint8_t>(EncodingTag::kStr));
      PutBytes(out, v.as_str());
      return true;
    case ValueType::kFnRef:
      PutU8(out, static_cast<uint8_t>(EncodingTag::kFnRef));
      PutBytes(out, v.as_fn());
      return true;
    case ValueType::kUnit:
      PutU8(out, static_cast<uint8_t>(EncodingTag::kUnit));
      return true;
    case ValueType::kArr: {
      if (!seen.insert(v.as_arr().get()).second) return false;
      PutU8(out, static_cast<uint8_t>(EncodingTag::kArr));
      PutU32(out, static_cast<uint32_t>(v.as_arr()->items.size()));
      for (const Value& item : v.as_arr()->items) {
        if (!EncodeUnique(item, out, seen)) return false;
      }
      return true;
    }
  }
  return true;
}

void CollectArrays(const Value& v, std::unordered_set<const Array*>& out) {
  if (!v.is_arr() || !out.insert(v.as_arr().get()).second) return;
  for (const Value& item : v.as_arr()->items) CollectArrays(item, out);
}

// Same binding: scalars by value, arrays by identity.
bool ShallowSame(const Value& a, const Value& b) {
  if (a.type() != b.type()) return false;
  if (a.is_arr()) return a.as_arr() == b.as_arr();
  return DeepEqual(a, b);
}

bool ItemsUnchanged(const std::vector<Value>& before, const std::vector<Value>& now) {
  if (before.size() != now.size()) return false;
  for (size_t i = 0; i < before.size(); ++i) {
    if (!ShallowSame(before[i], now[i])) return false;
  }
  return true;
}

std::string Hex64(uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// Records OutputRecords for candidate functions.
class Recorder : public InstrumentationHooks {
 public:
  Recorder(const Program& program, const std::vector<MemoSpec>& specs,
           const std::vector<bool>& candidate, MemoDB& db)
      : program_(program), specs_(specs), candidate_(candidate), db_(db) {}

  unsigned interests() const override { return kCalls; }

  void BeginTest(const std::string& test) {
    test_ = test;
    frames_.clear();
  }

  std::optional<Substitution> OnCallEnter(FunctionId fn, std::span<const Value> args,
                                          const ExecState& state) override {
    size_t depth = state.call_stack.size();
    if (!frames_.empty()) {
      Frame& top = frames_.back();
      top.max_rel = std::max<int64_t>(top.max_rel, static_cast<int64_t>(depth - top.entry_depth));
    }
    if (!candidate_[static_cast<size_t>(fn)]) return std::nullopt;
    Frame fr;
    fr.fn = fn;
    fr.entry_depth = depth;
    const std::string& name = program_.function(fn).name;
    fr.active = !db_.exclusions.count(name);
    if (fr.active) {
      const MemoSpec& spec = specs_[static_cast<size_t>(fn)];
      auto key = BuildKey(args, spec, state.globals);
      if (!key) {
        fr.active = false;
      } else {
        fr.key = std::move(*key);
        fr.entry_steps = state.steps;
        fr.args.assign(args.begin(), args.end());
        fr.globals = state.globals;
        for (const Value& a : args) Snapshot(a, fr.pre);
        for (int32_t g : spec.key_globals) Snapshot(state.globals[static_cast<size_t>(g)], fr.pre);
        for (int32_t g : spec.may_write) Snapshot(state.globals[static_cast<size_t>(g)], fr.pre);
      }
    }
    frames_.push_back(std::move(fr));
    return std::nullopt;
  }

  void OnCallExit(FunctionId fn, std::span<const Value>, const Value& result,
                  const ExecState& state) override {
    if (!candidate_[static_cast<size_t>(fn)]) return;
    Frame fr = std::move(frames_.back());
    frames_.pop_back();
    if (!frames_.empty()) {
      Frame& parent = frames_.back();
      parent.max_rel = std::max<int64_t>(
          parent.max_rel, fr.max_rel + static_cast<int64_t>(fr.entry_depth - parent.entry_depth));
    }
    const std::string& name = program_.function(fn).name;
    if (!fr.active || db_.exclusions.count(name)) return;

    std::string problem;
    std::optional<OutputRecord> rec = BuildRecord(fr, result, state, &problem);
    if (!rec) {
      Exclude(name, ExclusionReason::kStateRestoreUnsupported, problem);
      return;
    }
    std::string bytes = rec->Encode();
    MemoTable& table = db_.tables[name];
    table.fn = name;
    auto [it, inserted] = table.entries.emplace(fr.key, bytes);
    if (!inserted && it->second != bytes) {
      Exclude(name, ExclusionReason::kConflicted,
              "key hash " + Hex64(Fnv1a64(fr.key)) + " recorded with different outputs");
      return;
    }
    table.recorded_from.insert(test_);
  }

 private:
  struct Frame {
    FunctionId fn = 0;
    bool active = false;
    std::string key;
    size_t entry_depth = 0;
    int64_t max_rel = 0;
    int64_t entry_steps = 0;
    std::vector<Value> args;
    std::vector<Value> globals;
    // Every array reachable from the inputs at entry, with its items.
    std::unordered_map<const Array*, std::vector<Value>> pre;
  };

  static void Snapshot(const Value& v, std::unordered_map<const Array*, std::vector<Value>>& pre) {
    if (!v.is_arr()) return;
    const Array* a = v.as_arr().get();
    if (pre.count(a)) return;
    pre.emplace(a, a->items);
    for (const Value& item : a->items) Snapshot(item, pre);
  }

  void Exclude(const std::string& name, ExclusionReason reason, const std::string& detail) {
    db_.exclusions[name] = {reason, detail};
    db_.tables.erase(name);
  }

  std::optional<OutputRecord> BuildRecord(const Frame& fr, const Value& result,
                                          const ExecState& state, std::string* problem) {
    const MemoSpec& spec = specs_[static_cast<size_t>(fr.fn)];
    auto changed = [&](const Array* a) {
      auto it = fr.pre.find(a);
      return it != fr.pre.end() && !ItemsUnchanged(it->second, a->items);
    };

    std::unordered_set<const Array*> arg_arrays;
    for (const Value& a : fr.args) {
      if (a.is_arr()) arg_arrays.insert(a.as_arr().get());
    }

    OutputRecord rec;
    rec.ret = result;
    std::vector<const Value*> fresh_roots = {&result};
    std::unordered_set<const Array*> restorable = arg_arrays;

    for (size_t g = 0; g < state.globals.size(); ++g) {
      const Value& before = fr.globals[g];
      const Value& now = state.globals[g];
      int32_t gi = static_cast<int32_t>(g);
      const std::string& gname = program_.globals()[g].name;
      if (ShallowSame(before, now)) {
        if (!now.is_arr() || !changed(now.as_arr().get())) continue;
        // Changed in place; restoring the argument covers a shared array.
        if (arg_arrays.count(now.as_arr().get())) continue;
        if (!spec.may_write.count(gi)) {
          *problem = "global " + gname + " modified outside the may-write set";
          return std::nullopt;
        }
        restorable.insert(now.as_arr().get());
        rec.globals.push_back({gname, Value::Arr(now.as_arr()->items), true});
      } else {
        if (!spec.may_write.count(gi)) {
          *problem = "global " + gname + " written outside the may-write set";
          return std::nullopt;
        }
        rec.globals.push_back({gname, now, false});
      }
    }
    for (const auto& w : rec.globals) fresh_roots.push_back(&w.value);

    for (size_t i = 0; i < fr.args.size(); ++i) {
      const Value& a = fr.args[i];
      if (!a.is_arr() || !changed(a.as_arr().get())) continue;
      if (!spec.mutargs.count(static_cast<int32_t>(i))) {
        *problem = "argument " + std::to_string(i) + " mutated outside the mutargs set";
        return std::nullopt;
      }
      rec.args.emplace_back(static_cast<int32_t>(i), Value::Arr(a.as_arr()->items));
    }
    for (const auto& [pos, v] : rec.args) fresh_roots.push_back(&v);

    for (const auto& [array, items] : fr.pre) {
      if (!restorable.count(array) && !ItemsUnchanged(items, array->items)) {
        *problem = "nested input array modified in place";
        return std::nullopt;
      }
    }

    // Outputs must be self-contained trees of arrays created by the call,
    // except the top-level containers that are restored in place.
    std::unordered_set<const Array*> seen;
    std::function<bool(const Value&)> fresh = [&](const Value& v) {
      if (!v.is_arr()) return true;
      const Array* a = v.as_arr().get();
      if (fr.pre.count(a) || !seen.insert(a).second) return false;
      for (const Value& item : a->items) {
        if (!fresh(item)) return false;
      }
      return true;
    };
    for (const Value* root : fresh_roots) {
      if (!fresh(*root)) {
        *problem = "outputs share arrays with the inputs or with each other";
        return std::nullopt;
      }
    }

    rec.ret = DeepCopy(rec.ret);
    for (auto& w : rec.globals) w.value = DeepCopy(w.value);
    for (auto& [pos, v] : rec.args) v = DeepCopy(v);
    std::sort(rec.globals.begin(), rec.globals.end(),
              [](const auto& a, const auto& b) { return a.name < b.name; });
    rec.output_steps = state.steps - fr.entry_steps;
    rec.depth = static_cast<int32_t>(fr.max_rel);
    return rec;
  }

  const Program& program_;
  const std::vector<MemoSpec>& specs_;
  const std::vector<bool>& candidate_;
  MemoDB& db_;
  std::string test_;
  std::vector<Frame> frames_;
};

}  // namespace

void EncodeValue(const Value& v, std::string& out) {
  switch (v.type()) {
    case ValueType::kArr:
      PutU8(out, static_cast<uint8_t>(EncodingTag::kArr));
      PutU32(out, static_cast<uint32_t>(v.as_arr()->items.size()));
      for (const Value& item : v.as_arr()->items) EncodeValue(item, out);
      return;
    default: {
      std::unordered_set<const Array*> unused;
      EncodeUnique(v, out, unused);
      return;
    }
  }
}

std::string EncodeValue(const Value& v) {
  std::string out;
  EncodeValue(v, out);
  return out;
}

Value DecodeValue(std::string_view bytes, size_t* pos) {
  Reader r(bytes.substr(*pos), *pos);
  Value v = ReadValue(r, 0);
  *pos += r.pos();
  return v;
}

Value DecodeValue(std::string_view bytes) {
  size_t pos = 0;
  Value v = DecodeValue(bytes, &pos);
  if (pos != bytes.size()) throw Error::CorruptDb(pos, "trailing bytes after value");
  return v;
}

std::vector<MemoSpec> BuildMemoSpecs(const Program& program, const SideEffectSummary& effects) {
  std::vector<MemoSpec> specs(program.num_functions());
  for (size_t f = 0; f < program.num_functions(); ++f) {
    const FunctionEffects& e = effects.at(program.function(static_cast<FunctionId>(f)).name);
    MemoSpec& s = specs[f];
    for (const std::string& g : e.reads) s.key_globals.push_back(*program.FindGlobal(g));
    for (const std::string& g : e.writes) s.may_write.insert(*program.FindGlobal(g));
    s.mutargs = e.mutargs;
  }
  return specs;
}

std::optional<std::string> BuildKey(std::span<const Value> args, const MemoSpec& spec,
                                    const std::vector<Value>& globals) {
  std::string out;
  std::unordered_set<const Array*> seen;
  for (const Value& a : args) {
    if (!EncodeUnique(a, out, seen)) return std::nullopt;
  }
  for (int32_t g : spec.key_globals) {
    if (!EncodeUnique(globals[static_cast<size_t>(g)], out, seen)) return std::nullopt;
  }
  return out;
}

std::string OutputRecord::Encode() const {
  std::string out;
  EncodeValue(ret, out);
  PutU32(out, static_cast<uint32_t>(globals.size()));
  for (const auto& w : globals) {
    PutBytes(out, w.name);
    PutU8(out, w.in_place ? 1 : 0);
    EncodeValue(w.value, out);
  }
  PutU32(out, static_cast<uint32_t>(args.size()));
  for (const auto& [pos, v] : args) {
    PutU32(out, static_cast<uint32_t>(pos));
    EncodeValue(v, out);
  }
  PutU64(out, static_cast<uint64_t>(output_steps));
  PutU32(out, static_cast<uint32_t>(depth));
  return out;
}

OutputRecord OutputRecord::Decode(std::string_view bytes) {
  Reader r(bytes);
  OutputRecord rec;
  rec.ret = ReadValue(r, 0);
  uint32_t ng = r.U32();
  for (uint32_t i = 0; i < ng; ++i) {
    GlobalWrite w;
    w.name = std::string(r.Bytes());
    uint8_t flag = r.U8();
    if (flag > 1) r.Fail("bad in-place flag");
    w.in_place = flag == 1;
    w.value = ReadValue(r, 0);
    rec.globals.push_back(std::move(w));
  }
  uint32_t na = r.U32();
  for (uint32_t i = 0; i < na; ++i) {
    int32_t pos = static_cast<int32_t>(r.U32());
    rec.args.emplace_back(pos, ReadValue(r, 0));
  }
  rec.output_steps = static_cast<int64_t>(r.U64());
  rec.depth = static_cast<int32_t>(r.U32());
  if (!r.done()) r.Fail("trailing bytes in output record");
  return rec;
}

std::string_view ExclusionReasonName(ExclusionReason reason) {
  switch (reason) {
    case ExclusionReason::kNewTestFailure:
      return "NewTestFailure";
    case ExclusionReason::kCacheMissOnCoveringTest:
      return "CacheMissOnCoveringTest";
    case ExclusionReason::kConflicted:
      return "Conflicted";
    case ExclusionReason::kStateRestoreUnsupported:
      return "StateRestoreUnsupported";
  }
  return "?";
}

std::string Exclusion::ToString() const {
  std::string s(ExclusionReasonName(reason));
  if (reason == ExclusionReason::kNewTestFailure) s += "(" + detail + ")";
  return s;
}

int64_t TestStepLimit(const Profile& profile, const std::string& test, int64_t factor) {
  auto it = profile.tests.find(test);
  int64_t base = it == profile.tests.end() ? 0 : it->second.outcome.steps;
  return base * factor + 1000;
}

MemoDB RecordTables(const Program& program, const Analysis& analysis,
                    const std::vector<Candidate>& candidates, const Profile& profile,
                    const ExpensivenessCriterion& crit, const MemoOptions& options) {
  MemoDB db;
  db.fingerprint = profile.fingerprint;
  db.criterion = crit;
  std::vector<MemoSpec> specs = BuildMemoSpecs(program, analysis.effects);
  std::vector<bool> is_candidate(program.num_functions(), false);
  std::set<std::string> tests;
  for (const Candidate& c : candidates) {
    is_candidate[static_cast<size_t>(*program.FindFunction(c.fn))] = true;
    tests.insert(c.covering_tests.begin(), c.covering_tests.end());
    db.tables[c.fn].fn = c.fn;
  }
  Recorder recorder(program, specs, is_candidate, db);
  // One run per covering test records every candidate it enters; recording
  // never changes execution, so this equals one run per (candidate, test).
  for (const std::string& test : tests) {
    recorder.BeginTest(test);
    ExecOptions exec = options.exec;
    exec.stream = "record/" + test;
    exec.step_limit = TestStepLimit(profile, test, options.step_limit_factor);
    RunTest(program, test, &recorder, exec);
  }
  return db;
}

MemoInterceptor::MemoInterceptor(const Program& program, const MemoDB& db,
                                 const std::vector<MemoSpec>& specs)
    : program_(program),
      specs_(specs),
      tables_(program.num_functions()),
      gated_(program.num_functions(), false),
      hits_(program.num_functions(), 0),
      misses_(program.num_functions(), 0),
      gated_count_(program.num_functions(), 0) {
  for (const auto& [name, table] : db.tables) {
    auto fn = program.FindFunction(name);
    if (!fn) continue;
    auto t = std::make_shared<Table>();
    for (const auto& [key, bytes] : table.entries) {
      t->entries.emplace(key, OutputRecord::Decode(bytes));
    }
    tables_[static_cast<size_t>(*fn)] = std::move(t);
  }
}

void MemoInterceptor::ResetCounters() {
  std::fill(hits_.begin(), hits_.end(), 0);
  std::fill(misses_.begin(), misses_.end(), 0);
  std::fill(gated_count_.begin(), gated_count_.end(), 0);
  decisions_.clear();
}

std::optional<Substitution> MemoInterceptor::OnCallEnter(FunctionId fn, std::span<const Value> args,
                                                         const ExecState& state) {
  size_t f = static_cast<size_t>(fn);
  const Table* table = tables_[f].get();
  if (!table || (only_ && *only_ != fn)) return std::nullopt;
  if (gated_[f]) {
    ++gated_count_[f];
    if (log_) decisions_.push_back({fn, Event::kGated});
    return std::nullopt;
  }
  auto key = BuildKey(args, specs_[f], state.globals);
  auto it = key ? table->entries.find(*key) : table->entries.end();
  if (it == table->entries.end()) {
    ++misses_[f];
    if (log_) decisions_.push_back({fn, Event::kMiss});
    return std::nullopt;
  }
  ++hits_[f];
  if (log_) decisions_.push_back({fn, Event::kHit});
  const OutputRecord& rec = it->second;
  Substitution sub;
  sub.return_value = DeepCopy(rec.ret);
  for (const auto& w : rec.globals) {
    sub.patch.globals.push_back({*program_.FindGlobal(w.name), DeepCopy(w.value), w.in_place});
  }
  for (const auto& [pos, v] : rec.args) sub.patch.args.emplace_back(pos, DeepCopy(v));
  sub.charged_steps = 1;
  sub.budget_steps = std::max<int64_t>(0, rec.output_steps - 1);
  sub.depth_needed = rec.depth;
  return sub;
}

MemoDB ProvisionalMemoization(const Program& program, const Analysis& analysis, MemoDB raw,
                              const Profile& profile, const MemoOptions& options,
                              ProvisionalStats* stats) {
  if (raw.fingerprint != profile.fingerprint) {
    throw Error(ErrorCode::kFingerprintMismatch,
                "memo tables were recorded from a different program");
  }
  std::vector<MemoSpec> specs = BuildMemoSpecs(program, analysis.effects);
  MemoInterceptor interceptor(program, raw, specs);
  std::vector<std::string> names;
  for (const auto& [name, table] : raw.tables) names.push_back(name);
  for (const std::string& name : names) {
    FunctionId fn = *program.FindFunction(name);
    interceptor.EnableOnly(fn);
    interceptor.ResetCounters();
    std::optional<Exclusion> excluded;
    for (const std::string& test : profile.CoveringPassingTests(name)) {
      ExecOptions exec = options.exec;
      exec.stream = "provisional/" + test;
      exec.step_limit = TestStepLimit(profile, test, options.step_limit_factor);
      TestRun run = RunTest(program, test, &interceptor, exec);
      if (!run.outcome.passed()) {
        excluded = Exclusion{ExclusionReason::kNewTestFailure, test};
        break;
      }
    }
    int64_t misses = interceptor.misses()[static_cast<size_t>(fn)];
    if (stats) {
      stats->hits[name] = interceptor.hits()[static_cast<size_t>(fn)];
      stats->misses[name] = misses;
    }
    if (!excluded && misses > options.miss_tolerance) {
      excluded = Exclusion{ExclusionReason::kCacheMissOnCoveringTest,
                           std::to_string(misses) + " miss(es)"};
    }
    if (excluded) {
      raw.exclusions[name] = *excluded;
      raw.tables.erase(name);
    }
  }
  return raw;
}

// File layout (integers big-endian):
//   "MEMU" u16 schema | u64 fingerprint
//   criterion: u64 tau_ns, u8 limit_is_percent, u64 limit (IEEE bits), u8 mode
//   u32 table count, then per table:
//     [u32 len, name][u32 n, n x (u32 len, test)][u32 entries,
//      entries x (u32 len, key, u32 len, record)] u64 FNV-1a of the bracketed body
//   u32 exclusion count, per exclusion: u32 len, name, u8 reason, u32 len, detail
//   u64 FNV-1a of everything before it
std::string SerializeDb(const MemoDB& db) {
  std::string out = "MEMU";
  PutU16(out, db.schema_version);
  PutU64(out, db.fingerprint);
  PutU64(out, static_cast<uint64_t>(db.criterion.tau_ns));
  PutU8(out, db.criterion.limit_is_percent ? 1 : 0);
  PutU64(out, std::bit_cast<uint64_t>(db.criterion.limit));
  PutU8(out, static_cast<uint8_t>(db.criterion.tau_mode));
  PutU32(out, static_cast<uint32_t>(db.tables.size()));
  for (const auto& [name, table] : db.tables) {
    std::string body;
    PutBytes(body, name);
    PutU32(body, static_cast<uint32_t>(table.recorded_from.size()));
    for (const std::string& t : table.recorded_from) PutBytes(body, t);
    std::vector<const std::pair<const std::string, std::string>*> entries;
    for (const auto& e : table.entries) entries.push_back(&e);
    std::sort(entries.begin(), entries.end(),
              [](const auto* a, const auto* b) { return a->first < b->first; });
    PutU32(body, static_cast<uint32_t>(entries.size()));
    for (const auto* e : entries) {
      PutBytes(body, e->first);
      PutBytes(body, e->second);
    }
    out += body;
    PutU64(out, Fnv1a64(body));
  }
  PutU32(out, static_cast<uint32_t>(db.exclusions.size()));
  for (const auto& [name, ex] : db.exclusions) {
    PutBytes(out, name);
    PutU8(out, static_cast<uint8_t>(ex.reason));
    PutBytes(out, ex.detail);
  }
  PutU64(out, Fnv1a64(out));
  return out;
}

namespace {

MemoDB ParseDb(std::string_view bytes) {
  Reader r(bytes);
  MemoDB db;
  if (r.Raw(4) != "MEMU") throw Error::CorruptDb(0, "bad magic");
  db.schema_version = r.U16();
  db.fingerprint = r.U64();
  db.criterion.tau_ns = static_cast<int64_t>(r.U64());
  uint8_t pct = r.U8();
  if (pct > 1) r.Fail("bad limit flag");
  db.criterion.limit_is_percent = pct == 1;
  db.criterion.limit = std::bit_cast<double>(r.U64());
  uint8_t mode = r.U8();
  if (mode > 1) r.Fail("bad tau mode");
  db.criterion.tau_mode = static_cast<TauMode>(mode);
  uint32_t tables = r.U32();
  for (uint32_t t = 0; t < tables; ++t) {
    size_t start = r.pos();
    size_t start_offset = r.offset();
    MemoTable table;
    table.fn = std::string(r.Bytes());
    uint32_t nt = r.U32();
    for (uint32_t i = 0; i < nt; ++i) table.recorded_from.insert(std::string(r.Bytes()));
    uint32_t ne = r.U32();
    for (uint32_t i = 0; i < ne; ++i) {
      std::string key(r.Bytes());
      std::string rec(r.Bytes());
      table.entries.emplace(std::move(key), std::move(rec));
    }
    std::string_view body = bytes.substr(start, r.pos() - start);
    if (r.U64() != Fnv1a64(body)) {
      throw Error::CorruptDb(start_offset, "checksum mismatch in table '" + table.fn + "'");
    }
    // Validate the stored values now so corruption surfaces at load time.
    for (const auto& [key, rec] : table.entries) {
      size_t pos = 0;
      while (pos < key.size()) DecodeValue(key, &pos);
      OutputRecord::Decode(rec);
    }
    db.tables[table.fn] = std::move(table);
  }
  uint32_t nx = r.U32();
  for (uint32_t i = 0; i < nx; ++i) {
    std::string name(r.Bytes());
    uint8_t reason = r.U8();
    if (reason > static_cast<uint8_t>(ExclusionReason::kStateRestoreUnsupported)) {
      r.Fail("bad exclusion reason");
    }
    db.exclusions[name] = {static_cast<ExclusionReason>(reason), std::string(r.Bytes())};
  }
  if (r.remaining() != 8) r.Fail("unexpected trailing data");
  return db;
}

}  // namespace

MemoDB DeserializeDb(std::string_view bytes, const Program* program) {
  if (bytes.size() < 4 + 2 + 8 + 8) throw Error::CorruptDb(bytes.size(), "file too short");
  std::string_view body = bytes.substr(0, bytes.size() - 8);
  Reader trailer(bytes.substr(bytes.size() - 8), bytes.size() - 8);
  if (trailer.U64() != Fnv1a64(body)) {
    // Localize the damage if a table checksum or the structure catches it.
    ParseDb(bytes);
    throw Error::CorruptDb(0, "file checksum mismatch");
  }
  if (body.substr(0, 4) != "MEMU") throw Error::CorruptDb(0, "bad magic");
  uint16_t version =
      static_cast<uint16_t>((static_cast<uint8_t>(body[4]) << 8) | static_cast<uint8_t>(body[5]));
  if (version != kDbSchemaVersion) {
    throw Error(ErrorCode::kSchemaVersionMismatch, "memo database schema " +
                                                       std::to_string(version) + ", expected " +
                                                       std::to_string(kDbSchemaVersion));
  }
  MemoDB db = ParseDb(bytes);
  if (program) {
    uint64_t fp = Fingerprint(*program);
    if (fp != db.fingerprint) {
      throw Error(ErrorCode::kFingerprintMismatch, "memo database was built for program " +
                                                       Hex64(db.fingerprint) +
                                                       ", this program is " + Hex64(fp));
    }
    for (const auto& [name, table] : db.tables) {
      if (!program->FindFunction(name)) {
        throw Error(ErrorCode::kFingerprintMismatch, "unknown function " + name);
      }
    }
  }
  return db;
}

void SaveDb(const MemoDB& db, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  std::string bytes = SerializeDb(db);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
}

MemoDB LoadDb(const std::filesystem::path& path, const Program& program) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return DeserializeDb(ss.str(), &program);
}

std::string DbToJson(const MemoDB& db) {
  using nlohmann::json;
  json doc;
  doc["schema_version"] = db.schema_version;
  doc["fingerprint"] = Hex64(db.fingerprint);
  doc["criterion"] = {{"tau_ns", db.criterion.tau_ns},
                      {"limit", db.criterion.limit},
                      {"limit_is_percent", db.criterion.limit_is_percent},
                      {"tau_mode", TauModeName(db.criterion.tau_mode)}};
  json tables = json::object();
  for (const auto& [name, table] : db.tables) {
    std::vector<std::pair<std::string, std::string>> sorted(table.entries.begin(),
                                                            table.entries.end());
    std::sort(sorted.begin(), sorted.end());
    json entries = json::array();
    for (const auto& [key, bytes] : sorted) {
      json inputs = json::array();
      size_t pos = 0;
      while (pos < key.size()) inputs.push_back(Repr(DecodeValue(key, &pos)));
      OutputRecord rec = OutputRecord::Decode(bytes);
      json globals = json::object();
      for (const auto& w : rec.globals) {
        globals[w.name] = {{"value", Repr(w.value)}, {"in_place", w.in_place}};
      }
      json args = json::object();
      for (const auto& [pos2, v] : rec.args) args[std::to_string(pos2)] = Repr(v);
      entries.push_back({{"key_hash", Hex64(Fnv1a64(key))},
                         {"inputs", std::move(inputs)},
                         {"return", Repr(rec.ret)},
                         {"globals", std::move(globals)},
                         {"post_args", std::move(args)},
                         {"output_steps", rec.output_steps},
                         {"depth", rec.depth}});
    }
    tables[name] = {{"recorded_from", table.recorded_from}, {"entries", std::move(entries)}};
  }
  doc["tables"] = std::move(tables);
  json ex = json::object();
  for (const auto& [name, e] : db.exclusions) {
    ex[name] = {{"reason", ExclusionReasonName(e.reason)}, {"detail", e.detail}};
  }
  doc["exclusions"] = std::move(ex);
  return doc.dump(2) + "\n";
}

}  // namespace memomut
