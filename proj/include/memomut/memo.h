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

// Memo tables: canonical value encoding, recording of entry/exit snapshots,
// provisional filtering, the look-up interceptor and the on-disk database.

#ifndef MEMOMUT_MEMO_H_
#define MEMOMUT_MEMO_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "memomut/analysis.h"
#include "memomut/ast.h"
#include "memomut/hash.h"
#include "memomut/interpreter.h"
#include "memomut/profiler.h"
#include "memomut/value.h"

namespace memomut {

inline constexpr uint16_t kDbSchemaVersion = 1;

// Tag bytes of the canonical encoding.
enum class EncodingTag : uint8_t {
  kInt = 0x01,
  kBool = 0x02,
  kStr = 0x03,
  kArr = 0x04,
  kFnRef = 0x05,
  kUnit = 0x06,
};

void EncodeValue(const Value& v, std::string& out);
std::string EncodeValue(const Value& v);
// Decodes one value starting at `*pos` and advances it. Throws
// Error(kCorruptDb) on malformed input.
Value DecodeValue(std::string_view bytes, size_t* pos);
// Decodes exactly one value spanning all of `bytes`.
Value DecodeValue(std::string_view bytes);

// Which globals a function's key covers and which state it may change.
struct MemoSpec {
  std::vector<int32_t> key_globals;  // may-read, in name order
  std::set<int32_t> may_write;
  std::set<int32_t> mutargs;
};

std::vector<MemoSpec> BuildMemoSpecs(const Program& program, const SideEffectSummary& effects);

// Canonical key bytes: arguments in order, then key globals. Empty when an
// array is reachable twice from the inputs (sharing cannot be keyed).
std::optional<std::string> BuildKey(std::span<const Value> args, const MemoSpec& spec,
                                    const std::vector<Value>& globals);

struct OutputRecord {
  struct GlobalWrite {
    std::string name;
    Value value;
    bool in_place = false;
  };
  Value ret;
  std::vector<GlobalWrite> globals;             // sorted by name
  std::vector<std::pair<int32_t, Value>> args;  // sorted by position
  int64_t output_steps = 0;
  int32_t depth = 0;  // deepest call-stack growth inside the call

  std::string Encode() const;
  static OutputRecord Decode(std::string_view bytes);
};

struct MemoTable {
  std::string fn;
  // Key bytes -> encoded OutputRecord.
  std::unordered_map<std::string, std::string, Fnv1aHasher> entries;
  std::set<std::string> recorded_from;

  bool operator==(const MemoTable&) const = default;
};

enum class ExclusionReason : uint8_t {
  kNewTestFailure,
  kCacheMissOnCoveringTest,
  kConflicted,
  kStateRestoreUnsupported,
};
std::string_view ExclusionReasonName(ExclusionReason reason);

struct Exclusion {
  ExclusionReason reason;
  std::string detail;  // failing test, miss count, ...

  std::string ToString() const;
  bool operator==(const Exclusion&) const = default;
};

struct MemoDB {
  uint16_t schema_version = kDbSchemaVersion;
  uint64_t fingerprint = 0;
  ExpensivenessCriterion criterion;
  std::map<std::string, MemoTable> tables;
  std::map<std::string, Exclusion> exclusions;

  bool operator==(const MemoDB&) const = default;
};

struct MemoOptions {
  ExecOptions exec;
  // Step limit for memo runs: baseline steps * factor + 1000.
  int64_t step_limit_factor = 10;
  int64_t miss_tolerance = 0;
};

// Step limit for re-running `test` given its baseline profile.
int64_t TestStepLimit(const Profile& profile, const std::string& test, int64_t factor);

// Records every dynamic entry/exit of each candidate while running the
// candidates' covering passing tests on the unmutated program.
MemoDB RecordTables(const Program& program, const Analysis& analysis,
                    const std::vector<Candidate>& candidates, const Profile& profile,
                    const ExpensivenessCriterion& crit, const MemoOptions& options);

struct ProvisionalStats {
  std::map<std::string, int64_t> hits;
  std::map<std::string, int64_t> misses;
};

// Re-runs each table's covering tests with look-up enabled for that function
// alone and drops tables that fail a test or miss.
MemoDB ProvisionalMemoization(const Program& program, const Analysis& analysis, MemoDB raw,
                              const Profile& profile, const MemoOptions& options,
                              ProvisionalStats* stats = nullptr);

// Look-up hook shared by provisional filtering and mutant runs.
class MemoInterceptor : public InstrumentationHooks {
 public:
  enum class Event : uint8_t { kHit, kMiss, kGated };
  struct Decision {
    FunctionId fn;
    Event event;
  };

  MemoInterceptor(const Program& program, const MemoDB& db, const std::vector<MemoSpec>& specs);

  unsigned interests() const override { return kCalls; }
  std::optional<Substitution> OnCallEnter(FunctionId fn, std::span<const Value> args,
                                          const ExecState& state) override;

  // Functions that must run their body (gated) regardless of the table.
  void SetGated(std::vector<bool> gated) { gated_ = std::move(gated); }
  // Restricts look-up to one function (all others execute normally and are
  // not counted).
  void EnableOnly(std::optional<FunctionId> fn) { only_ = fn; }
  void set_log_decisions(bool on) { log_ = on; }

  const std::vector<int64_t>& hits() const { return hits_; }
  const std::vector<int64_t>& misses() const { return misses_; }
  const std::vector<int64_t>& gated() const { return gated_count_; }
  const std::vector<Decision>& decisions() const { return decisions_; }
  void ResetCounters();

  bool memoized(FunctionId fn) const { return tables_[static_cast<size_t>(fn)] != nullptr; }

 private:
  struct Table {
    std::unordered_map<std::string, OutputRecord, Fnv1aHasher> entries;
  };

  const Program& program_;
  const std::vector<MemoSpec>& specs_;
  std::vector<std::shared_ptr<const Table>> tables_;
  std::vector<bool> gated_;
  std::optional<FunctionId> only_;
  bool log_ = false;
  std::vector<int64_t> hits_, misses_, gated_count_;
  std::vector<Decision> decisions_;
};

// Binary database; see the DB format notes in memo.cc.
std::string SerializeDb(const MemoDB& db);
// When `program` is given, its fingerprint must match.
MemoDB DeserializeDb(std::string_view bytes, const Program* program);
void SaveDb(const MemoDB& db, const std::filesystem::path& path);
MemoDB LoadDb(const std::filesystem::path& path, const Program& program);

std::string DbToJson(const MemoDB& db);

}  // namespace memomut

#endif  // MEMOMUT_MEMO_H_
