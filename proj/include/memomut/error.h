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

#ifndef MEMOMUT_ERROR_H_
#define MEMOMUT_ERROR_H_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace memomut {

enum class ErrorCode {
  kSyntax,
  kResolution,
  kIo,
  kUsage,
  kInvalidArgument,
  kSuiteEmpty,
  kFingerprintMismatch,
  kSchemaVersionMismatch,
  kCorruptDb,
  kStaleMutant,
  kInvalidPool,
  kEmptyPool,
  kScoreMismatch,
};

std::string_view ErrorCodeName(ErrorCode code);

// The one exception type thrown by the library. `line`/`column` are set for
// syntax errors, `offset` for corrupt memo databases; `subject` carries the
// offending name (unresolved identifier, stale function, ...).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  static Error Syntax(int line, int column, const std::string& message);
  static Error Resolution(const std::string& name, int line = 0);
  static Error CorruptDb(uint64_t offset, const std::string& message);

  ErrorCode code() const { return code_; }
  int line() const { return line_; }
  int column() const { return column_; }
  uint64_t offset() const { return offset_; }
  const std::string& subject() const { return subject_; }

 private:
  ErrorCode code_;
  int line_ = 0;
  int column_ = 0;
  uint64_t offset_ = 0;
  std::string subject_;
};

}  // namespace memomut

#endif  // MEMOMUT_ERROR_H_
