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

#include "memomut/error.h"

namespace memomut {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSyntax:
      return "SyntaxError";
    case ErrorCode::kResolution:
      return "ResolutionError";
    case ErrorCode::kIo:
      return "IoError";
    case ErrorCode::kUsage:
      return "UsageError";
    case ErrorCode::kInvalidArgument:
      return "InvalidArgument";
    case ErrorCode::kSuiteEmpty:
      return "SuiteEmpty";
    case ErrorCode::kFingerprintMismatch:
      return "FingerprintMismatch";
    case ErrorCode::kSchemaVersionMismatch:
      return "SchemaVersionMismatch";
    case ErrorCode::kCorruptDb:
      return "CorruptDB";
    case ErrorCode::kStaleMutant:
      return "StaleMutant";
    case ErrorCode::kInvalidPool:
      return "InvalidPool";
    case ErrorCode::kEmptyPool:
      return "EmptyPool";
    case ErrorCode::kScoreMismatch:
      return "ScoreMismatch";
  }
  return "Error";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message), code_(code) {}

Error Error::Syntax(int line, int column, const std::string& message) {
  Error e(ErrorCode::kSyntax, std::to_string(line) + ":" + std::to_string(column) + ": " + message);
  e.line_ = line;
  e.column_ = column;
  return e;
}

Error Error::Resolution(const std::string& name, int line) {
  std::string message = "undeclared name '" + name + "'";
  if (line > 0) message += " at line " + std::to_string(line);
  Error e(ErrorCode::kResolution, message);
  e.subject_ = name;
  e.line_ = line;
  return e;
}

Error Error::CorruptDb(uint64_t offset, const std::string& message) {
  Error e(ErrorCode::kCorruptDb, "at offset " + std::to_string(offset) + ": " + message);
  e.offset_ = offset;
  return e;
}

}  // namespace memomut
