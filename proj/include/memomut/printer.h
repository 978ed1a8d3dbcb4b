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

#ifndef MEMOMUT_PRINTER_H_
#define MEMOMUT_PRINTER_H_

#include <cstdint>
#include <string>

#include "memomut/ast.h"

namespace memomut {

// Canonical source text. Parsing the output yields a program whose function
// bodies are node-for-node identical to `program` (mutation marks are
// rendered as the equivalent plain syntax, so that property only holds for
// unmutated programs).
std::string PrintProgram(const Program& program);
std::string PrintFunction(const FunctionDef& fn);

// One statement (without trailing newline) or expression.
std::string PrintNode(const FunctionDef& fn, NodeId id);

// FNV-1a-64 of the canonical text.
uint64_t Fingerprint(const Program& program);

}  // namespace memomut

#endif  // MEMOMUT_PRINTER_H_
