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

#ifndef MEMOMUT_PARSER_H_
#define MEMOMUT_PARSER_H_

#include <filesystem>
#include <string>
#include <string_view>

#include "memomut/ast.h"

namespace memomut {

// Parses and resolves Mini source. Throws Error (kSyntax or kResolution).
//
//   program  := (global | function)*
//   global   := 'let' IDENT '=' literal ';'
//   function := 'fn' IDENT '(' [IDENT (',' IDENT)*] ')' block
//   stmt     := 'let' IDENT '=' expr ';' | lvalue '=' expr ';'
//             | 'if' '(' expr ')' block ['else' (block | if)]
//             | 'while' '(' expr ')' block | 'return' [expr] ';'
//             | 'assert' '(' expr ')' ';' | expr ';'
Program Parse(std::string_view source);

// Concatenation of every `.mini` file in `dir`, in lexicographic filename
// order.
std::string ReadProjectSource(const std::filesystem::path& dir);

// Parses a project directory; syntax errors name the file and line.
Program LoadProject(const std::filesystem::path& dir);

}  // namespace memomut

#endif  // MEMOMUT_PARSER_H_
