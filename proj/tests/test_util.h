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

#ifndef MEMOMUT_TESTS_TEST_UTIL_H_
#define MEMOMUT_TESTS_TEST_UTIL_H_

#include <filesystem>
#include <string>
#include <vector>

#include "memomut/ast.h"

namespace memomut::testing {

std::filesystem::path CorpusDir();
std::filesystem::path CorpusProject(const std::string& name);

// Every project directory under the corpus, sorted by name.
std::vector<std::string> CorpusProjects();

Program LoadCorpus(const std::string& name);

// Fresh empty directory under the system temp dir.
std::filesystem::path MakeTempDir(const std::string& prefix);

}  // namespace memomut::testing

#endif  // MEMOMUT_TESTS_TEST_UTIL_H_
