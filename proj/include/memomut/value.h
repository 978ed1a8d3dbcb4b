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

// Runtime values of the Mini language.

#ifndef MEMOMUT_VALUE_H_
#define MEMOMUT_VALUE_H_

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace memomut {

// Order matches the variant alternatives in Value.
enum class ValueType : uint8_t { kUnit, kInt, kBool, kStr, kArr, kFnRef };

std::string_view ValueTypeName(ValueType type);

class Value;

// Arrays are mutable and shared by reference. The interpreter keeps array
// graphs acyclic.
struct Array {
  std::vector<Value> items;
};
using ArrayRef = std::shared_ptr<Array>;

struct FnRef {
  std::string name;
  bool operator==(const FnRef&) const = default;
};

class Value {
 public:
  Value() = default;

  static Value Int(int64_t v) { return Value(Storage(std::in_place_index<1>, v)); }
  static Value Bool(bool v) { return Value(Storage(std::in_place_index<2>, v)); }
  static Value Str(std::string v) { return Value(Storage(std::in_place_index<3>, std::move(v))); }
  static Value Arr(ArrayRef v) { return Value(Storage(std::in_place_index<4>, std::move(v))); }
  static Value Arr(std::vector<Value> items);
  static Value Fn(std::string name) {
    return Value(Storage(std::in_place_index<5>, FnRef{std::move(name)}));
  }
  // The value RVM mutants return for a given static type.
  static Value DefaultOf(ValueType type);

  ValueType type() const { return static_cast<ValueType>(storage_.index()); }
  bool is_unit() const { return type() == ValueType::kUnit; }
  bool is_int() const { return type() == ValueType::kInt; }
  bool is_bool() const { return type() == ValueType::kBool; }
  bool is_str() const { return type() == ValueType::kStr; }
  bool is_arr() const { return type() == ValueType::kArr; }
  bool is_fn() const { return type() == ValueType::kFnRef; }

  int64_t as_int() const { return std::get<1>(storage_); }
  bool as_bool() const { return std::get<2>(storage_); }
  const std::string& as_str() const { return std::get<3>(storage_); }
  const ArrayRef& as_arr() const { return std::get<4>(storage_); }
  const std::string& as_fn() const { return std::get<5>(storage_).name; }

 private:
  using Storage = std::variant<std::monostate, int64_t, bool, std::string, ArrayRef, FnRef>;
  explicit Value(Storage s) : storage_(std::move(s)) {}

  Storage storage_;
};

// Structurally equal copy sharing no Array with `v`.
Value DeepCopy(const Value& v);

// Structural equality; arrays compare element-wise.
bool DeepEqual(const Value& a, const Value& b);

// True if `target` is reachable from `v` (including `v` itself).
bool Reaches(const Value& v, const Array* target);

// Human-readable rendering; strings are quoted when `quote_strings`.
std::string Repr(const Value& v, bool quote_strings = true);

// Rendering used by the `print` builtin: top-level strings are unquoted.
inline std::string PrintForm(const Value& v) { return Repr(v, false); }

}  // namespace memomut

#endif  // MEMOMUT_VALUE_H_
