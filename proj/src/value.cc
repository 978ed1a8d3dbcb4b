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

#include "memomut/value.h"

namespace memomut {

std::string_view ValueTypeName(ValueType type) {
  switch (type) {
    case ValueType::kUnit:
      return "Unit";
    case ValueType::kInt:
      return "Int";
    case ValueType::kBool:
      return "Bool";
    case ValueType::kStr:
      return "Str";
    case ValueType::kArr:
      return "Arr";
    case ValueType::kFnRef:
      return "FnRef";
  }
  return "?";
}

Value Value::Arr(std::vector<Value> items) {
  auto arr = std::make_shared<Array>();
  arr->items = std::move(items);
  return Arr(std::move(arr));
}

Value Value::DefaultOf(ValueType type) {
  switch (type) {
    case ValueType::kInt:
      return Int(0);
    case ValueType::kBool:
      return Bool(false);
    case ValueType::kStr:
      return Str("");
    case ValueType::kArr:
      return Arr(std::vector<Value>{});
    default:
      return Value();
  }
}

Value DeepCopy(const Value& v) {
  if (!v.is_arr()) return v;
  std::vector<Value> items;
  items.reserve(v.as_arr()->items.size());
  for (const Value& item : v.as_arr()->items) items.push_back(DeepCopy(item));
  return Value::Arr(std::move(items));
}

bool DeepEqual(const Value& a, const Value& b) {
  if (a.type() != b.type()) return false;
  switch (a.type()) {
    case ValueType::kUnit:
      return true;
    case ValueType::kInt:
      return a.as_int() == b.as_int();
    case ValueType::kBool:
      return a.as_bool() == b.as_bool();
    case ValueType::kStr:
      return a.as_str() == b.as_str();
    case ValueType::kFnRef:
      return a.as_fn() == b.as_fn();
    case ValueType::kArr: {
      const auto& x = a.as_arr()->items;
      const auto& y = b.as_arr()->items;
      if (a.as_arr() == b.as_arr()) return true;
      if (x.size() != y.size()) return false;
      for (size_t i = 0; i < x.size(); ++i) {
        if (!DeepEqual(x[i], y[i])) return false;
      }
      return true;
    }
  }
  return false;
}

bool Reaches(const Value& v, const Array* target) {
  if (!v.is_arr()) return false;
  if (v.as_arr().get() == target) return true;
  for (const Value& item : v.as_arr()->items) {
    if (Reaches(item, target)) return true;
  }
  return false;
}

namespace {

void AppendQuoted(std::string& out, const std::string& s) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\t':
        out += "\\t";
        break;
      default:
        out += c;
    }
  }
  out += '"';
}

void AppendRepr(std::string& out, const Value& v, bool quote) {
  switch (v.type()) {
    case ValueType::kUnit:
      out += "()";
      break;
    case ValueType::kInt:
      out += std::to_string(v.as_int());
      break;
    case ValueType::kBool:
      out += v.as_bool() ? "true" : "false";
      break;
    case ValueType::kStr:
      if (quote) {
        AppendQuoted(out, v.as_str());
      } else {
        out += v.as_str();
      }
      break;
    case ValueType::kFnRef:
      out += "&" + v.as_fn();
      break;
    case ValueType::kArr: {
      out += '[';
      bool first = true;
      for (const Value& item : v.as_arr()->items) {
        if (!first) out += ", ";
        first = false;
        AppendRepr(out, item, true);
      }
      out += ']';
      break;
    }
  }
}

}  // namespace

std::string Repr(const Value& v, bool quote_strings) {
  std::string out;
  AppendRepr(out, v, quote_strings);
  return out;
}

}  // namespace memomut
