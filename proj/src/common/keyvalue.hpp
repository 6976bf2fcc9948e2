/*
 * Copyright 2026 The Lacuna Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef LACUNA_COMMON_KEYVALUE_HPP_
#define LACUNA_COMMON_KEYVALUE_HPP_

#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "common/error.hpp"

namespace lacuna {

// Flat `key = value` text. '#' starts a comment; blank lines are ignored.
class KeyValues {
 public:
  static KeyValues parse(std::string_view text) {
    KeyValues out;
    std::size_t line_number = 0;
    while (!text.empty()) {
      const std::size_t nl = text.find('\n');
      std::string line(text.substr(0, nl));
      text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
      ++line_number;
      if (const std::size_t hash = line.find('#'); hash != std::string::npos) line.resize(hash);
      const std::string trimmed = trim(line);
      if (trimmed.empty()) continue;
      const std::size_t eq = trimmed.find('=');
      if (eq == std::string::npos) {
        fail(ErrorCode::kInvalidArgument,
             "line " + std::to_string(line_number) + ": expected key = value");
      }
      out.values_[trim(trimmed.substr(0, eq))] = trim(trimmed.substr(eq + 1));
    }
    return out;
  }

  bool contains(const std::string& key) const { return values_.count(key) != 0; }

  void set(const std::string& key, std::string value) { values_[key] = std::move(value); }

  template <typename T>
  T get(const std::string& key, T fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    used_.insert(key);
    if constexpr (std::is_same_v<T, std::string>) {
      return it->second;
    } else if constexpr (std::is_same_v<T, bool>) {
      if (it->second == "true" || it->second == "1") return true;
      if (it->second == "false" || it->second == "0") return false;
      fail(ErrorCode::kInvalidArgument, "bad value for " + key + ": " + it->second);
    } else {
      std::istringstream in(it->second);
      T value{};
      in >> value;
      if (in.fail() || !in.eof()) {
        fail(ErrorCode::kInvalidArgument, "bad value for " + key + ": " + it->second);
      }
      return value;
    }
  }

  std::vector<std::string> unused_keys() const {
    std::vector<std::string> out;
    for (const auto& [key, value] : values_) {
      if (!used_.count(key)) out.push_back(key);
    }
    return out;
  }

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  static std::string trim(const std::string& s) {
    const std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
  }

  std::map<std::string, std::string> values_;
  mutable std::set<std::string> used_;
};

}  // namespace lacuna

#endif  // LACUNA_COMMON_KEYVALUE_HPP_
