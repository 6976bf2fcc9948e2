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

#ifndef LACUNA_COMMON_RECORDS_HPP_
#define LACUNA_COMMON_RECORDS_HPP_

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

namespace lacuna::records {

using Json = nlohmann::ordered_json;

// Line-delimited JSON. Blank lines are skipped; a malformed line throws
// Error(kCorruptFile) naming the line number.
std::vector<Json> read_lines(const std::string& path);
void for_each_line(const std::string& path, const std::function<void(const Json&)>& visit);
void write_lines(const std::string& path, const std::vector<Json>& rows);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace lacuna::records

#endif  // LACUNA_COMMON_RECORDS_HPP_
