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

#ifndef LACUNA_APP_SERVICE_CONFIG_HPP_
#define LACUNA_APP_SERVICE_CONFIG_HPP_

#include <functional>
#include <string>
#include <string_view>

#include "common/keyvalue.hpp"

namespace lacuna::app {

struct ServiceConfig {
  std::string checkpoint;
  std::string vocabulary;
  std::string corpus;     // documents to browse and draw distractors from
  std::string instances;  // annotation instances, blind file (optional)
  std::string labels = "labels.jsonl";
  std::string host = "127.0.0.1";
  int port = 8080;
  int default_k = 5;
  int max_tokens_per_sign = 6;
  int max_concurrent = 4;
  std::string ui_dir;  // static assets mounted under /ui when set

  // Keys are the field names. Throws Error(kInvalidArgument) on unknown
  // keys or bad values.
  static ServiceConfig from_key_values(const KeyValues& values);
  static ServiceConfig from_file(const std::string& path);

  // Overwrites the fields named in `values`.
  void apply(const KeyValues& values);

  // LACUNA_CHECKPOINT, LACUNA_VOCAB, LACUNA_CORPUS and LACUNA_ADDR
  // (host:port or port) replace the corresponding fields.
  void apply_environment(const std::function<const char*(const char*)>& getenv);
  void apply_environment();

  void set_address(std::string_view address);

  // Throws Error(kInvalidArgument) when a required path is missing or a
  // number is out of range.
  void validate() const;
};

}  // namespace lacuna::app

#endif  // LACUNA_APP_SERVICE_CONFIG_HPP_
