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

#include "app/service_config.hpp"

#include <charconv>
#include <cstdlib>

#include "common/error.hpp"
#include "common/records.hpp"

namespace lacuna::app {

ServiceConfig ServiceConfig::from_key_values(const KeyValues& values) {
  ServiceConfig c;
  c.apply(values);
  return c;
}

void ServiceConfig::apply(const KeyValues& values) {
  checkpoint = values.get("checkpoint", checkpoint);
  vocabulary = values.get("vocabulary", vocabulary);
  corpus = values.get("corpus", corpus);
  instances = values.get("instances", instances);
  labels = values.get("labels", labels);
  host = values.get("host", host);
  port = values.get("port", port);
  default_k = values.get("default_k", default_k);
  max_tokens_per_sign = values.get("max_tokens_per_sign", max_tokens_per_sign);
  max_concurrent = values.get("max_concurrent", max_concurrent);
  ui_dir = values.get("ui_dir", ui_dir);
  if (values.contains("address")) set_address(values.get<std::string>("address", ""));
  const auto unused = values.unused_keys();
  if (!unused.empty()) fail(ErrorCode::kInvalidArgument, "unknown config key " + unused.front());
}

ServiceConfig ServiceConfig::from_file(const std::string& path) {
  return from_key_values(KeyValues::parse(records::read_file(path)));
}

void ServiceConfig::set_address(std::string_view address) {
  std::string_view port_text = address;
  if (const std::size_t colon = address.rfind(':'); colon != std::string_view::npos) {
    if (colon > 0) host = std::string(address.substr(0, colon));
    port_text = address.substr(colon + 1);
  }
  int value = 0;
  const auto [ptr, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), value);
  if (ec != std::errc() || ptr != port_text.data() + port_text.size() || value < 0 || value > 65535) {
    fail(ErrorCode::kInvalidArgument, "bad listen address " + std::string(address));
  }
  port = value;
}

void ServiceConfig::apply_environment(const std::function<const char*(const char*)>& getenv) {
  if (const char* v = getenv("LACUNA_CHECKPOINT"); v && *v) checkpoint = v;
  if (const char* v = getenv("LACUNA_VOCAB"); v && *v) vocabulary = v;
  if (const char* v = getenv("LACUNA_CORPUS"); v && *v) corpus = v;
  if (const char* v = getenv("LACUNA_ADDR"); v && *v) set_address(v);
}

void ServiceConfig::apply_environment() {
  apply_environment([](const char* name) { return std::getenv(name); });
}

void ServiceConfig::validate() const {
  if (checkpoint.empty()) fail(ErrorCode::kInvalidArgument, "checkpoint path is required");
  if (vocabulary.empty()) fail(ErrorCode::kInvalidArgument, "vocabulary path is required");
  if (labels.empty()) fail(ErrorCode::kInvalidArgument, "labels path is required");
  if (default_k < 1 || max_tokens_per_sign < 1 || max_concurrent < 1) {
    fail(ErrorCode::kInvalidArgument, "default_k, max_tokens_per_sign and max_concurrent must be positive");
  }
}

}  // namespace lacuna::app
