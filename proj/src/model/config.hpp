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

#ifndef LACUNA_MODEL_CONFIG_HPP_
#define LACUNA_MODEL_CONFIG_HPP_

#include <cstddef>
#include <string>

#include "common/keyvalue.hpp"

namespace lacuna::model {

// Encoder dimensions. The defaults are the ~750K-parameter configuration:
// 4,000 tokens, width 96, 3 layers of 4 heads, FFN width 384, 128 positions,
// output head tied to the token embedding.
struct ModelConfig {
  int vocab_size = 4000;
  int max_seq_len = 128;
  int d_model = 96;
  int n_layers = 3;
  int n_heads = 4;
  int d_ff = 384;
  double dropout = 0.1;
  // When positive, the parameter count must land within ±10% of it.
  long long param_budget = 0;

  static ModelConfig standard() {
    ModelConfig config;
    config.param_budget = 750000;
    return config;
  }

  // Throws Error(kInvalidArgument) on non-positive dims, d_model not
  // divisible by n_heads or dropout outside [0, 1), and
  // Error(kBudgetInfeasible) when the budget tolerance is missed.
  void validate() const;

  // Closed form of the parameter count for these dimensions.
  std::size_t parameter_count() const;

  std::string to_text() const;
  static ModelConfig from_key_values(const KeyValues& values, ModelConfig base);
  static ModelConfig from_key_values(const KeyValues& values);
  static ModelConfig from_text(std::string_view text) {
    return from_key_values(KeyValues::parse(text));
  }

  bool operator==(const ModelConfig&) const = default;
};

}  // namespace lacuna::model

#endif  // LACUNA_MODEL_CONFIG_HPP_
