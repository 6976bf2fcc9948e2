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

#include "model/config.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "common/error.hpp"

namespace lacuna::model {

void ModelConfig::validate() const {
  if (vocab_size <= 5 || max_seq_len <= 2 || d_model <= 0 || n_layers <= 0 || n_heads <= 0 ||
      d_ff <= 0) {
    fail(ErrorCode::kInvalidArgument, "model dimensions must be positive");
  }
  if (d_model % n_heads != 0) {
    fail(ErrorCode::kInvalidArgument, "d_model " + std::to_string(d_model) +
                                          " is not divisible by n_heads " +
                                          std::to_string(n_heads));
  }
  if (!(dropout >= 0.0 && dropout < 1.0)) fail(ErrorCode::kInvalidArgument, "dropout must lie in [0, 1)");
  if (param_budget > 0) {
    const double count = static_cast<double>(parameter_count());
    const double budget = static_cast<double>(param_budget);
    if (std::abs(count - budget) > 0.1 * budget) {
      fail(ErrorCode::kBudgetInfeasible, "parameter count " + std::to_string(parameter_count()) +
                                             " is outside ±10% of budget " +
                                             std::to_string(param_budget));
    }
  }
}

std::size_t ModelConfig::parameter_count() const {
  const std::size_t v = static_cast<std::size_t>(vocab_size);
  const std::size_t p = static_cast<std::size_t>(max_seq_len);
  const std::size_t d = static_cast<std::size_t>(d_model);
  const std::size_t f = static_cast<std::size_t>(d_ff);
  const std::size_t embeddings = v * d + p * d + 2 * d;
  const std::size_t attention = 4 * (d * d + d);
  const std::size_t feed_forward = (d * f + f) + (f * d + d);
  const std::size_t norms = 4 * d;
  const std::size_t layer = attention + feed_forward + norms;
  const std::size_t head = (d * d + d) + 2 * d + v;
  return embeddings + static_cast<std::size_t>(n_layers) * layer + head;
}

std::string ModelConfig::to_text() const {
  std::ostringstream out;
  out << "vocab_size=" << vocab_size << '\n'
      << "max_seq_len=" << max_seq_len << '\n'
      << "d_model=" << d_model << '\n'
      << "n_layers=" << n_layers << '\n'
      << "n_heads=" << n_heads << '\n'
      << "d_ff=" << d_ff << '\n';
  char dropout_text[32];
  std::snprintf(dropout_text, sizeof(dropout_text), "%.17g", dropout);
  out << "dropout=" << dropout_text << '\n' << "param_budget=" << param_budget << '\n';
  return out.str();
}

ModelConfig ModelConfig::from_key_values(const KeyValues& values) {
  return from_key_values(values, ModelConfig{});
}

ModelConfig ModelConfig::from_key_values(const KeyValues& values, ModelConfig base) {
  ModelConfig config = base;
  config.vocab_size = values.get("vocab_size", config.vocab_size);
  config.max_seq_len = values.get("max_seq_len", config.max_seq_len);
  config.d_model = values.get("d_model", config.d_model);
  config.n_layers = values.get("n_layers", config.n_layers);
  config.n_heads = values.get("n_heads", config.n_heads);
  config.d_ff = values.get("d_ff", config.d_ff);
  config.dropout = values.get("dropout", config.dropout);
  config.param_budget = values.get("param_budget", config.param_budget);
  return config;
}

}  // namespace lacuna::model
