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

#ifndef LACUNA_MODEL_BATCH_HPP_
#define LACUNA_MODEL_BATCH_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "tokenizer/vocabulary.hpp"

namespace lacuna::model {

using tokenizer::TokenId;

// Row-major rows x cols grid.
template <typename V>
struct Grid {
  int rows = 0;
  int cols = 0;
  std::vector<V> data;

  Grid() = default;
  Grid(int r, int c, V fill = V{})
      : rows(r), cols(c), data(static_cast<std::size_t>(r) * static_cast<std::size_t>(c), fill) {}

  V& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
  const V& at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
  std::span<V> row(int r) { return {data.data() + static_cast<std::size_t>(r) * cols, static_cast<std::size_t>(cols)}; }
  std::span<const V> row(int r) const {
    return {data.data() + static_cast<std::size_t>(r) * cols, static_cast<std::size_t>(cols)};
  }
};

inline constexpr TokenId kIgnoreLabel = -1;

// Logits for every position of every row: [batch][seq][vocab].
struct BatchLogits {
  int batch = 0;
  int seq = 0;
  int vocab = 0;
  std::vector<float> values;

  float at(int b, int s, int v) const {
    return values[(static_cast<std::size_t>(b) * seq + s) * vocab + v];
  }
  std::span<const float> position(int b, int s) const {
    return {values.data() + (static_cast<std::size_t>(b) * seq + s) * vocab,
            static_cast<std::size_t>(vocab)};
  }
};

struct MaskedBatch {
  Grid<TokenId> input_ids;
  Grid<TokenId> labels;  // kIgnoreLabel except at masked positions
  Grid<std::uint8_t> attention_mask;  // 1 for real tokens, 0 for padding
  std::vector<std::vector<int>> mask_positions;

  std::size_t masked_count() const {
    std::size_t n = 0;
    for (const auto& row : mask_positions) n += row.size();
    return n;
  }
};

}  // namespace lacuna::model

#endif  // LACUNA_MODEL_BATCH_HPP_
