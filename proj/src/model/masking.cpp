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

#include "model/masking.hpp"

#include <algorithm>

#include "common/error.hpp"
#include "common/rng.hpp"

namespace lacuna::model {

TokenClasses TokenClasses::from_vocabulary(const tokenizer::Vocabulary& vocab,
                                          bool delimiter_targets) {
  TokenClasses classes;
  classes.eligible.assign(vocab.size(), 0);
  const auto gap = vocab.gap_id();
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    const auto id = static_cast<TokenId>(i);
    if (vocab.is_special(id)) continue;
    classes.random_pool.push_back(id);
    if ((vocab.is_delimiter(id) && !delimiter_targets) || (gap && *gap == id)) continue;
    classes.eligible[i] = 1;
  }
  return classes;
}

MaskedBatch make_masked_batch(const std::vector<std::vector<TokenId>>& sequences,
                              const TokenClasses& classes, const MaskOptions& options,
                              std::uint64_t seed) {
  if (sequences.empty()) fail(ErrorCode::kInvalidArgument, "no sequences to mask");
  if (!(options.rate >= 0.0 && options.rate < 1.0)) {
    fail(ErrorCode::kInvalidArgument, "masking rate must lie in [0, 1)");
  }
  std::size_t longest = 0;
  for (const auto& seq : sequences) longest = std::max(longest, seq.size());
  const int rows = static_cast<int>(sequences.size());
  const int cols = static_cast<int>(longest) + 2;

  MaskedBatch batch;
  batch.input_ids = Grid<TokenId>(rows, cols, tokenizer::kPad);
  batch.labels = Grid<TokenId>(rows, cols, kIgnoreLabel);
  batch.attention_mask = Grid<std::uint8_t>(rows, cols, 0);
  batch.mask_positions.resize(sequences.size());

  std::vector<std::pair<int, int>> eligible;
  for (int r = 0; r < rows; ++r) {
    const auto& seq = sequences[static_cast<std::size_t>(r)];
    batch.input_ids.at(r, 0) = tokenizer::kCls;
    for (std::size_t i = 0; i < seq.size(); ++i) {
      batch.input_ids.at(r, static_cast<int>(i) + 1) = seq[i];
      if (classes.is_eligible(seq[i])) eligible.emplace_back(r, static_cast<int>(i) + 1);
    }
    batch.input_ids.at(r, static_cast<int>(seq.size()) + 1) = tokenizer::kSep;
    for (int c = 0; c < static_cast<int>(seq.size()) + 2; ++c) batch.attention_mask.at(r, c) = 1;
  }

  Rng rng(seed);
  std::vector<std::pair<int, int>> chosen;
  for (const auto& position : eligible) {
    if (rng.bernoulli(options.rate)) chosen.push_back(position);
  }
  if (chosen.empty() && options.force_min && !eligible.empty()) {
    chosen.push_back(eligible[rng.uniform(eligible.size())]);
  }

  for (const auto& [r, c] : chosen) {
    const TokenId original = batch.input_ids.at(r, c);
    batch.labels.at(r, c) = original;
    batch.mask_positions[static_cast<std::size_t>(r)].push_back(c);
    TokenId replacement = tokenizer::kMask;
    if (options.corrupt) {
      const double u = rng.uniform01();
      if (u >= 0.9) {
        replacement = original;
      } else if (u >= 0.8 && !classes.random_pool.empty()) {
        replacement = classes.random_pool[rng.uniform(classes.random_pool.size())];
      }
    }
    batch.input_ids.at(r, c) = replacement;
  }
  return batch;
}

}  // namespace lacuna::model
