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

#ifndef LACUNA_MODEL_MASKING_HPP_
#define LACUNA_MODEL_MASKING_HPP_

#include <cstdint>
#include <vector>

#include "model/batch.hpp"
#include "tokenizer/vocabulary.hpp"

namespace lacuna::model {

// Which ids may be masking targets and which may serve as random
// replacements. Specials and the gap sign are never targets; delimiters only
// when `delimiter_targets` is set.
struct TokenClasses {
  std::vector<std::uint8_t> eligible;
  std::vector<TokenId> random_pool;

  static TokenClasses from_vocabulary(const tokenizer::Vocabulary& vocab,
                                      bool delimiter_targets = false);

  bool is_eligible(TokenId id) const {
    return id >= 0 && static_cast<std::size_t>(id) < eligible.size() && eligible[static_cast<std::size_t>(id)];
  }
};

struct MaskOptions {
  double rate = 0.15;
  // Mask one eligible position when the draw selects none.
  bool force_min = true;
  // 80% [MASK], 10% random token, 10% unchanged. Off: always [MASK].
  bool corrupt = true;
  // Let '-' and '.' be targets so the decoder can score sign boundaries.
  bool delimiter_targets = false;
};

// Frames each sequence as [CLS] ids [SEP], pads to the longest row and
// selects targets independently per eligible position.
// Throws Error(kInvalidArgument) on no sequences or rate outside [0, 1).
MaskedBatch make_masked_batch(const std::vector<std::vector<TokenId>>& sequences,
                              const TokenClasses& classes, const MaskOptions& options,
                              std::uint64_t seed);

}  // namespace lacuna::model

#endif  // LACUNA_MODEL_MASKING_HPP_
