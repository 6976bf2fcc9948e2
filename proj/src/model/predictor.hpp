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

#ifndef LACUNA_MODEL_PREDICTOR_HPP_
#define LACUNA_MODEL_PREDICTOR_HPP_

#include <span>
#include <vector>

#include "tokenizer/vocabulary.hpp"

namespace lacuna::model {

// Natural-log probabilities over the vocabulary.
using LogDistribution = std::vector<double>;

// What the decoder and the evaluators need from a masked language model.
// Implementations must be safe to call concurrently.
class MaskedPredictor {
 public:
  virtual ~MaskedPredictor() = default;

  virtual int vocab_size() const = 0;
  virtual int max_seq_len() const = 0;

  // `ids` is a full model input, [CLS]/[SEP] included. Returns one
  // distribution per [MASK], left to right, all from a single pass. Throws
  // Error(kNoMaskedPositions) without a [MASK] and Error(kSequenceTooLong)
  // beyond max_seq_len().
  virtual std::vector<LogDistribution> predict_masked(
      std::span<const tokenizer::TokenId> ids) const = 0;
};

}  // namespace lacuna::model

#endif  // LACUNA_MODEL_PREDICTOR_HPP_
