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

#ifndef LACUNA_DECODER_BEAM_HPP_
#define LACUNA_DECODER_BEAM_HPP_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "decoder/query.hpp"
#include "model/predictor.hpp"
#include "tokenizer/vocabulary.hpp"

namespace lacuna::decoder {

struct Prediction {
  std::vector<TokenId> tokens;
  std::string surface;
  std::vector<std::string> signs;
  double logprob = 0.0;
  double probability = 0.0;
};

// Sign strings of a completion, in order.
std::vector<std::string> split_signs(const tokenizer::Vocabulary& vocab,
                                     std::span<const TokenId> tokens);

// Model input for scoring the token after `partial`:
// [CLS] left partial [MASK] right [SEP].
std::vector<TokenId> masked_input(const GapQuery& query, std::span<const TokenId> partial);

// Greedy k-beam search. Each step scores one [MASK] after every live
// candidate and keeps the k best extensions overall; a candidate with
// n_signs complete signs is emitted and may still grow its last sign.
// Results are sorted by log-probability, ties by token ids ascending.
// Throws Error(kNoValidCompletion) when nothing completes.
std::vector<Prediction> complete_gap(const model::MaskedPredictor& predictor,
                                     const tokenizer::Vocabulary& vocab, const GapQuery& query);

// Teacher-forced sum of log p(token_i | tokens_<i, context).
double sequence_logprob(const model::MaskedPredictor& predictor, const GapQuery& query,
                        std::span<const TokenId> tokens);

// 1-based rank of `gold`. A single token is ranked in the full distribution
// (ties by id); longer golds by their position among the beam outputs,
// nullopt when absent.
std::optional<int> rank_gold(const model::MaskedPredictor& predictor,
                             const tokenizer::Vocabulary& vocab, const GapQuery& query,
                             std::span<const TokenId> gold);

}  // namespace lacuna::decoder

#endif  // LACUNA_DECODER_BEAM_HPP_
