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

#ifndef LACUNA_EVAL_TOKEN_EVAL_HPP_
#define LACUNA_EVAL_TOKEN_EVAL_HPP_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "common/records.hpp"
#include "corpus/document.hpp"
#include "eval/metrics.hpp"
#include "model/predictor.hpp"
#include "tokenizer/vocabulary.hpp"

namespace lacuna::eval {

struct TokenEvalOptions {
  double mask_rate = 0.15;
  std::vector<int> ks = {1, 5, 10};
  std::uint64_t seed = 1;
};

struct EvalReport {
  std::map<corpus::Genre, Score> per_genre;  // genres with at least one target
  Score overall;
  TokenEvalOptions config;
};

// Each document is cut into non-overlapping windows. In every window each
// eligible token is masked with probability mask_rate, all at once, and its
// gold id is ranked in the full distribution at that position.
// Throws Error(kEmptyTestSet) when no token gets masked.
EvalReport evaluate_token_level(const model::MaskedPredictor& predictor,
                                const tokenizer::Vocabulary& vocab,
                                std::span<const corpus::Document> docs,
                                const TokenEvalOptions& options);

records::Json report_to_json(const EvalReport& report);

// Genre rows then an overall row: n, MRR and one Hit@k column per k.
std::string format_report_table(const EvalReport& report);

}  // namespace lacuna::eval

#endif  // LACUNA_EVAL_TOKEN_EVAL_HPP_
