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

#ifndef LACUNA_APP_SUGGEST_HPP_
#define LACUNA_APP_SUGGEST_HPP_

#include <memory>
#include <optional>
#include <string>

#include "common/records.hpp"
#include "model/checkpoint.hpp"
#include "tokenizer/vocabulary.hpp"

namespace lacuna::app {

// A checkpoint together with the vocabulary it was trained on. Immutable
// once opened.
struct Engine {
  std::shared_ptr<const model::Model> model;
  tokenizer::Vocabulary vocab;
  model::CheckpointInfo info;
  std::string model_hash;

  // Throws Error(kVocabularyMismatch) when the vocabulary is not the one
  // the checkpoint was trained with.
  static std::shared_ptr<const Engine> open(const std::string& checkpoint,
                                            const std::string& vocabulary);
};

struct SuggestRequest {
  std::string text;
  std::optional<std::size_t> gap_index;  // default: first gap
  int k = 5;
  int max_tokens_per_sign = 6;
};

// Fields: text (required), gap_index, k, max_tokens_per_sign.
// Throws Error(kInvalidArgument) on a malformed body.
SuggestRequest parse_suggest_request(const records::Json& body, int default_k,
                                     int default_max_tokens_per_sign);

// Decodes one gap of the request text. The response carries suggestions
// (surface, signs, probability, logprob), the gap, model and vocabulary
// hashes and elapsed_ms. Throws Error(kInvalidArgument) when the text has
// no such gap.
records::Json suggest(const Engine& engine, const SuggestRequest& request);

}  // namespace lacuna::app

#endif  // LACUNA_APP_SUGGEST_HPP_
