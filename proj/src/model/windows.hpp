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

#ifndef LACUNA_MODEL_WINDOWS_HPP_
#define LACUNA_MODEL_WINDOWS_HPP_

#include <span>
#include <vector>

#include "corpus/document.hpp"
#include "tokenizer/vocabulary.hpp"

namespace lacuna::model {

using tokenizer::TokenId;

// Chunks of at most `length` tokens overlapping by a quarter. Windows never
// start on a continuation piece.
std::vector<std::vector<TokenId>> make_windows(const tokenizer::Vocabulary& vocab,
                                               std::span<const TokenId> ids, int length);

// Every document encoded and windowed for a model with `max_seq_len`
// positions ([CLS] and [SEP] included).
std::vector<std::vector<TokenId>> training_windows(const tokenizer::Vocabulary& vocab,
                                                   std::span<const corpus::Document> docs,
                                                   int max_seq_len);

}  // namespace lacuna::model

#endif  // LACUNA_MODEL_WINDOWS_HPP_
