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

#ifndef LACUNA_DECODER_QUERY_HPP_
#define LACUNA_DECODER_QUERY_HPP_

#include <string_view>
#include <vector>

#include "corpus/document.hpp"
#include "tokenizer/vocabulary.hpp"

namespace lacuna::decoder {

using tokenizer::TokenId;

struct DecodeOptions {
  int beam_width = 5;
  int max_tokens_per_sign = 6;
};

// One gap of known length between two token contexts. Contexts exclude
// [CLS] and [SEP].
struct GapQuery {
  std::vector<TokenId> left;
  std::vector<TokenId> right;
  int n_signs = 1;
  int beam_width = 5;
  int max_tokens_per_sign = 6;
  // False when the gap shares a word with a known neighbour, so the
  // completion may not contain a word break.
  bool allow_word_break = true;

  // Tokens the completion can occupy at most.
  std::size_t reserve() const {
    return static_cast<std::size_t>(n_signs) * static_cast<std::size_t>(max_tokens_per_sign) +
           static_cast<std::size_t>(n_signs - 1);
  }
};

// Throws Error(kInvalidArgument) when n_signs, beam_width or
// max_tokens_per_sign is not positive or the contexts do not fit.
void validate(const GapQuery& query, int max_seq_len);

// Drops context tokens farthest from the gap until the model input fits.
// The left context never starts on a continuation piece.
void fit_context(GapQuery& query, const tokenizer::Vocabulary& vocab, int max_seq_len);

// Query for signs [begin, end) of `doc`, which are treated as unknown. Other
// gaps of the document appear as the gap sign in the context.
GapQuery make_query(const tokenizer::Vocabulary& vocab, const corpus::Document& doc,
                    std::size_t begin, std::size_t end, const DecodeOptions& options,
                    int max_seq_len);

struct TextGap {
  corpus::GapRun run;
  GapQuery query;
};

// Parses free transliteration with `x` markers and builds one query per gap
// run, left to right. Throws Error(kInvalidArgument) when there is no gap.
std::vector<TextGap> queries_from_text(const tokenizer::Vocabulary& vocab, std::string_view text,
                                       const DecodeOptions& options, int max_seq_len);

}  // namespace lacuna::decoder

#endif  // LACUNA_DECODER_QUERY_HPP_
