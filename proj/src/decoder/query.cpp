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

#include "decoder/query.hpp"

#include <algorithm>

#include "common/error.hpp"
#include "corpus/normalize.hpp"

namespace lacuna::decoder {
namespace {

std::size_t input_budget(const GapQuery& query, int max_seq_len) {
  const std::size_t needed = query.reserve() + 2;
  if (static_cast<std::size_t>(max_seq_len) < needed) {
    fail(ErrorCode::kInvalidArgument, "a gap of " + std::to_string(query.n_signs) +
                                          " signs does not fit in " +
                                          std::to_string(max_seq_len) + " positions");
  }
  return static_cast<std::size_t>(max_seq_len) - needed;
}

// Separator that precedes sign `index`: ' ' at a word start, else the
// delimiter, 0 for the first sign of the document.
char separator_before(const corpus::Document& doc,
                      const std::vector<corpus::SignLocation>& locations, std::size_t index) {
  if (index == 0) return 0;
  const corpus::SignLocation& loc = locations[index];
  return loc.sign == 0 ? ' ' : doc.words[loc.word].delimiters[loc.sign - 1];
}

}  // namespace

void validate(const GapQuery& query, int max_seq_len) {
  if (query.n_signs < 1 || query.beam_width < 1 || query.max_tokens_per_sign < 1) {
    fail(ErrorCode::kInvalidArgument, "n_signs, beam width and max tokens per sign must be positive");
  }
  if (query.left.size() + query.right.size() > input_budget(query, max_seq_len)) {
    fail(ErrorCode::kInvalidArgument, "context does not fit in the model input");
  }
}

void fit_context(GapQuery& query, const tokenizer::Vocabulary& vocab, int max_seq_len) {
  const std::size_t budget = input_budget(query, max_seq_len);
  std::size_t left = query.left.size();
  std::size_t right = query.right.size();
  if (left + right > budget) {
    const std::size_t half = budget / 2;
    if (left <= half) {
      right = budget - left;
    } else if (right <= budget - half) {
      left = budget - right;
    } else {
      left = half;
      right = budget - half;
    }
  }
  query.left.erase(query.left.begin(),
                   query.left.begin() + static_cast<std::ptrdiff_t>(query.left.size() - left));
  while (!query.left.empty() &&
         vocab.kind(query.left.front()) == tokenizer::TokenKind::kContinuation) {
    query.left.erase(query.left.begin());
  }
  query.right.resize(right);
}

GapQuery make_query(const tokenizer::Vocabulary& vocab, const corpus::Document& doc,
                    std::size_t begin, std::size_t end, const DecodeOptions& options,
                    int max_seq_len) {
  const std::size_t total = doc.sign_count();
  if (begin >= end || end > total) fail(ErrorCode::kInvalidArgument, "bad gap span");
  const auto locations = doc.sign_locations();

  GapQuery query;
  query.n_signs = static_cast<int>(end - begin);
  query.beam_width = options.beam_width;
  query.max_tokens_per_sign = options.max_tokens_per_sign;

  std::string left = corpus::render_span(doc, 0, begin);
  const char before = separator_before(doc, locations, begin);
  if (before == '-' || before == '.') left.push_back(before);
  std::string right;
  const char after = end < total ? separator_before(doc, locations, end) : 0;
  if (after == '-' || after == '.') right.push_back(after);
  right += corpus::render_span(doc, end, total);

  query.allow_word_break = !(before == '-' || before == '.' || after == '-' || after == '.');
  query.left = tokenizer::encode(vocab, left).ids;
  query.right = tokenizer::encode(vocab, right).ids;
  fit_context(query, vocab, max_seq_len);
  validate(query, max_seq_len);
  return query;
}

std::vector<TextGap> queries_from_text(const tokenizer::Vocabulary& vocab, std::string_view text,
                                       const DecodeOptions& options, int max_seq_len) {
  const corpus::Document doc = corpus::parse_document(text, "query", corpus::Genre::kOther);
  if (doc.gaps.empty()) fail(ErrorCode::kInvalidArgument, "text has no x gap marker");
  std::vector<TextGap> out;
  for (const corpus::GapRun& run : doc.gaps) {
    out.push_back({run, make_query(vocab, doc, run.start, run.start + run.length, options,
                                   max_seq_len)});
  }
  return out;
}

}  // namespace lacuna::decoder
