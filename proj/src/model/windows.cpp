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

#include "model/windows.hpp"

#include <algorithm>

#include "common/error.hpp"

namespace lacuna::model {

std::vector<std::vector<TokenId>> make_windows(const tokenizer::Vocabulary& vocab,
                                               std::span<const TokenId> ids, int length) {
  if (length < 4) fail(ErrorCode::kInvalidArgument, "window length must be at least 4");
  std::vector<std::vector<TokenId>> out;
  const std::size_t n = ids.size();
  const auto len = static_cast<std::size_t>(length);
  const std::size_t stride = len - len / 4;
  std::size_t start = 0;
  while (start < n) {
    const std::size_t end = std::min(n, start + len);
    out.emplace_back(ids.begin() + static_cast<std::ptrdiff_t>(start),
                     ids.begin() + static_cast<std::ptrdiff_t>(end));
    if (end == n) break;
    std::size_t next = start + stride;
    while (next < end && vocab.kind(ids[next]) == tokenizer::TokenKind::kContinuation) ++next;
    start = next;
  }
  return out;
}

std::vector<std::vector<TokenId>> training_windows(const tokenizer::Vocabulary& vocab,
                                                   std::span<const corpus::Document> docs,
                                                   int max_seq_len) {
  std::vector<std::vector<TokenId>> out;
  for (const corpus::Document& doc : docs) {
    const tokenizer::TokenSequence seq = tokenizer::encode(vocab, doc.render());
    if (seq.ids.empty()) continue;
    for (auto& window : make_windows(vocab, seq.ids, max_seq_len - 2)) {
      out.push_back(std::move(window));
    }
  }
  return out;
}

}  // namespace lacuna::model
