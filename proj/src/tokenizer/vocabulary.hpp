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

#ifndef LACUNA_TOKENIZER_VOCABULARY_HPP_
#define LACUNA_TOKENIZER_VOCABULARY_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace lacuna::tokenizer {

using TokenId = std::int32_t;

inline constexpr TokenId kPad = 0;
inline constexpr TokenId kUnk = 1;
inline constexpr TokenId kMask = 2;
inline constexpr TokenId kCls = 3;
inline constexpr TokenId kSep = 4;
inline constexpr TokenId kNumSpecials = 5;

inline constexpr std::string_view kContinuationPrefix = "##";
inline constexpr std::string_view kMaskText = "[MASK]";
inline constexpr std::string_view kUnkText = "[UNK]";

// How a token participates in the sign structure.
//   kInitial      first piece of a sign ("na")
//   kContinuation later piece of the same sign ("##gal")
//   kDelimiter    '-' or '.', always its own token
// A kInitial token that does not follow a delimiter starts a new word, so the
// word separator is implicit in the token stream.
enum class TokenKind : std::uint8_t { kSpecial, kDelimiter, kInitial, kContinuation };

class Vocabulary {
 public:
  Vocabulary() = default;

  // Tokens in id order; the first five must be the specials.
  static Vocabulary from_tokens(std::vector<std::string> tokens);

  std::size_t size() const { return tokens_.size(); }
  const std::string& token(TokenId id) const;
  std::optional<TokenId> find(std::string_view token) const;
  TokenKind kind(TokenId id) const { return kinds_.at(static_cast<std::size_t>(id)); }
  bool is_delimiter(TokenId id) const { return kind(id) == TokenKind::kDelimiter; }
  bool is_special(TokenId id) const { return id >= 0 && id < kNumSpecials; }

  // Id of the gap marker sign "x", if the training text contained one.
  std::optional<TokenId> gap_id() const { return find("x"); }

  std::uint64_t hash() const { return hash_; }
  const std::vector<std::string>& tokens() const { return tokens_; }

  // Header line then one token per line; the token on line i+2 has id i.
  std::string serialize() const;
  static Vocabulary parse(std::string_view content);
  void save(const std::string& path) const;
  static Vocabulary load(const std::string& path);

  bool operator==(const Vocabulary& other) const { return tokens_ == other.tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::vector<TokenKind> kinds_;
  std::unordered_map<std::string, TokenId> ids_;
  std::uint64_t hash_ = 0;
};

std::uint64_t hash_tokens(std::span<const std::string> tokens);

struct TokenSequence {
  std::vector<TokenId> ids;
  // Byte span [first, second) of each token in the source text.
  std::vector<std::pair<std::size_t, std::size_t>> offsets;
};

// Greedy longest-match-first segmentation of normalized text. Each sign is
// matched independently: its first piece without prefix, later pieces with
// "##". A sign that cannot be covered maps to a single [UNK]. The literal
// "[MASK]" and "[UNK]" become their special ids.
TokenSequence encode(const Vocabulary& vocab, std::string_view text);

// Inverse of encode for UNK-free input. [MASK] and [UNK] render as their
// literal placeholders; PAD, CLS and SEP are skipped. Throws
// Error(kUnknownId) on an out-of-range id.
std::string decode(const Vocabulary& vocab, std::span<const TokenId> ids);

// Number of signs: maximal runs of sign pieces, where '-', '.', the implicit
// word break before a kInitial token, and PAD/CLS/SEP all separate runs.
// [MASK] and [UNK] each stand in for one sign.
std::size_t count_signs(const Vocabulary& vocab, std::span<const TokenId> ids);

}  // namespace lacuna::tokenizer

#endif  // LACUNA_TOKENIZER_VOCABULARY_HPP_
