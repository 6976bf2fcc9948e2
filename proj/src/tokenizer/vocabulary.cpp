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

#include "tokenizer/vocabulary.hpp"

#include <array>
#include <sstream>

#include "common/error.hpp"
#include "common/hash.hpp"
#include "common/records.hpp"
#include "common/utf8.hpp"

namespace lacuna::tokenizer {
namespace {

constexpr std::array<std::string_view, kNumSpecials> kSpecialTexts = {
    "[PAD]", "[UNK]", "[MASK]", "[CLS]", "[SEP]"};

constexpr std::string_view kHeaderTag = "#lacuna-vocab";
constexpr int kFormatVersion = 1;

bool starts_with(std::string_view text, std::string_view prefix) {
  return text.substr(0, prefix.size()) == prefix;
}

TokenKind classify(TokenId id, std::string_view token) {
  if (id < kNumSpecials) return TokenKind::kSpecial;
  if (token == "-" || token == ".") return TokenKind::kDelimiter;
  if (starts_with(token, kContinuationPrefix) && token.size() > kContinuationPrefix.size()) {
    return TokenKind::kContinuation;
  }
  return TokenKind::kInitial;
}

bool is_delimiter_char(char c) { return c == '-' || c == '.'; }

}  // namespace

std::uint64_t hash_tokens(std::span<const std::string> tokens) {
  Fnv1a hash;
  for (const std::string& token : tokens) {
    hash.update(token);
    hash.update("\n");
  }
  return hash.digest();
}

Vocabulary Vocabulary::from_tokens(std::vector<std::string> tokens) {
  if (tokens.size() < kSpecialTexts.size()) {
    fail(ErrorCode::kInvalidArgument, "vocabulary is missing special tokens");
  }
  for (std::size_t i = 0; i < kSpecialTexts.size(); ++i) {
    if (tokens[i] != kSpecialTexts[i]) {
      fail(ErrorCode::kInvalidArgument, "special token " + std::string(kSpecialTexts[i]) +
                                            " must have id " + std::to_string(i));
    }
  }
  Vocabulary vocab;
  vocab.tokens_ = std::move(tokens);
  vocab.kinds_.reserve(vocab.tokens_.size());
  for (std::size_t i = 0; i < vocab.tokens_.size(); ++i) {
    const std::string& token = vocab.tokens_[i];
    if (token.empty() || token.find_first_of(" \t\r\n") != std::string::npos) {
      fail(ErrorCode::kInvalidArgument, "invalid token at id " + std::to_string(i));
    }
    if (!vocab.ids_.emplace(token, static_cast<TokenId>(i)).second) {
      fail(ErrorCode::kInvalidArgument, "duplicate token '" + token + "'");
    }
    vocab.kinds_.push_back(classify(static_cast<TokenId>(i), token));
  }
  vocab.hash_ = hash_tokens(vocab.tokens_);
  return vocab;
}

const std::string& Vocabulary::token(TokenId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= tokens_.size()) {
    fail(ErrorCode::kUnknownId, "token id " + std::to_string(id) + " out of range");
  }
  return tokens_[static_cast<std::size_t>(id)];
}

std::optional<TokenId> Vocabulary::find(std::string_view token) const {
  auto it = ids_.find(std::string(token));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

std::string Vocabulary::serialize() const {
  std::ostringstream out;
  out << kHeaderTag << " version=" << kFormatVersion << " size=" << tokens_.size()
      << " prefix=" << kContinuationPrefix << " hash=" << hex64(hash_) << '\n';
  for (const std::string& token : tokens_) out << token << '\n';
  return out.str();
}

Vocabulary Vocabulary::parse(std::string_view content) {
  std::vector<std::string> lines;
  while (!content.empty()) {
    const std::size_t nl = content.find('\n');
    lines.emplace_back(content.substr(0, nl));
    if (nl == std::string_view::npos) break;
    content.remove_prefix(nl + 1);
  }
  if (lines.empty() || !starts_with(lines[0], kHeaderTag)) {
    fail(ErrorCode::kCorruptFile, "missing vocabulary header");
  }
  std::istringstream header(lines[0].substr(kHeaderTag.size()));
  std::string field;
  int version = -1;
  long long size = -1;
  std::string hash_text;
  while (header >> field) {
    const std::size_t eq = field.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = field.substr(0, eq);
    const std::string value = field.substr(eq + 1);
    if (key == "version") version = std::stoi(value);
    if (key == "size") size = std::stoll(value);
    if (key == "hash") hash_text = value;
    if (key == "prefix" && value != kContinuationPrefix) {
      fail(ErrorCode::kCorruptFile, "unsupported continuation prefix " + value);
    }
  }
  if (version != kFormatVersion) {
    fail(ErrorCode::kVersionMismatch, "vocabulary version " + std::to_string(version));
  }
  std::vector<std::string> tokens(lines.begin() + 1, lines.end());
  if (size < 0 || static_cast<std::size_t>(size) != tokens.size()) {
    fail(ErrorCode::kCorruptFile, "vocabulary size mismatch");
  }
  Vocabulary vocab = from_tokens(std::move(tokens));
  if (hex64(vocab.hash()) != hash_text) fail(ErrorCode::kCorruptFile, "vocabulary hash mismatch");
  return vocab;
}

void Vocabulary::save(const std::string& path) const { records::write_file(path, serialize()); }

Vocabulary Vocabulary::load(const std::string& path) { return parse(records::read_file(path)); }

namespace {

// Greedy longest match of one sign occupying text[begin, end).
void encode_sign(const Vocabulary& vocab, std::string_view text, std::size_t begin,
                 std::size_t end, TokenSequence& out) {
  const std::string_view sign = text.substr(begin, end - begin);
  if (sign == kMaskText || sign == kUnkText) {
    out.ids.push_back(sign == kMaskText ? kMask : kUnk);
    out.offsets.emplace_back(begin, end);
    return;
  }
  // Codepoint boundaries inside the sign.
  std::vector<std::size_t> bounds;
  for (std::size_t i = 0; i < sign.size();) {
    bounds.push_back(i);
    i += utf8::sequence_length(static_cast<unsigned char>(sign[i]));
  }
  bounds.push_back(sign.size());

  const std::size_t mark = out.ids.size();
  std::size_t start = 0;  // index into bounds
  std::string candidate;
  while (start + 1 < bounds.size()) {
    std::optional<TokenId> match;
    std::size_t stop = bounds.size() - 1;
    for (; stop > start; --stop) {
      candidate.clear();
      if (start > 0) candidate = kContinuationPrefix;
      candidate += sign.substr(bounds[start], bounds[stop] - bounds[start]);
      match = vocab.find(candidate);
      if (match && vocab.kind(*match) != TokenKind::kSpecial) break;
      match.reset();
    }
    if (!match) {
      out.ids.resize(mark);
      out.offsets.resize(mark);
      out.ids.push_back(kUnk);
      out.offsets.emplace_back(begin, end);
      return;
    }
    out.ids.push_back(*match);
    out.offsets.emplace_back(begin + bounds[start], begin + bounds[stop]);
    start = stop;
  }
}

}  // namespace

TokenSequence encode(const Vocabulary& vocab, std::string_view text) {
  TokenSequence out;
  const std::optional<TokenId> dash = vocab.find("-");
  const std::optional<TokenId> dot = vocab.find(".");
  for (std::string_view word : utf8::split_whitespace(text)) {
    const std::size_t base = static_cast<std::size_t>(word.data() - text.data());
    std::size_t sign_start = 0;
    for (std::size_t i = 0; i <= word.size(); ++i) {
      if (i < word.size() && !is_delimiter_char(word[i])) continue;
      if (i > sign_start) encode_sign(vocab, text, base + sign_start, base + i, out);
      if (i < word.size()) {
        const std::optional<TokenId> id = word[i] == '-' ? dash : dot;
        out.ids.push_back(id ? *id : kUnk);
        out.offsets.emplace_back(base + i, base + i + 1);
      }
      sign_start = i + 1;
    }
  }
  return out;
}

std::string decode(const Vocabulary& vocab, std::span<const TokenId> ids) {
  std::string out;
  bool after_delimiter = false;
  for (TokenId id : ids) {
    const std::string& text = vocab.token(id);
    switch (vocab.kind(id)) {
      case TokenKind::kSpecial:
        if (id == kMask || id == kUnk) {
          if (!out.empty() && !after_delimiter) out.push_back(' ');
          out += id == kMask ? kMaskText : kUnkText;
          after_delimiter = false;
        }
        break;
      case TokenKind::kDelimiter:
        out += text;
        after_delimiter = true;
        break;
      case TokenKind::kInitial:
        if (!out.empty() && !after_delimiter) out.push_back(' ');
        out += text;
        after_delimiter = false;
        break;
      case TokenKind::kContinuation:
        out += std::string_view(text).substr(kContinuationPrefix.size());
        after_delimiter = false;
        break;
    }
  }
  return out;
}

std::size_t count_signs(const Vocabulary& vocab, std::span<const TokenId> ids) {
  std::size_t signs = 0;
  bool in_sign = false;
  for (TokenId id : ids) {
    switch (vocab.kind(id)) {
      case TokenKind::kSpecial:
        if (id == kMask || id == kUnk) {
          ++signs;
          in_sign = true;
        } else {
          in_sign = false;
        }
        break;
      case TokenKind::kDelimiter:
        in_sign = false;
        break;
      case TokenKind::kInitial:
        ++signs;
        in_sign = true;
        break;
      case TokenKind::kContinuation:
        if (!in_sign) ++signs;
        in_sign = true;
        break;
    }
  }
  return signs;
}

}  // namespace lacuna::tokenizer
