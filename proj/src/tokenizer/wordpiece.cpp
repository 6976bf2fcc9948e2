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

#include "tokenizer/wordpiece.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "common/error.hpp"
#include "common/utf8.hpp"

namespace lacuna::tokenizer {
namespace {

struct SignType {
  std::vector<int> symbols;  // indices into the working token table
  std::uint64_t count = 0;
};

// Distinct sign graphemes with their frequencies, in byte order.
std::map<std::string, std::uint64_t> count_signs_in(std::span<const corpus::Document> corpus) {
  std::map<std::string, std::uint64_t> counts;
  for (const corpus::Document& doc : corpus) {
    for (const corpus::Word& word : doc.words) {
      for (const corpus::Sign& sign : word.signs) ++counts[sign.grapheme];
    }
  }
  return counts;
}

std::vector<std::string> split_codepoints(const std::string& text) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < text.size();) {
    const std::size_t len = utf8::sequence_length(static_cast<unsigned char>(text[i]));
    out.push_back(text.substr(i, len));
    i += len;
  }
  return out;
}

struct Alphabet {
  std::set<std::string> initial;
  std::set<std::string> continuation;
};

Alphabet collect_alphabet(const std::map<std::string, std::uint64_t>& signs) {
  Alphabet alphabet;
  for (const auto& [grapheme, count] : signs) {
    const std::vector<std::string> chars = split_codepoints(grapheme);
    for (std::size_t i = 0; i < chars.size(); ++i) {
      if (i == 0) {
        alphabet.initial.insert(chars[i]);
      } else {
        alphabet.continuation.insert(std::string(kContinuationPrefix) + chars[i]);
      }
    }
  }
  return alphabet;
}

std::string strip_prefix(const std::string& token) {
  if (token.rfind(kContinuationPrefix, 0) == 0) return token.substr(kContinuationPrefix.size());
  return token;
}

}  // namespace

std::size_t base_vocabulary_size(std::span<const corpus::Document> corpus) {
  const Alphabet alphabet = collect_alphabet(count_signs_in(corpus));
  return kNumSpecials + 2 + alphabet.initial.size() + alphabet.continuation.size();
}

Vocabulary train_wordpiece(std::span<const corpus::Document> corpus, std::size_t vocab_size,
                           std::uint64_t /*seed*/) {
  const std::map<std::string, std::uint64_t> sign_counts = count_signs_in(corpus);
  if (sign_counts.empty()) fail(ErrorCode::kEmptyCorpus, "no signs to train on");

  const Alphabet alphabet = collect_alphabet(sign_counts);
  std::vector<std::string> tokens = {"[PAD]", "[UNK]", "[MASK]", "[CLS]", "[SEP]", "-", "."};
  tokens.insert(tokens.end(), alphabet.initial.begin(), alphabet.initial.end());
  tokens.insert(tokens.end(), alphabet.continuation.begin(), alphabet.continuation.end());
  if (vocab_size < tokens.size()) {
    fail(ErrorCode::kInvalidArgument, "vocab_size " + std::to_string(vocab_size) +
                                          " is below the base alphabet size " +
                                          std::to_string(tokens.size()));
  }

  // Working symbol table; merged symbols may repeat an existing token string.
  std::vector<std::string> symbols;
  std::unordered_map<std::string, int> symbol_ids;
  auto intern = [&](const std::string& text) {
    auto [it, inserted] = symbol_ids.emplace(text, static_cast<int>(symbols.size()));
    if (inserted) symbols.push_back(text);
    return it->second;
  };
  for (std::size_t i = kNumSpecials; i < tokens.size(); ++i) intern(tokens[i]);
  std::set<std::string> in_vocab(tokens.begin(), tokens.end());

  std::vector<SignType> types;
  types.reserve(sign_counts.size());
  for (const auto& [grapheme, count] : sign_counts) {
    SignType type;
    type.count = count;
    const std::vector<std::string> chars = split_codepoints(grapheme);
    for (std::size_t i = 0; i < chars.size(); ++i) {
      type.symbols.push_back(
          intern(i == 0 ? chars[i] : std::string(kContinuationPrefix) + chars[i]));
    }
    types.push_back(std::move(type));
  }

  using Pair = std::pair<int, int>;
  while (tokens.size() < vocab_size) {
    std::vector<std::uint64_t> unit_counts(symbols.size(), 0);
    std::map<Pair, std::uint64_t> pair_counts;
    for (const SignType& type : types) {
      for (std::size_t i = 0; i < type.symbols.size(); ++i) {
        unit_counts[static_cast<std::size_t>(type.symbols[i])] += type.count;
        if (i + 1 < type.symbols.size()) {
          pair_counts[{type.symbols[i], type.symbols[i + 1]}] += type.count;
        }
      }
    }
    if (pair_counts.empty()) break;

    // Best pair by count/(left*right); exact comparison via cross products.
    const Pair* best = nullptr;
    std::uint64_t best_count = 0;
    unsigned __int128 best_denominator = 1;
    for (const auto& [pair, count] : pair_counts) {
      const unsigned __int128 denominator =
          static_cast<unsigned __int128>(unit_counts[static_cast<std::size_t>(pair.first)]) *
          unit_counts[static_cast<std::size_t>(pair.second)];
      bool better = false;
      if (best == nullptr) {
        better = true;
      } else {
        const unsigned __int128 lhs = static_cast<unsigned __int128>(count) * best_denominator;
        const unsigned __int128 rhs = static_cast<unsigned __int128>(best_count) * denominator;
        if (lhs > rhs) {
          better = true;
        } else if (lhs == rhs) {
          const auto key = std::tie(symbols[static_cast<std::size_t>(pair.first)],
                                    symbols[static_cast<std::size_t>(pair.second)]);
          const auto best_key = std::tie(symbols[static_cast<std::size_t>(best->first)],
                                         symbols[static_cast<std::size_t>(best->second)]);
          better = key < best_key;
        }
      }
      if (better) {
        best = &pair;
        best_count = count;
        best_denominator = denominator;
      }
    }

    const Pair merge = *best;
    const std::string merged = symbols[static_cast<std::size_t>(merge.first)] +
                               strip_prefix(symbols[static_cast<std::size_t>(merge.second)]);
    const int merged_id = intern(merged);
    for (SignType& type : types) {
      std::vector<int>& s = type.symbols;
      std::vector<int> next;
      next.reserve(s.size());
      for (std::size_t i = 0; i < s.size(); ++i) {
        if (i + 1 < s.size() && s[i] == merge.first && s[i + 1] == merge.second) {
          next.push_back(merged_id);
          ++i;
        } else {
          next.push_back(s[i]);
        }
      }
      s = std::move(next);
    }
    if (in_vocab.insert(merged).second) tokens.push_back(merged);
  }
  return Vocabulary::from_tokens(std::move(tokens));
}

}  // namespace lacuna::tokenizer
