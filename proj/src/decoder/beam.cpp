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

#include "decoder/beam.hpp"

#include <algorithm>
#include <cmath>

#include "common/error.hpp"

namespace lacuna::decoder {
namespace {

using tokenizer::TokenKind;

struct State {
  std::vector<TokenId> tokens;
  double logprob = 0.0;
  int signs = 0;    // signs started so far
  int in_sign = 0;  // pieces in the current sign, 0 right after a delimiter
};

bool better(const State& a, const State& b) {
  if (a.logprob != b.logprob) return a.logprob > b.logprob;
  return a.tokens < b.tokens;
}

bool complete(const State& s, const GapQuery& query) {
  return s.signs == query.n_signs && s.in_sign > 0;
}

// Whether `id` may follow state `s`, and the resulting sign counters.
bool advance(const tokenizer::Vocabulary& vocab, const GapQuery& query, const State& s,
             TokenId id, std::optional<TokenId> gap, State& next) {
  if (vocab.is_special(id) || (gap && id == *gap)) return false;
  next.signs = s.signs;
  next.in_sign = s.in_sign;
  switch (vocab.kind(id)) {
    case TokenKind::kSpecial:
      return false;
    case TokenKind::kContinuation:
      if (s.in_sign == 0 || s.in_sign >= query.max_tokens_per_sign) return false;
      ++next.in_sign;
      return true;
    case TokenKind::kDelimiter:
      if (s.in_sign == 0 || s.signs >= query.n_signs) return false;
      next.in_sign = 0;
      return true;
    case TokenKind::kInitial:
      if (s.tokens.empty() || s.in_sign == 0) {
        ++next.signs;
        next.in_sign = 1;
        return true;
      }
      if (!query.allow_word_break || s.signs >= query.n_signs) return false;
      ++next.signs;
      next.in_sign = 1;
      return true;
  }
  return false;
}

Prediction to_prediction(const tokenizer::Vocabulary& vocab, const State& s) {
  Prediction p;
  p.tokens = s.tokens;
  p.surface = tokenizer::decode(vocab, s.tokens);
  p.signs = split_signs(vocab, s.tokens);
  p.logprob = s.logprob;
  p.probability = std::exp(s.logprob);
  return p;
}

model::LogDistribution predict_next(const model::MaskedPredictor& predictor,
                                    const GapQuery& query, std::span<const TokenId> partial) {
  auto distributions = predictor.predict_masked(masked_input(query, partial));
  return std::move(distributions.front());
}

}  // namespace

std::vector<std::string> split_signs(const tokenizer::Vocabulary& vocab,
                                     std::span<const TokenId> tokens) {
  std::vector<std::string> signs;
  for (TokenId id : tokens) {
    switch (vocab.kind(id)) {
      case TokenKind::kDelimiter:
        break;
      case TokenKind::kContinuation:
        if (signs.empty()) signs.emplace_back();
        signs.back() += vocab.token(id).substr(tokenizer::kContinuationPrefix.size());
        break;
      case TokenKind::kInitial:
      case TokenKind::kSpecial:
        signs.push_back(vocab.token(id));
        break;
    }
  }
  return signs;
}

std::vector<TokenId> masked_input(const GapQuery& query, std::span<const TokenId> partial) {
  std::vector<TokenId> ids;
  ids.reserve(query.left.size() + partial.size() + query.right.size() + 3);
  ids.push_back(tokenizer::kCls);
  ids.insert(ids.end(), query.left.begin(), query.left.end());
  ids.insert(ids.end(), partial.begin(), partial.end());
  ids.push_back(tokenizer::kMask);
  ids.insert(ids.end(), query.right.begin(), query.right.end());
  ids.push_back(tokenizer::kSep);
  return ids;
}

std::vector<Prediction> complete_gap(const model::MaskedPredictor& predictor,
                                     const tokenizer::Vocabulary& vocab, const GapQuery& query) {
  validate(query, predictor.max_seq_len());
  if (static_cast<int>(vocab.size()) != predictor.vocab_size()) {
    fail(ErrorCode::kVocabularyMismatch, "vocabulary size differs from the model's");
  }
  const auto k = static_cast<std::size_t>(query.beam_width);
  const auto gap = vocab.gap_id();
  std::vector<State> live(1);
  std::vector<State> finished;

  while (!live.empty() && finished.size() < k) {
    std::vector<State> expansions;
    for (const State& s : live) {
      const model::LogDistribution dist = predict_next(predictor, query, s.tokens);
      std::vector<State> options;
      for (std::size_t id = 0; id < dist.size(); ++id) {
        State next;
        if (!advance(vocab, query, s, static_cast<TokenId>(id), gap, next)) continue;
        next.tokens = s.tokens;
        next.tokens.push_back(static_cast<TokenId>(id));
        next.logprob = s.logprob + dist[id];
        options.push_back(std::move(next));
      }
      const std::size_t keep = std::min(k, options.size());
      std::partial_sort(options.begin(), options.begin() + static_cast<std::ptrdiff_t>(keep),
                        options.end(), better);
      options.resize(keep);
      for (State& o : options) expansions.push_back(std::move(o));
    }
    std::sort(expansions.begin(), expansions.end(), better);
    expansions.resize(std::min(expansions.size(), k - finished.size()));

    live.clear();
    for (State& e : expansions) {
      const bool done = complete(e, query);
      if (done) finished.push_back(e);
      const bool growable = !done || e.in_sign < query.max_tokens_per_sign;
      if (growable) live.push_back(std::move(e));
    }
  }
  if (finished.empty()) {
    fail(ErrorCode::kNoValidCompletion,
         "no candidate closed " + std::to_string(query.n_signs) + " signs");
  }
  std::sort(finished.begin(), finished.end(), better);
  std::vector<Prediction> out;
  for (const State& s : finished) out.push_back(to_prediction(vocab, s));
  return out;
}

double sequence_logprob(const model::MaskedPredictor& predictor, const GapQuery& query,
                        std::span<const TokenId> tokens) {
  if (tokens.empty()) fail(ErrorCode::kInvalidArgument, "candidate is empty");
  double total = 0.0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const model::LogDistribution dist = predict_next(predictor, query, tokens.first(i));
    const auto id = static_cast<std::size_t>(tokens[i]);
    if (id >= dist.size()) fail(ErrorCode::kUnknownId, "candidate token outside the vocabulary");
    total += dist[id];
  }
  return total;
}

std::optional<int> rank_gold(const model::MaskedPredictor& predictor,
                             const tokenizer::Vocabulary& vocab, const GapQuery& query,
                             std::span<const TokenId> gold) {
  if (gold.empty()) fail(ErrorCode::kInvalidArgument, "gold is empty");
  if (gold.size() == 1) {
    const model::LogDistribution dist = predict_next(predictor, query, {});
    const auto g = static_cast<std::size_t>(gold[0]);
    if (g >= dist.size()) fail(ErrorCode::kUnknownId, "gold token outside the vocabulary");
    int rank = 1;
    for (std::size_t id = 0; id < dist.size(); ++id) {
      if (dist[id] > dist[g] || (dist[id] == dist[g] && id < g)) ++rank;
    }
    return rank;
  }
  std::vector<Prediction> predictions;
  try {
    predictions = complete_gap(predictor, vocab, query);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kNoValidCompletion) return std::nullopt;
    throw;
  }
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    if (std::equal(predictions[i].tokens.begin(), predictions[i].tokens.end(), gold.begin(),
                   gold.end())) {
      return static_cast<int>(i) + 1;
    }
  }
  return std::nullopt;
}

}  // namespace lacuna::decoder
