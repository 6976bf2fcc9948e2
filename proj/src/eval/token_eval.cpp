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

#include "eval/token_eval.hpp"

#include <cstdio>
#include <sstream>

#include "common/error.hpp"
#include "common/rng.hpp"
#include "model/masking.hpp"

namespace lacuna::eval {
namespace {

std::string fixed(double value, int digits) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.*f", digits, value);
  return buffer;
}

records::Json score_to_json(const Score& s) {
  records::Json hits = records::Json::object();
  for (const auto& [k, v] : s.hit_at) hits[std::to_string(k)] = v;
  return {{"mrr", s.mrr}, {"hit_at", hits}, {"n", s.n}};
}

}  // namespace

EvalReport evaluate_token_level(const model::MaskedPredictor& predictor,
                                const tokenizer::Vocabulary& vocab,
                                std::span<const corpus::Document> docs,
                                const TokenEvalOptions& options) {
  if (docs.empty()) fail(ErrorCode::kEmptyTestSet, "no test documents");
  if (!(options.mask_rate > 0.0 && options.mask_rate < 1.0)) {
    fail(ErrorCode::kInvalidArgument, "mask rate must lie in (0, 1)");
  }
  for (int k : options.ks) {
    if (k < 1) fail(ErrorCode::kInvalidArgument, "k must be at least 1");
  }
  const model::TokenClasses classes = model::TokenClasses::from_vocabulary(vocab);
  const std::size_t length = static_cast<std::size_t>(predictor.max_seq_len()) - 2;

  std::map<corpus::Genre, std::vector<Rank>> ranks;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    const std::vector<tokenizer::TokenId> ids = tokenizer::encode(vocab, docs[d].render()).ids;
    std::size_t start = 0;
    for (std::size_t w = 0; start < ids.size(); ++w) {
      std::size_t end = std::min(ids.size(), start + length);
      while (end < ids.size() && end > start + 1 &&
             vocab.kind(ids[end]) == tokenizer::TokenKind::kContinuation) {
        --end;
      }
      std::vector<tokenizer::TokenId> input = {tokenizer::kCls};
      input.insert(input.end(), ids.begin() + static_cast<std::ptrdiff_t>(start),
                   ids.begin() + static_cast<std::ptrdiff_t>(end));
      input.push_back(tokenizer::kSep);

      Rng rng(Rng::mix(Rng::mix(options.seed, d), w));
      std::vector<tokenizer::TokenId> golds;
      for (std::size_t i = 1; i + 1 < input.size(); ++i) {
        if (classes.is_eligible(input[i]) && rng.bernoulli(options.mask_rate)) {
          golds.push_back(input[i]);
          input[i] = tokenizer::kMask;
        }
      }
      start = end;
      if (golds.empty()) continue;
      const auto dists = predictor.predict_masked(input);
      auto& bucket = ranks[docs[d].genre];
      for (std::size_t m = 0; m < golds.size(); ++m) {
        bucket.push_back(rank_in(dists[m], static_cast<std::size_t>(golds[m])));
      }
    }
  }

  EvalReport report;
  report.config = options;
  std::vector<Rank> all;
  for (const auto& [genre, list] : ranks) {
    report.per_genre[genre] = score_ranks(list, options.ks);
    all.insert(all.end(), list.begin(), list.end());
  }
  if (all.empty()) fail(ErrorCode::kEmptyTestSet, "no token was masked in the test set");
  report.overall = score_ranks(all, options.ks);
  return report;
}

records::Json report_to_json(const EvalReport& report) {
  records::Json genres = records::Json::object();
  for (const auto& [genre, s] : report.per_genre) {
    genres[std::string(corpus::genre_name(genre))] = score_to_json(s);
  }
  return {{"per_genre", genres},
          {"overall", score_to_json(report.overall)},
          {"config",
           {{"mask_rate", report.config.mask_rate},
            {"seed", report.config.seed},
            {"ks", report.config.ks}}}};
}

std::string format_report_table(const EvalReport& report) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-16s %8s %7s", "genre", "n", "MRR");
  out << line;
  for (int k : report.config.ks) out << "  Hit@" << k << std::string(k < 10 ? 1 : 0, ' ');
  out << '\n';
  auto row = [&](const std::string& name, const Score& s) {
    std::snprintf(line, sizeof(line), "%-16s %8zu %7s", name.c_str(), s.n, fixed(s.mrr, 3).c_str());
    out << line;
    for (int k : report.config.ks) {
      std::snprintf(line, sizeof(line), " %7s", fixed(s.hit_at.at(k), 3).c_str());
      out << line;
    }
    out << '\n';
  };
  for (const auto& [genre, s] : report.per_genre) row(std::string(corpus::genre_name(genre)), s);
  row("overall", report.overall);
  return out.str();
}

}  // namespace lacuna::eval
