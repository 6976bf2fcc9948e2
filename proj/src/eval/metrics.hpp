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

#ifndef LACUNA_EVAL_METRICS_HPP_
#define LACUNA_EVAL_METRICS_HPP_

#include <map>
#include <optional>
#include <span>
#include <vector>

namespace lacuna::eval {

// 1-based rank of a gold item; nullopt when it was not found.
using Rank = std::optional<int>;

// Mean reciprocal rank; a missing rank contributes 0.
// Throws Error(kEmptyInput) on no ranks.
double mrr(std::span<const Rank> ranks);

// Fraction of ranks <= k. Throws Error(kEmptyInput) on no ranks and
// Error(kInvalidArgument) when k < 1.
double hit_at_k(std::span<const Rank> ranks, int k);

struct Score {
  double mrr = 0.0;
  std::map<int, double> hit_at;
  std::size_t n = 0;
};

Score score_ranks(std::span<const Rank> ranks, std::span<const int> ks);

// 1-based rank of `gold` in a score vector: higher scores first, ties by
// lower index.
template <typename V>
int rank_in(const std::vector<V>& scores, std::size_t gold) {
  int rank = 1;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (scores[i] > scores[gold] || (scores[i] == scores[gold] && i < gold)) ++rank;
  }
  return rank;
}

}  // namespace lacuna::eval

#endif  // LACUNA_EVAL_METRICS_HPP_
