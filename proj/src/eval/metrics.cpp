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

#include "eval/metrics.hpp"

#include "common/error.hpp"

namespace lacuna::eval {

double mrr(std::span<const Rank> ranks) {
  if (ranks.empty()) fail(ErrorCode::kEmptyInput, "no ranks");
  double sum = 0.0;
  for (const Rank& r : ranks) {
    if (r) {
      if (*r < 1) fail(ErrorCode::kInvalidArgument, "ranks are 1-based");
      sum += 1.0 / *r;
    }
  }
  return sum / static_cast<double>(ranks.size());
}

double hit_at_k(std::span<const Rank> ranks, int k) {
  if (ranks.empty()) fail(ErrorCode::kEmptyInput, "no ranks");
  if (k < 1) fail(ErrorCode::kInvalidArgument, "k must be at least 1");
  std::size_t hits = 0;
  for (const Rank& r : ranks) hits += r && *r <= k;
  return static_cast<double>(hits) / static_cast<double>(ranks.size());
}

Score score_ranks(std::span<const Rank> ranks, std::span<const int> ks) {
  Score s;
  s.n = ranks.size();
  s.mrr = mrr(ranks);
  for (int k : ks) s.hit_at[k] = hit_at_k(ranks, k);
  return s;
}

}  // namespace lacuna::eval
