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

#ifndef LACUNA_EVAL_SPAN_EVAL_HPP_
#define LACUNA_EVAL_SPAN_EVAL_HPP_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "common/records.hpp"
#include "corpus/document.hpp"
#include "decoder/query.hpp"
#include "model/predictor.hpp"
#include "tokenizer/vocabulary.hpp"

namespace lacuna::eval {

struct SpanEvalOptions {
  std::vector<int> lengths = {1, 2, 3, 4};
  std::vector<int> ks = {1, 5};
  std::size_t max_spans = 100;  // sampled per length
  std::size_t min_spans = 20;   // fewer and the point is dropped
  int max_tokens_per_sign = 6;
  std::uint64_t seed = 1;
};

struct SpanPoint {
  int length = 0;
  std::size_t n = 0;
  std::map<int, double> hit_at;
};

struct SpanCurve {
  std::string unit = "signs";
  std::vector<SpanPoint> points;
  std::vector<std::string> warnings;
};

struct SpanRef {
  std::size_t doc = 0;
  std::size_t begin = 0;
};

// Start of every run of `length` consecutive known signs, document order.
std::vector<SpanRef> known_spans(std::span<const corpus::Document> docs, int length);

// For each length, samples spans of known signs from the documents, hides
// them and decodes with beam width max(ks). A span is a hit at k when its
// gold text equals one of the first k predictions.
// Throws Error(kInvalidArgument) on an empty length or k list or a value
// below 1, and Error(kInsufficientSpans) when every point was dropped.
SpanCurve evaluate_span_level(const model::MaskedPredictor& predictor,
                              const tokenizer::Vocabulary& vocab,
                              std::span<const corpus::Document> docs,
                              const SpanEvalOptions& options);

records::Json curve_to_json(const SpanCurve& curve);
std::string format_curve_table(const SpanCurve& curve);
// "length,k,value" rows with a header line.
std::string curve_plot_data(const SpanCurve& curve);

}  // namespace lacuna::eval

#endif  // LACUNA_EVAL_SPAN_EVAL_HPP_
