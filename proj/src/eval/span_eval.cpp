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

#include "eval/span_eval.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "common/error.hpp"
#include "common/rng.hpp"
#include "decoder/beam.hpp"

namespace lacuna::eval {
std::vector<SpanRef> known_spans(std::span<const corpus::Document> docs, int length) {
  std::vector<SpanRef> out;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    const auto locations = docs[d].sign_locations();
    std::size_t run = 0;
    for (std::size_t i = 0; i < locations.size(); ++i) {
      run = docs[d].sign_at(locations[i]).is_gap ? 0 : run + 1;
      if (run >= static_cast<std::size_t>(length)) {
        out.push_back({d, i + 1 - static_cast<std::size_t>(length)});
      }
    }
  }
  return out;
}

SpanCurve evaluate_span_level(const model::MaskedPredictor& predictor,
                              const tokenizer::Vocabulary& vocab,
                              std::span<const corpus::Document> docs,
                              const SpanEvalOptions& options) {
  if (options.lengths.empty() || options.ks.empty()) {
    fail(ErrorCode::kInvalidArgument, "need at least one length and one k");
  }
  for (int v : options.lengths) {
    if (v < 1) fail(ErrorCode::kInvalidArgument, "span lengths must be positive");
  }
  for (int v : options.ks) {
    if (v < 1) fail(ErrorCode::kInvalidArgument, "k must be at least 1");
  }
  const int beam = *std::max_element(options.ks.begin(), options.ks.end());
  decoder::DecodeOptions decode;
  decode.beam_width = beam;
  decode.max_tokens_per_sign = options.max_tokens_per_sign;

  SpanCurve curve;
  for (int length : options.lengths) {
    std::vector<SpanRef> spans = known_spans(docs, length);
    Rng rng(Rng::mix(options.seed, static_cast<std::uint64_t>(length)));
    rng.shuffle(std::span<SpanRef>(spans));
    if (spans.size() > options.max_spans) spans.resize(options.max_spans);
    if (spans.size() < options.min_spans || spans.empty()) {
      curve.warnings.push_back("length " + std::to_string(length) + ": only " +
                               std::to_string(spans.size()) + " spans, point omitted");
      continue;
    }
    std::map<int, std::size_t> hits;
    for (const SpanRef& ref : spans) {
      const corpus::Document& doc = docs[ref.doc];
      const std::size_t end = ref.begin + static_cast<std::size_t>(length);
      const std::string gold = corpus::render_span(doc, ref.begin, end);
      const decoder::GapQuery query =
          decoder::make_query(vocab, doc, ref.begin, end, decode, predictor.max_seq_len());
      std::vector<decoder::Prediction> predictions;
      try {
        predictions = decoder::complete_gap(predictor, vocab, query);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kNoValidCompletion) throw;
      }
      std::size_t found = predictions.size();
      for (std::size_t i = 0; i < predictions.size(); ++i) {
        if (predictions[i].surface == gold) {
          found = i;
          break;
        }
      }
      for (int k : options.ks) hits[k] += found < static_cast<std::size_t>(k);
    }
    SpanPoint point;
    point.length = length;
    point.n = spans.size();
    for (int k : options.ks) {
      point.hit_at[k] = static_cast<double>(hits[k]) / static_cast<double>(spans.size());
    }
    curve.points.push_back(std::move(point));
  }
  if (curve.points.empty()) {
    fail(ErrorCode::kInsufficientSpans, "no span length had at least " +
                                            std::to_string(options.min_spans) + " spans");
  }
  return curve;
}

records::Json curve_to_json(const SpanCurve& curve) {
  records::Json points = records::Json::array();
  for (const SpanPoint& p : curve.points) {
    records::Json hits = records::Json::object();
    for (const auto& [k, v] : p.hit_at) hits[std::to_string(k)] = v;
    points.push_back({{"length", p.length}, {"n", p.n}, {"hit_at", hits}});
  }
  return {{"unit", curve.unit}, {"points", points}, {"warnings", curve.warnings}};
}

std::string format_curve_table(const SpanCurve& curve) {
  std::ostringstream out;
  char cell[64];
  std::snprintf(cell, sizeof(cell), "%-8s %6s", curve.unit.c_str(), "n");
  out << cell;
  if (!curve.points.empty()) {
    for (const auto& [k, v] : curve.points.front().hit_at) {
      std::snprintf(cell, sizeof(cell), " %7s", ("Hit@" + std::to_string(k)).c_str());
      out << cell;
    }
  }
  out << '\n';
  for (const SpanPoint& p : curve.points) {
    std::snprintf(cell, sizeof(cell), "%-8d %6zu", p.length, p.n);
    out << cell;
    for (const auto& [k, v] : p.hit_at) {
      std::snprintf(cell, sizeof(cell), " %7.3f", v);
      out << cell;
    }
    out << '\n';
  }
  for (const std::string& w : curve.warnings) out << "warning: " << w << '\n';
  return out.str();
}

std::string curve_plot_data(const SpanCurve& curve) {
  std::ostringstream out;
  out << "length,k,value\n";
  char row[64];
  for (const SpanPoint& p : curve.points) {
    for (const auto& [k, v] : p.hit_at) {
      std::snprintf(row, sizeof(row), "%d,%d,%.6f\n", p.length, k, v);
      out << row;
    }
  }
  return out.str();
}

}  // namespace lacuna::eval
