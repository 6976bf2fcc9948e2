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

#ifndef LACUNA_EVAL_ANNOTATION_HPP_
#define LACUNA_EVAL_ANNOTATION_HPP_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "common/records.hpp"
#include "corpus/document.hpp"
#include "decoder/query.hpp"
#include "model/predictor.hpp"
#include "tokenizer/vocabulary.hpp"

namespace lacuna::eval {

inline constexpr std::size_t kOptionCount = 5;
inline constexpr std::size_t kModelOptions = 3;
inline constexpr std::size_t kContextSigns = 30;

enum class Provenance { kModel, kGold, kDistractor };

std::string_view provenance_name(Provenance p);
Provenance parse_provenance(std::string_view text);

struct AnnotationInstance {
  std::string instance_id;
  std::string doc_id;
  corpus::Genre genre = corpus::Genre::kOther;
  std::string context;  // the gap shown as an x run
  corpus::GapRun gap;
  std::array<std::string, kOptionCount> options;
  // Hidden from annotators; stored in the sidecar file.
  std::array<Provenance, kOptionCount> provenance{};
  bool model_predicted_gold = false;
  std::uint64_t shuffle_seed = 0;
};

struct AnnotationLabel {
  std::string annotator_id;
  std::string instance_id;
  std::array<bool, kOptionCount> judgments{};  // true = plausible, in option order

  bool operator==(const AnnotationLabel&) const = default;
};

// Builds one instance for signs [gap.start, gap.start + gap.length) of
// `doc`: three model predictions that differ from the gold text, the gold
// text and a distractor, shuffled by `seed`. When the model also produced
// the gold text, the next prediction takes its place and
// model_predicted_gold is set. The distractor is a uniformly drawn run of
// gap.length known signs from another document of `pool`.
// Throws Error(kDistractorUnavailable) when no such run exists and
// Error(kNoValidCompletion) when the beam yields fewer than three usable
// predictions.
AnnotationInstance generate_annotation_instance(const model::MaskedPredictor& predictor,
                                                const tokenizer::Vocabulary& vocab,
                                                const corpus::Document& doc,
                                                const corpus::GapRun& gap,
                                                std::span<const corpus::Document> pool,
                                                std::uint64_t seed,
                                                const decoder::DecodeOptions& options = {});

// `count` instances over random known spans of the given lengths in `docs`,
// cycling through the lengths.
std::vector<AnnotationInstance> generate_annotation_instances(
    const model::MaskedPredictor& predictor, const tokenizer::Vocabulary& vocab,
    std::span<const corpus::Document> docs, std::span<const corpus::Document> pool,
    std::size_t count, std::span<const int> lengths, std::uint64_t seed,
    const decoder::DecodeOptions& options = {});

// Blind record: everything annotators may see.
records::Json instance_to_json(const AnnotationInstance& instance);
// Provenance record for the sidecar file.
records::Json provenance_to_json(const AnnotationInstance& instance);
// Rebuilds instances from blind records plus matching sidecar records.
// Throws Error(kCorruptFile) when the two do not line up.
std::vector<AnnotationInstance> instances_from_json(const std::vector<records::Json>& blind,
                                                    const std::vector<records::Json>& sidecar);

// `path` gets the blind records, `path` + ".provenance" the sidecar.
void save_instances(const std::string& path, std::span<const AnnotationInstance> instances);
std::vector<AnnotationInstance> load_instances(const std::string& path);
std::string sidecar_path(const std::string& path);

records::Json label_to_json(const AnnotationLabel& label);
// Throws Error(kInvalidArgument) on a missing field or not exactly five
// judgments.
AnnotationLabel label_from_json(const records::Json& json);

}  // namespace lacuna::eval

#endif  // LACUNA_EVAL_ANNOTATION_HPP_
