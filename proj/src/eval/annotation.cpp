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

#include "eval/annotation.hpp"

#include <algorithm>
#include <map>

#include "common/error.hpp"
#include "common/rng.hpp"
#include "decoder/beam.hpp"
#include "eval/span_eval.hpp"

namespace lacuna::eval {
namespace {

constexpr int kDistractorAttempts = 64;

bool is_known_span(const corpus::Document& doc, std::size_t begin, std::size_t end) {
  const auto locations = doc.sign_locations();
  if (begin >= end || end > locations.size()) return false;
  for (std::size_t i = begin; i < end; ++i) {
    if (doc.sign_at(locations[i]).is_gap) return false;
  }
  return true;
}

}  // namespace

std::string_view provenance_name(Provenance p) {
  switch (p) {
    case Provenance::kModel: return "model";
    case Provenance::kGold: return "gold";
    case Provenance::kDistractor: return "distractor";
  }
  return "model";
}

Provenance parse_provenance(std::string_view text) {
  if (text == "model") return Provenance::kModel;
  if (text == "gold") return Provenance::kGold;
  if (text == "distractor") return Provenance::kDistractor;
  fail(ErrorCode::kCorruptFile, "unknown provenance " + std::string(text));
}

AnnotationInstance generate_annotation_instance(const model::MaskedPredictor& predictor,
                                                const tokenizer::Vocabulary& vocab,
                                                const corpus::Document& doc,
                                                const corpus::GapRun& gap,
                                                std::span<const corpus::Document> pool,
                                                std::uint64_t seed,
                                                const decoder::DecodeOptions& options) {
  const std::size_t begin = gap.start;
  const std::size_t end = gap.start + gap.length;
  if (!is_known_span(doc, begin, end)) {
    fail(ErrorCode::kInvalidArgument, "annotation gaps must cover known signs");
  }
  const std::string gold = corpus::render_span(doc, begin, end);

  decoder::DecodeOptions decode = options;
  decode.beam_width = std::max(decode.beam_width, static_cast<int>(kModelOptions) + 3);
  const decoder::GapQuery query =
      decoder::make_query(vocab, doc, begin, end, decode, predictor.max_seq_len());
  const std::vector<decoder::Prediction> predictions = decoder::complete_gap(predictor, vocab, query);

  AnnotationInstance inst;
  inst.instance_id = doc.id + ":" + std::to_string(gap.start) + ":" + std::to_string(gap.length);
  inst.doc_id = doc.id;
  inst.genre = doc.genre;
  inst.context = corpus::render_with_gap(doc, begin, end, kContextSigns);
  inst.gap = gap;
  inst.shuffle_seed = seed;

  std::vector<std::string> model_options;
  for (const decoder::Prediction& p : predictions) {
    if (p.surface == gold) {
      inst.model_predicted_gold = true;
      continue;
    }
    if (std::find(model_options.begin(), model_options.end(), p.surface) != model_options.end()) {
      continue;
    }
    model_options.push_back(p.surface);
    if (model_options.size() == kModelOptions) break;
  }
  if (model_options.size() < kModelOptions) {
    fail(ErrorCode::kNoValidCompletion, "beam produced fewer than three usable predictions");
  }

  // Uniform over all length-matched known runs in other documents.
  std::vector<corpus::Document> others;
  for (const corpus::Document& d : pool) {
    if (d.id != doc.id) others.push_back(d);
  }
  const std::vector<SpanRef> spans = known_spans(others, static_cast<int>(gap.length));
  if (spans.empty()) {
    fail(ErrorCode::kDistractorUnavailable,
         "no other document has " + std::to_string(gap.length) + " consecutive known signs");
  }
  Rng pick(Rng::mix(seed, 0xd157ULL));
  std::string distractor;
  for (int attempt = 0; attempt < kDistractorAttempts; ++attempt) {
    const SpanRef& ref = spans[pick.uniform(spans.size())];
    std::string text = corpus::render_span(others[ref.doc], ref.begin, ref.begin + gap.length);
    if (text != gold &&
        std::find(model_options.begin(), model_options.end(), text) == model_options.end()) {
      distractor = std::move(text);
      break;
    }
  }
  if (distractor.empty()) {
    fail(ErrorCode::kDistractorUnavailable, "every sampled distractor duplicated another option");
  }

  std::array<std::size_t, kOptionCount> order = {0, 1, 2, 3, 4};
  Rng shuffle(seed);
  shuffle.shuffle(std::span<std::size_t>(order));
  const std::array<std::string, kOptionCount> texts = {model_options[0], model_options[1],
                                                       model_options[2], gold, distractor};
  const std::array<Provenance, kOptionCount> kinds = {Provenance::kModel, Provenance::kModel,
                                                      Provenance::kModel, Provenance::kGold,
                                                      Provenance::kDistractor};
  for (std::size_t slot = 0; slot < kOptionCount; ++slot) {
    inst.options[slot] = texts[order[slot]];
    inst.provenance[slot] = kinds[order[slot]];
  }
  return inst;
}

std::vector<AnnotationInstance> generate_annotation_instances(
    const model::MaskedPredictor& predictor, const tokenizer::Vocabulary& vocab,
    std::span<const corpus::Document> docs, std::span<const corpus::Document> pool,
    std::size_t count, std::span<const int> lengths, std::uint64_t seed,
    const decoder::DecodeOptions& options) {
  if (lengths.empty()) fail(ErrorCode::kInvalidArgument, "no span lengths");
  std::map<int, std::vector<SpanRef>> candidates;
  std::map<int, std::size_t> cursor;
  for (int length : lengths) {
    if (length < 1) fail(ErrorCode::kInvalidArgument, "span lengths must be positive");
    if (candidates.count(length)) continue;
    auto spans = known_spans(docs, length);
    Rng rng(Rng::mix(seed, static_cast<std::uint64_t>(length)));
    rng.shuffle(std::span<SpanRef>(spans));
    candidates[length] = std::move(spans);
  }
  std::vector<AnnotationInstance> out;
  std::size_t i = 0;
  std::size_t exhausted = 0;
  while (out.size() < count && exhausted < lengths.size()) {
    const int length = lengths[i % lengths.size()];
    ++i;
    auto& spans = candidates[length];
    std::size_t& at = cursor[length];
    bool made = false;
    while (at < spans.size() && !made) {
      const SpanRef ref = spans[at++];
      try {
        out.push_back(generate_annotation_instance(
            predictor, vocab, docs[ref.doc], {ref.begin, static_cast<std::size_t>(length)}, pool,
            Rng::mix(seed, out.size()), options));
        made = true;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kNoValidCompletion) throw;
      }
    }
    exhausted = made ? 0 : exhausted + 1;
  }
  return out;
}

records::Json instance_to_json(const AnnotationInstance& inst) {
  return {{"instance_id", inst.instance_id},
          {"doc_id", inst.doc_id},
          {"genre", corpus::genre_name(inst.genre)},
          {"context_window", inst.context},
          {"gap", {{"start", inst.gap.start}, {"length", inst.gap.length}}},
          {"options", inst.options}};
}

records::Json provenance_to_json(const AnnotationInstance& inst) {
  records::Json kinds = records::Json::array();
  for (Provenance p : inst.provenance) kinds.push_back(provenance_name(p));
  return {{"instance_id", inst.instance_id},
          {"provenance", kinds},
          {"model_predicted_gold", inst.model_predicted_gold},
          {"shuffle_seed", inst.shuffle_seed}};
}

std::vector<AnnotationInstance> instances_from_json(const std::vector<records::Json>& blind,
                                                    const std::vector<records::Json>& sidecar) {
  std::map<std::string, const records::Json*> hidden;
  for (const records::Json& s : sidecar) hidden[s.at("instance_id").get<std::string>()] = &s;
  std::vector<AnnotationInstance> out;
  try {
    for (const records::Json& b : blind) {
      AnnotationInstance inst;
      inst.instance_id = b.at("instance_id").get<std::string>();
      inst.doc_id = b.value("doc_id", "");
      inst.genre = corpus::parse_genre(b.value("genre", "other"));
      inst.context = b.at("context_window").get<std::string>();
      inst.gap.start = b.at("gap").at("start").get<std::size_t>();
      inst.gap.length = b.at("gap").at("length").get<std::size_t>();
      const auto options = b.at("options").get<std::vector<std::string>>();
      if (options.size() != kOptionCount) fail(ErrorCode::kCorruptFile, "instance needs 5 options");
      std::copy(options.begin(), options.end(), inst.options.begin());
      auto it = hidden.find(inst.instance_id);
      if (it == hidden.end()) {
        fail(ErrorCode::kCorruptFile, "no provenance for instance " + inst.instance_id);
      }
      const records::Json& h = *it->second;
      const auto kinds = h.at("provenance").get<std::vector<std::string>>();
      if (kinds.size() != kOptionCount) fail(ErrorCode::kCorruptFile, "provenance needs 5 entries");
      for (std::size_t i = 0; i < kOptionCount; ++i) inst.provenance[i] = parse_provenance(kinds[i]);
      inst.model_predicted_gold = h.value("model_predicted_gold", false);
      inst.shuffle_seed = h.value("shuffle_seed", std::uint64_t{0});
      out.push_back(std::move(inst));
    }
  } catch (const records::Json::exception& e) {
    fail(ErrorCode::kCorruptFile, std::string("bad instance record: ") + e.what());
  }
  return out;
}

std::string sidecar_path(const std::string& path) { return path + ".provenance"; }

void save_instances(const std::string& path, std::span<const AnnotationInstance> instances) {
  std::vector<records::Json> blind;
  std::vector<records::Json> hidden;
  for (const AnnotationInstance& inst : instances) {
    blind.push_back(instance_to_json(inst));
    hidden.push_back(provenance_to_json(inst));
  }
  records::write_lines(path, blind);
  records::write_lines(sidecar_path(path), hidden);
}

std::vector<AnnotationInstance> load_instances(const std::string& path) {
  return instances_from_json(records::read_lines(path), records::read_lines(sidecar_path(path)));
}

records::Json label_to_json(const AnnotationLabel& label) {
  return {{"annotator_id", label.annotator_id},
          {"instance_id", label.instance_id},
          {"judgments", label.judgments}};
}

AnnotationLabel label_from_json(const records::Json& json) {
  AnnotationLabel label;
  try {
    label.annotator_id = json.at("annotator_id").get<std::string>();
    label.instance_id = json.at("instance_id").get<std::string>();
    const auto judgments = json.at("judgments").get<std::vector<bool>>();
    if (judgments.size() != kOptionCount) {
      fail(ErrorCode::kInvalidArgument, "a label needs exactly 5 judgments");
    }
    std::copy(judgments.begin(), judgments.end(), label.judgments.begin());
  } catch (const records::Json::exception& e) {
    fail(ErrorCode::kInvalidArgument, std::string("bad label: ") + e.what());
  }
  if (label.annotator_id.empty()) fail(ErrorCode::kInvalidArgument, "annotator_id is required");
  if (label.instance_id.empty()) fail(ErrorCode::kInvalidArgument, "instance_id is required");
  return label;
}

}  // namespace lacuna::eval
