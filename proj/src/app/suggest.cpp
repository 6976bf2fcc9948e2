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

#include "app/suggest.hpp"

#include <chrono>

#include "common/error.hpp"
#include "common/hash.hpp"
#include "decoder/beam.hpp"

namespace lacuna::app {

std::shared_ptr<const Engine> Engine::open(const std::string& checkpoint,
                                           const std::string& vocabulary) {
  auto engine = std::make_shared<Engine>();
  engine->vocab = tokenizer::Vocabulary::load(vocabulary);
  model::LoadedCheckpoint loaded = model::load_checkpoint(checkpoint, engine->vocab.hash());
  if (loaded.model->vocab_size() != static_cast<int>(engine->vocab.size())) {
    fail(ErrorCode::kVocabularyMismatch, "model and vocabulary sizes differ");
  }
  engine->model = std::move(loaded.model);
  engine->info = loaded.info;
  engine->model_hash = loaded.content_hash;
  return engine;
}

SuggestRequest parse_suggest_request(const records::Json& body, int default_k,
                                     int default_max_tokens_per_sign) {
  if (!body.is_object()) fail(ErrorCode::kInvalidArgument, "request body must be an object");
  SuggestRequest request;
  request.k = default_k;
  request.max_tokens_per_sign = default_max_tokens_per_sign;
  try {
    request.text = body.at("text").get<std::string>();
    if (body.contains("gap_index") && !body["gap_index"].is_null()) {
      request.gap_index = body["gap_index"].get<std::size_t>();
    }
    if (body.contains("k")) request.k = body["k"].get<int>();
    if (body.contains("max_tokens_per_sign")) {
      request.max_tokens_per_sign = body["max_tokens_per_sign"].get<int>();
    }
  } catch (const records::Json::exception& e) {
    fail(ErrorCode::kInvalidArgument, std::string("bad suggest request: ") + e.what());
  }
  if (request.k < 1) fail(ErrorCode::kInvalidArgument, "k must be at least 1");
  if (request.max_tokens_per_sign < 1) {
    fail(ErrorCode::kInvalidArgument, "max_tokens_per_sign must be at least 1");
  }
  return request;
}

records::Json suggest(const Engine& engine, const SuggestRequest& request) {
  const auto start = std::chrono::steady_clock::now();
  decoder::DecodeOptions options;
  options.beam_width = request.k;
  options.max_tokens_per_sign = request.max_tokens_per_sign;
  const auto gaps =
      decoder::queries_from_text(engine.vocab, request.text, options, engine.model->max_seq_len());
  const std::size_t index = request.gap_index.value_or(0);
  if (index >= gaps.size()) {
    fail(ErrorCode::kInvalidArgument, "text has " + std::to_string(gaps.size()) +
                                          " gaps, no gap " + std::to_string(index));
  }
  const auto predictions = decoder::complete_gap(*engine.model, engine.vocab, gaps[index].query);

  records::Json suggestions = records::Json::array();
  for (const decoder::Prediction& p : predictions) {
    suggestions.push_back({{"surface", p.surface},
                           {"signs", p.signs},
                           {"probability", p.probability},
                           {"logprob", p.logprob}});
  }
  const double elapsed =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return {{"gap_index", index},
          {"gap", {{"start", gaps[index].run.start}, {"length", gaps[index].run.length}}},
          {"n_gaps", gaps.size()},
          {"suggestions", suggestions},
          {"model_hash", engine.model_hash},
          {"vocab_hash", hex64(engine.vocab.hash())},
          {"elapsed_ms", elapsed}};
}

}  // namespace lacuna::app
