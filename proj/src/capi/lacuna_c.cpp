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

#include "lacuna/lacuna.h"

#include <chrono>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <memory>
#include <new>
#include <string>

#include "app/label_store.hpp"
#include "app/service.hpp"
#include "app/suggest.hpp"
#include "common/error.hpp"
#include "common/hash.hpp"
#include "common/records.hpp"
#include "corpus/stats.hpp"
#include "corpus/synthetic.hpp"
#include "eval/agreement.hpp"
#include "eval/annotation.hpp"
#include "eval/span_eval.hpp"
#include "eval/token_eval.hpp"
#include "model/checkpoint.hpp"
#include "model/trainer.hpp"
#include "model/windows.hpp"
#include "tokenizer/wordpiece.hpp"

struct lacuna_model {
  std::shared_ptr<const lacuna::app::Engine> engine;
};

struct lacuna_server {
  std::unique_ptr<lacuna::app::Service> service;
  int port = 0;
};

namespace {

using lacuna::ErrorCode;
using lacuna::fail;
using lacuna::records::Json;

static_assert(static_cast<int>(ErrorCode::kInvalidArgument) == LACUNA_INVALID_ARGUMENT);
static_assert(static_cast<int>(ErrorCode::kCorruptFile) == LACUNA_CORRUPT_FILE);
static_assert(static_cast<int>(ErrorCode::kStoreUnavailable) == LACUNA_STORE_UNAVAILABLE);

thread_local std::string g_last_error;

template <typename Body>
lacuna_status guard(Body&& body) {
  try {
    body();
    g_last_error.clear();
    return LACUNA_OK;
  } catch (const lacuna::Error& e) {
    g_last_error = e.what();
    return static_cast<lacuna_status>(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return LACUNA_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return LACUNA_INTERNAL;
  }
}

void put(char** out, const std::string& value) {
  if (!out) return;
  char* copy = static_cast<char*>(std::malloc(value.size() + 1));
  if (!copy) throw std::bad_alloc();
  std::memcpy(copy, value.c_str(), value.size() + 1);
  *out = copy;
}

std::string need(const char* text, const char* what) {
  if (!text || !*text) fail(ErrorCode::kInvalidArgument, std::string(what) + " is required");
  return text;
}

Json parse_options(const char* text) {
  if (!text || !*text) return Json::object();
  Json json = Json::parse(text, nullptr, false);
  if (json.is_discarded() || !json.is_object()) {
    fail(ErrorCode::kInvalidArgument, "options must be a JSON object");
  }
  return json;
}

template <typename T>
T option(const Json& options, const char* key, T fallback) {
  if (!options.contains(key)) return fallback;
  try {
    return options.at(key).get<T>();
  } catch (const Json::exception&) {
    fail(ErrorCode::kInvalidArgument, std::string("bad option ") + key);
  }
}

const lacuna::app::Engine& engine_of(const lacuna_model* model) {
  if (!model || !model->engine) fail(ErrorCode::kInvalidArgument, "model handle is null");
  return *model->engine;
}

std::vector<lacuna::corpus::Document> documents(const char* path) {
  auto docs = lacuna::corpus::load_corpus(need(path, "corpus path"), true).documents;
  if (docs.empty()) fail(ErrorCode::kEmptyCorpus, std::string(path) + " holds no usable documents");
  return docs;
}

}  // namespace

extern "C" {

const char* lacuna_version(void) { return "1.0.0"; }

const char* lacuna_status_name(lacuna_status status) {
  if (status == LACUNA_OK) return "Ok";
  if (status == LACUNA_INTERNAL) return "Internal";
  if (status < LACUNA_INVALID_ARGUMENT || status > LACUNA_STORE_UNAVAILABLE) return "Unknown";
  return lacuna::to_string(static_cast<ErrorCode>(status)).data();
}

const char* lacuna_last_error(void) { return g_last_error.c_str(); }

void lacuna_string_free(char* s) { std::free(s); }

lacuna_status lacuna_synthesize(const char* out_path, size_t n_docs, uint64_t seed) {
  return guard([&] {
    lacuna::corpus::SyntheticOptions options;
    if (n_docs > 0) options.n_docs = n_docs;
    options.seed = seed;
    lacuna::corpus::write_raw_records(need(out_path, "output path"),
                                      lacuna::corpus::synthetic_corpus(options));
  });
}

lacuna_status lacuna_prepare(const char* in_path, const char* out_dir, double test_fraction,
                             uint64_t seed, int skip_invalid, char** report) {
  return guard([&] {
    namespace fs = std::filesystem;
    const auto loaded = lacuna::corpus::load_corpus(need(in_path, "input path"), skip_invalid != 0);
    const auto [train, test] = lacuna::corpus::split_corpus(loaded.documents, test_fraction, seed);
    const fs::path dir = need(out_dir, "output directory");
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) fail(ErrorCode::kIo, "cannot create " + dir.string());
    lacuna::corpus::write_normalized((dir / "all.jsonl").string(), loaded.documents);
    lacuna::corpus::write_normalized((dir / "train.jsonl").string(), train);
    lacuna::corpus::write_normalized((dir / "test.jsonl").string(), test);
    Json rejected = Json::array();
    for (const auto& [id, message] : loaded.rejected) {
      rejected.push_back({{"id", id}, {"error", message}});
    }
    put(report, Json{{"documents", loaded.documents.size()},
                     {"train", train.size()},
                     {"test", test.size()},
                     {"rejected", rejected},
                     {"stats", lacuna::corpus::stats_to_json(
                                   lacuna::corpus::corpus_stats(loaded.documents))}}
                    .dump());
  });
}

lacuna_status lacuna_stats(const char* corpus_path, char** json, char** table) {
  return guard([&] {
    const auto loaded = lacuna::corpus::load_corpus(need(corpus_path, "corpus path"), true);
    const auto stats = lacuna::corpus::corpus_stats(loaded.documents);
    Json out = lacuna::corpus::stats_to_json(stats);
    out["rejected"] = loaded.rejected.size();
    put(json, out.dump());
    put(table, lacuna::corpus::format_stats_table(stats));
  });
}

lacuna_status lacuna_tokenizer_train(const char* corpus_path, size_t vocab_size, uint64_t seed,
                                     const char* out_path, char** report) {
  return guard([&] {
    const auto docs = documents(corpus_path);
    const auto vocab = lacuna::tokenizer::train_wordpiece(docs, vocab_size, seed);
    vocab.save(need(out_path, "output path"));
    put(report, Json{{"size", vocab.size()},
                     {"requested", vocab_size},
                     {"base_size", lacuna::tokenizer::base_vocabulary_size(docs)},
                     {"hash", lacuna::hex64(vocab.hash())}}
                    .dump());
  });
}

lacuna_status lacuna_train(const char* corpus_path, const char* vocab_path,
                           const char* config_path, const char* out_path, int steps,
                           uint64_t seed, const char* options_json, lacuna_progress_fn progress,
                           void* user, char** summary) {
  return guard([&] {
    using namespace lacuna::model;
    const auto start = std::chrono::steady_clock::now();
    const auto docs = documents(corpus_path);
    const auto vocab = lacuna::tokenizer::Vocabulary::load(need(vocab_path, "vocabulary path"));
    const std::string out = need(out_path, "output path");
    lacuna::KeyValues file;
    if (config_path && *config_path) {
      file = lacuna::KeyValues::parse(lacuna::records::read_file(config_path));
    }
    ModelConfig config = ModelConfig::from_key_values(file);
    config.vocab_size = static_cast<int>(vocab.size());
    TrainOptions options = TrainOptions::from_key_values(file);
    if (const auto unused = file.unused_keys(); !unused.empty()) {
      fail(ErrorCode::kInvalidArgument, "unknown config key " + unused.front());
    }
    const Json extra = parse_options(options_json);
    options.batch_size = option(extra, "batch_size", options.batch_size);
    options.learning_rate = option(extra, "learning_rate", options.learning_rate);
    options.warmup_fraction = option(extra, "warmup_fraction", options.warmup_fraction);
    options.clip_norm = option(extra, "clip_norm", options.clip_norm);
    options.masking.rate = option(extra, "mask_rate", options.masking.rate);
    options.masking.delimiter_targets =
        option(extra, "mask_delimiters", options.masking.delimiter_targets);
    if (steps > 0) options.steps = steps;
    options.seed = seed;

    const auto windows = training_windows(vocab, docs, config.max_seq_len);
    const TokenClasses classes = TokenClasses::from_vocabulary(vocab, options.masking.delimiter_targets);
    Model model(config, seed);
    const auto reports = train(model, windows, classes, options, [&](const StepReport& r) {
      if (!progress) return;
      const std::string line = Json{{"step", r.step},
                                    {"loss", r.loss},
                                    {"learning_rate", r.learning_rate},
                                    {"gradient_norm", r.gradient_norm},
                                    {"tokens_per_second", r.tokens_per_second}}
                                   .dump();
      progress(line.c_str(), user);
    });
    save_checkpoint(out, model,
                    {vocab.hash(), seed, static_cast<std::uint64_t>(reports.size())});
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    put(summary, Json{{"steps", reports.size()},
                      {"initial_loss", reports.front().loss},
                      {"final_loss", reports.back().loss},
                      {"parameters", model.parameter_count()},
                      {"windows", windows.size()},
                      {"seconds", seconds},
                      {"checkpoint", out}}
                     .dump());
  });
}

lacuna_status lacuna_model_open(const char* checkpoint_path, const char* vocab_path,
                                lacuna_model** out) {
  return guard([&] {
    if (!out) fail(ErrorCode::kInvalidArgument, "output handle is null");
    *out = nullptr;
    auto engine = lacuna::app::Engine::open(need(checkpoint_path, "checkpoint path"),
                                            need(vocab_path, "vocabulary path"));
    *out = new lacuna_model{std::move(engine)};
  });
}

void lacuna_model_close(lacuna_model* model) { delete model; }

lacuna_status lacuna_model_info(const lacuna_model* model, char** json) {
  return guard([&] {
    const auto& engine = engine_of(model);
    put(json, Json{{"model_hash", engine.model_hash},
                   {"vocab_hash", lacuna::hex64(engine.vocab.hash())},
                   {"parameters", engine.model->parameter_count()},
                   {"step", engine.info.step},
                   {"seed", engine.info.seed},
                   {"config", engine.model->config().to_text()}}
                  .dump());
  });
}

lacuna_status lacuna_suggest(const lacuna_model* model, const char* request, char** response) {
  return guard([&] {
    const auto& engine = engine_of(model);
    const Json body = Json::parse(need(request, "request"), nullptr, false);
    if (body.is_discarded()) fail(ErrorCode::kInvalidArgument, "request is not valid JSON");
    const auto parsed = lacuna::app::parse_suggest_request(body, 5, 6);
    put(response, lacuna::app::suggest(engine, parsed).dump());
  });
}

lacuna_status lacuna_eval_tokens(const lacuna_model* model, const char* corpus_path,
                                 const char* options, char** report, char** table) {
  return guard([&] {
    const auto& engine = engine_of(model);
    const Json o = parse_options(options);
    lacuna::eval::TokenEvalOptions opts;
    opts.mask_rate = option(o, "mask_rate", opts.mask_rate);
    opts.ks = option(o, "ks", opts.ks);
    opts.seed = option(o, "seed", opts.seed);
    const auto docs = documents(corpus_path);
    const auto result = lacuna::eval::evaluate_token_level(*engine.model, engine.vocab, docs, opts);
    put(report, lacuna::eval::report_to_json(result).dump());
    put(table, lacuna::eval::format_report_table(result));
  });
}

lacuna_status lacuna_eval_spans(const lacuna_model* model, const char* corpus_path,
                                const char* options, char** curve, char** table,
                                char** plot_csv) {
  return guard([&] {
    const auto& engine = engine_of(model);
    const Json o = parse_options(options);
    lacuna::eval::SpanEvalOptions opts;
    opts.lengths = option(o, "lengths", opts.lengths);
    opts.ks = option(o, "ks", opts.ks);
    opts.max_spans = option(o, "max_spans", opts.max_spans);
    opts.min_spans = option(o, "min_spans", opts.min_spans);
    opts.max_tokens_per_sign = option(o, "max_tokens_per_sign", opts.max_tokens_per_sign);
    opts.seed = option(o, "seed", opts.seed);
    const auto docs = documents(corpus_path);
    const auto result = lacuna::eval::evaluate_span_level(*engine.model, engine.vocab, docs, opts);
    put(curve, lacuna::eval::curve_to_json(result).dump());
    put(table, lacuna::eval::format_curve_table(result));
    put(plot_csv, lacuna::eval::curve_plot_data(result));
  });
}

lacuna_status lacuna_annotate_generate(const lacuna_model* model, const char* corpus_path,
                                       const char* pool_path, const char* options,
                                       const char* out_path, char** summary) {
  return guard([&] {
    const auto& engine = engine_of(model);
    const Json o = parse_options(options);
    const auto count = option<std::size_t>(o, "count", 100);
    const auto lengths = option<std::vector<int>>(o, "lengths", {1, 2, 3, 4});
    const auto seed = option<std::uint64_t>(o, "seed", 1);
    lacuna::decoder::DecodeOptions decode;
    decode.beam_width = option(o, "k", decode.beam_width);
    decode.max_tokens_per_sign = option(o, "max_tokens_per_sign", decode.max_tokens_per_sign);
    const auto docs = documents(corpus_path);
    const auto pool = pool_path && *pool_path ? documents(pool_path) : docs;
    const auto instances = lacuna::eval::generate_annotation_instances(
        *engine.model, engine.vocab, docs, pool, count, lengths, seed, decode);
    const std::string out = need(out_path, "output path");
    lacuna::eval::save_instances(out, instances);
    std::size_t predicted_gold = 0;
    for (const auto& inst : instances) predicted_gold += inst.model_predicted_gold;
    put(summary, Json{{"instances", instances.size()},
                      {"requested", count},
                      {"model_predicted_gold", predicted_gold},
                      {"path", out},
                      {"sidecar", lacuna::eval::sidecar_path(out)}}
                     .dump());
  });
}

lacuna_status lacuna_annotate_score(const char* instances_path, const char* labels_path,
                                    char** report, char** table) {
  return guard([&] {
    const auto instances = lacuna::eval::load_instances(need(instances_path, "instances path"));
    const auto labels = lacuna::app::LabelStore::load(need(labels_path, "labels path"));
    const auto result = lacuna::eval::score_annotations(instances, labels);
    put(report, lacuna::eval::agreement_to_json(result).dump());
    put(table, lacuna::eval::format_agreement(result));
  });
}

lacuna_status lacuna_server_start(const char* config_path, const char* overrides,
                                  lacuna_server** out) {
  return guard([&] {
    if (!out) fail(ErrorCode::kInvalidArgument, "output handle is null");
    *out = nullptr;
    lacuna::app::ServiceConfig config;
    if (config_path && *config_path) config = lacuna::app::ServiceConfig::from_file(config_path);
    config.apply_environment();
    const Json o = parse_options(overrides);
    lacuna::KeyValues values;
    for (const auto& [key, value] : o.items()) {
      values.set(key, value.is_string() ? value.get<std::string>() : value.dump());
    }
    config.apply(values);
    auto server = std::make_unique<lacuna_server>();
    server->service = std::make_unique<lacuna::app::Service>(config);
    server->port = server->service->start();
    *out = server.release();
  });
}

int lacuna_server_port(const lacuna_server* server) { return server ? server->port : -1; }

lacuna_status lacuna_server_wait_ready(lacuna_server* server) {
  return guard([&] {
    if (!server) fail(ErrorCode::kInvalidArgument, "server handle is null");
    server->service->wait_ready();
  });
}

void lacuna_server_wait(lacuna_server* server) {
  if (server) server->service->wait();
}

void lacuna_server_stop(lacuna_server* server) {
  if (server) server->service->stop();
}

void lacuna_server_free(lacuna_server* server) { delete server; }

}  // extern "C"
