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

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lacuna/lacuna.h"

namespace {

using Json = nlohmann::ordered_json;

constexpr int kDomainError = 1;
constexpr int kUsageError = 2;

// Owns a string handed out by the library.
struct Owned {
  char* text = nullptr;
  ~Owned() { lacuna_string_free(text); }
  std::string str() const { return text ? text : ""; }
  Json json() const { return Json::parse(str()); }
};

struct ModelHandle {
  lacuna_model* handle = nullptr;
  ~ModelHandle() { lacuna_model_close(handle); }
};

int report(lacuna_status status) {
  if (status == LACUNA_OK) return 0;
  std::cerr << "error: " << lacuna_last_error() << '\n';
  return status == LACUNA_INVALID_ARGUMENT ? kUsageError : kDomainError;
}

std::string format_suggestions(const Json& response) {
  std::string out;
  char line[512];
  std::snprintf(line, sizeof(line), "gap %zu of %zu, %zu signs\n",
                response["gap_index"].get<std::size_t>() + 1, response["n_gaps"].get<std::size_t>(),
                response["gap"]["length"].get<std::size_t>());
  out += line;
  std::snprintf(line, sizeof(line), "%4s  %11s  %s\n", "rank", "probability", "completion");
  out += line;
  int rank = 0;
  for (const Json& s : response["suggestions"]) {
    std::snprintf(line, sizeof(line), "%4d  %11.6f  %s\n", ++rank, s["probability"].get<double>(),
                  s["surface"].get<std::string>().c_str());
    out += line;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Restore missing signs in transliterated cuneiform with a small masked language model"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(lacuna_version()));

  std::string format = "table";
  auto add_format = [&format](CLI::App* cmd) {
    cmd->add_option("--format", format, "table or records")
        ->check(CLI::IsMember({"table", "records"}));
  };
  std::string ckpt;
  std::string vocab;
  auto add_model = [&](CLI::App* cmd) {
    cmd->add_option("--ckpt", ckpt, "checkpoint file")->envname("LACUNA_CHECKPOINT")->required();
    cmd->add_option("--vocab", vocab, "vocabulary file")->envname("LACUNA_VOCAB")->required();
  };
  std::uint64_t seed = 1;

  // synth
  std::string synth_out;
  std::size_t synth_docs = 400;
  auto* synth = app.add_subcommand("synth", "Write the synthetic cyclic-language corpus");
  synth->add_option("--out", synth_out, "raw record file")->required();
  synth->add_option("--docs", synth_docs, "number of documents");
  synth->add_option("--seed", seed);

  // prepare
  std::string prep_in;
  std::string prep_out;
  double test_fraction = 0.2;
  bool skip_invalid = false;
  auto* prepare = app.add_subcommand("prepare", "Normalize raw records and split train/test");
  prepare->add_option("--in", prep_in, "raw record file")->required();
  prepare->add_option("--out-dir", prep_out, "output directory")->required();
  prepare->add_option("--test-fraction", test_fraction);
  prepare->add_flag("--skip-invalid", skip_invalid, "report and skip unparsable records");
  prepare->add_option("--seed", seed);

  // stats
  std::string stats_in;
  auto* stats = app.add_subcommand("stats", "Corpus counts per genre");
  stats->add_option("--in", stats_in, "corpus file")->required();
  add_format(stats);

  // tokenizer-train
  std::string tok_corpus;
  std::string tok_out;
  std::size_t vocab_size = 4000;
  auto* tok = app.add_subcommand("tokenizer-train", "Learn a WordPiece vocabulary");
  tok->add_option("--corpus", tok_corpus)->required();
  tok->add_option("--out", tok_out, "vocabulary file")->required();
  tok->add_option("--vocab-size", vocab_size);
  tok->add_option("--seed", seed);

  // train
  std::string train_corpus;
  std::string train_config;
  std::string train_out;
  std::string train_log;
  int steps = 0;
  int batch_size = 0;
  double learning_rate = 0.0;
  auto* train = app.add_subcommand("train", "Train the masked language model");
  train->add_option("--corpus", train_corpus)->required();
  train->add_option("--vocab", vocab)->envname("LACUNA_VOCAB")->required();
  train->add_option("--config", train_config, "model and training key=value file");
  train->add_option("--out", train_out, "checkpoint file")->required();
  train->add_option("--steps", steps);
  train->add_option("--batch-size", batch_size);
  train->add_option("--learning-rate", learning_rate);
  train->add_option("--log", train_log, "progress records file (default stdout)");
  train->add_option("--seed", seed);

  // eval
  std::string eval_corpus;
  double mask_rate = 0.15;
  std::vector<int> ks;
  auto* eval = app.add_subcommand("eval", "Token-level MRR and Hit@k per genre");
  add_model(eval);
  eval->add_option("--corpus", eval_corpus, "test documents")->required();
  eval->add_option("--mask-rate", mask_rate);
  eval->add_option("--k", ks, "cutoffs, default 1 5 10")->delimiter(',');
  eval->add_option("--seed", seed);
  add_format(eval);

  // span-eval
  std::vector<int> lengths;
  std::size_t max_spans = 100;
  std::size_t min_spans = 20;
  int max_tokens_per_sign = 6;
  std::string plot_data;
  auto* span = app.add_subcommand("span-eval", "Hit@k by span length");
  add_model(span);
  span->add_option("--corpus", eval_corpus, "test documents")->required();
  span->add_option("--lengths", lengths, "default 1 2 3 4")->delimiter(',');
  span->add_option("--k", ks, "cutoffs, default 1 5")->delimiter(',');
  span->add_option("--max-spans", max_spans);
  span->add_option("--min-spans", min_spans);
  span->add_option("--max-tokens-per-sign", max_tokens_per_sign);
  span->add_option("--plot-data", plot_data, "write length,k,value rows here");
  span->add_option("--seed", seed);
  add_format(span);

  // suggest
  std::string text;
  int k = 5;
  int gap = 0;
  auto* suggest = app.add_subcommand("suggest", "Complete one x gap of a transliteration");
  add_model(suggest);
  suggest->add_option("--text", text, "transliteration with x markers")->required();
  suggest->add_option("--k", k);
  suggest->add_option("--gap", gap, "0-based gap index");
  suggest->add_option("--max-tokens-per-sign", max_tokens_per_sign);
  add_format(suggest);

  // serve
  std::string serve_config;
  std::string serve_corpus;
  std::string serve_addr;
  std::string serve_labels;
  std::string serve_instances;
  auto* serve = app.add_subcommand("serve", "Run the /v1 HTTP service");
  serve->add_option("--config", serve_config, "key=value service config");
  serve->add_option("--ckpt", ckpt);
  serve->add_option("--vocab", vocab);
  serve->add_option("--corpus", serve_corpus);
  serve->add_option("--addr", serve_addr, "host:port");
  serve->add_option("--labels", serve_labels);
  serve->add_option("--instances", serve_instances);

  // annotate-generate
  std::string ann_pool;
  std::string ann_out;
  std::size_t count = 100;
  auto* generate = app.add_subcommand("annotate-generate", "Build blind 5-option annotation instances");
  add_model(generate);
  generate->add_option("--corpus", eval_corpus, "documents to hide spans in")->required();
  generate->add_option("--pool", ann_pool, "documents to draw distractors from");
  generate->add_option("--count", count);
  generate->add_option("--lengths", lengths, "default 1 2 3 4")->delimiter(',');
  generate->add_option("--k", k, "beam width");
  generate->add_option("--out", ann_out, "instance file; provenance goes to <out>.provenance")
      ->required();
  generate->add_option("--seed", seed);

  // annotate-score
  std::string score_instances;
  std::string score_labels;
  auto* score = app.add_subcommand("annotate-score", "Score labels against instance provenance");
  score->add_option("--instances", score_instances)->required();
  score->add_option("--labels", score_labels)->required();
  add_format(score);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kUsageError;
  }

  const bool records = format == "records";

  if (*synth) {
    const int rc = report(lacuna_synthesize(synth_out.c_str(), synth_docs, seed));
    if (rc == 0) std::cout << Json{{"path", synth_out}, {"documents", synth_docs}}.dump() << '\n';
    return rc;
  }
  if (*prepare) {
    Owned out;
    const int rc = report(lacuna_prepare(prep_in.c_str(), prep_out.c_str(), test_fraction, seed,
                                         skip_invalid, &out.text));
    if (rc == 0) std::cout << out.str() << '\n';
    return rc;
  }
  if (*stats) {
    Owned json;
    Owned table;
    const int rc = report(lacuna_stats(stats_in.c_str(), &json.text, &table.text));
    if (rc == 0) std::cout << (records ? json.str() + "\n" : table.str());
    return rc;
  }
  if (*tok) {
    Owned out;
    const int rc = report(
        lacuna_tokenizer_train(tok_corpus.c_str(), vocab_size, seed, tok_out.c_str(), &out.text));
    if (rc == 0) std::cout << out.str() << '\n';
    return rc;
  }
  if (*train) {
    Json options = Json::object();
    if (batch_size > 0) options["batch_size"] = batch_size;
    if (learning_rate > 0.0) options["learning_rate"] = learning_rate;
    std::ofstream log_file;
    std::ostream* log = &std::cout;
    if (!train_log.empty()) {
      log_file.open(train_log);
      if (!log_file) {
        std::cerr << "error: cannot write " << train_log << '\n';
        return kDomainError;
      }
      log = &log_file;
    }
    auto on_step = [](const char* line, void* user) {
      *static_cast<std::ostream*>(user) << line << '\n';
      static_cast<std::ostream*>(user)->flush();
    };
    Owned summary;
    const int rc = report(lacuna_train(train_corpus.c_str(), vocab.c_str(),
                                       train_config.empty() ? nullptr : train_config.c_str(),
                                       train_out.c_str(), steps, seed, options.dump().c_str(),
                                       on_step, log, &summary.text));
    if (rc == 0) std::cerr << summary.str() << '\n';
    return rc;
  }
  if (*serve) {
    Json overrides = Json::object();
    if (!ckpt.empty()) overrides["checkpoint"] = ckpt;
    if (!vocab.empty()) overrides["vocabulary"] = vocab;
    if (!serve_corpus.empty()) overrides["corpus"] = serve_corpus;
    if (!serve_addr.empty()) overrides["address"] = serve_addr;
    if (!serve_labels.empty()) overrides["labels"] = serve_labels;
    if (!serve_instances.empty()) overrides["instances"] = serve_instances;
    lacuna_server* server = nullptr;
    const int rc = report(lacuna_server_start(serve_config.empty() ? nullptr : serve_config.c_str(),
                                              overrides.dump().c_str(), &server));
    if (rc != 0) return rc;
    std::cerr << "listening on port " << lacuna_server_port(server) << '\n';
    if (const int ready = report(lacuna_server_wait_ready(server)); ready != 0) {
      lacuna_server_free(server);
      return ready;
    }
    std::cerr << "model loaded\n";
    lacuna_server_wait(server);
    lacuna_server_free(server);
    return 0;
  }
  if (*score) {
    Owned json;
    Owned table;
    const int rc = report(lacuna_annotate_score(score_instances.c_str(), score_labels.c_str(),
                                                &json.text, &table.text));
    if (rc == 0) std::cout << (records ? json.str() + "\n" : table.str());
    return rc;
  }

  // The remaining commands need a model.
  ModelHandle model;
  if (const int rc = report(lacuna_model_open(ckpt.c_str(), vocab.c_str(), &model.handle)); rc != 0) {
    return rc;
  }

  if (*eval) {
    Json options{{"mask_rate", mask_rate}, {"seed", seed}};
    if (!ks.empty()) options["ks"] = ks;
    Owned json;
    Owned table;
    const int rc = report(lacuna_eval_tokens(model.handle, eval_corpus.c_str(),
                                             options.dump().c_str(), &json.text, &table.text));
    if (rc == 0) std::cout << (records ? json.str() + "\n" : table.str());
    return rc;
  }
  if (*span) {
    Json options{{"max_spans", max_spans},
                 {"min_spans", min_spans},
                 {"max_tokens_per_sign", max_tokens_per_sign},
                 {"seed", seed}};
    if (!ks.empty()) options["ks"] = ks;
    if (!lengths.empty()) options["lengths"] = lengths;
    Owned json;
    Owned table;
    Owned csv;
    const int rc =
        report(lacuna_eval_spans(model.handle, eval_corpus.c_str(), options.dump().c_str(),
                                 &json.text, &table.text, &csv.text));
    if (rc != 0) return rc;
    if (!plot_data.empty()) {
      std::ofstream out(plot_data);
      out << csv.str();
      if (!out) {
        std::cerr << "error: cannot write " << plot_data << '\n';
        return kDomainError;
      }
    }
    std::cout << (records ? json.str() + "\n" : table.str());
    return 0;
  }
  if (*suggest) {
    const Json request{{"text", text},
                       {"gap_index", gap},
                       {"k", k},
                       {"max_tokens_per_sign", max_tokens_per_sign}};
    Owned response;
    const int rc = report(lacuna_suggest(model.handle, request.dump().c_str(), &response.text));
    if (rc == 0) std::cout << (records ? response.str() + "\n" : format_suggestions(response.json()));
    return rc;
  }
  if (*generate) {
    Json options{{"count", count}, {"seed", seed}, {"k", k}};
    if (!lengths.empty()) options["lengths"] = lengths;
    Owned summary;
    const int rc = report(lacuna_annotate_generate(model.handle, eval_corpus.c_str(),
                                                   ann_pool.empty() ? nullptr : ann_pool.c_str(),
                                                   options.dump().c_str(), ann_out.c_str(),
                                                   &summary.text));
    if (rc == 0) std::cout << summary.str() << '\n';
    return rc;
  }
  return kUsageError;
}
