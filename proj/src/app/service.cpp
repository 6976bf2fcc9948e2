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

#include "app/service.hpp"

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>

#include <httplib.h>

#include "app/label_store.hpp"
#include "app/suggest.hpp"
#include "common/hash.hpp"
#include "corpus/stats.hpp"
#include "eval/agreement.hpp"
#include "eval/annotation.hpp"

namespace lacuna::app {

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotFound:
    case ErrorCode::kUnknownInstance:
      return 404;
    case ErrorCode::kDuplicateLabel:
      return 409;
    case ErrorCode::kStoreUnavailable:
      return 503;
    case ErrorCode::kIo:
    case ErrorCode::kCorruptFile:
    case ErrorCode::kVersionMismatch:
    case ErrorCode::kVocabularyMismatch:
    case ErrorCode::kNonFiniteLoss:
      return 500;
    default:
      return 400;
  }
}

namespace {

using records::Json;

void send(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, std::string_view code,
                const std::string& message) {
  send(res, status, Json{{"error", {{"code", code}, {"message", message}}}});
}

Json parse_body(const httplib::Request& req) {
  Json body = Json::parse(req.body, nullptr, false);
  if (body.is_discarded()) fail(ErrorCode::kInvalidArgument, "request body is not valid JSON");
  return body;
}

}  // namespace

struct Service::State {
  explicit State(ServiceConfig c) : config(std::move(c)) {}

  ServiceConfig config;
  httplib::Server server;
  std::thread listener;
  std::thread loader;
  const std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();

  std::mutex load_mutex;
  std::condition_variable load_done;
  std::atomic<bool> loaded{false};
  bool finished_loading = false;
  std::string load_error;

  std::shared_ptr<const Engine> engine;
  std::vector<corpus::Document> docs;
  std::map<std::string, std::size_t> doc_index;
  std::unique_ptr<LabelStore> store;

  std::mutex instances_mutex;
  std::vector<eval::AnnotationInstance> instances;
  std::map<std::string, std::size_t> instance_index;

  void load() {
    try {
      engine = Engine::open(config.checkpoint, config.vocabulary);
      if (!config.corpus.empty()) {
        docs = corpus::load_corpus(config.corpus, true).documents;
        for (std::size_t i = 0; i < docs.size(); ++i) doc_index.emplace(docs[i].id, i);
      }
      if (!config.instances.empty() && std::filesystem::exists(config.instances)) {
        instances = eval::load_instances(config.instances);
        for (std::size_t i = 0; i < instances.size(); ++i) {
          instance_index.emplace(instances[i].instance_id, i);
        }
      }
      store = std::make_unique<LabelStore>(config.labels);
      loaded = true;
    } catch (const std::exception& e) {
      load_error = e.what();
    }
    std::lock_guard lock(load_mutex);
    finished_loading = true;
    load_done.notify_all();
  }

  // Wraps a handler with readiness gating and error mapping.
  template <typename Handler>
  httplib::Server::Handler guarded(Handler handler) {
    return [this, handler](const httplib::Request& req, httplib::Response& res) {
      if (!loaded) {
        send_error(res, 503, "Loading", load_error.empty() ? "model is loading" : load_error);
        return;
      }
      try {
        handler(req, res);
      } catch (const Error& e) {
        send_error(res, http_status(e.code()), to_string(e.code()), e.what());
      } catch (const std::exception& e) {
        send_error(res, 500, "Internal", e.what());
      }
    };
  }

  void append_instance_file(const eval::AnnotationInstance& inst) {
    if (config.instances.empty()) return;
    std::ofstream blind(config.instances, std::ios::app);
    std::ofstream hidden(eval::sidecar_path(config.instances), std::ios::app);
    blind << eval::instance_to_json(inst).dump() << '\n';
    hidden << eval::provenance_to_json(inst).dump() << '\n';
    if (!blind || !hidden) fail(ErrorCode::kIo, "cannot append to " + config.instances);
  }

  void routes() {
    server.Get("/v1/health", [this](const httplib::Request&, httplib::Response& res) {
      const double uptime =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
      if (!loaded) {
        send(res, 503, Json{{"status", load_error.empty() ? "loading" : "failed"},
                            {"error", load_error},
                            {"uptime_seconds", uptime}});
        return;
      }
      send(res, 200, Json{{"status", "ok"},
                          {"model_hash", engine->model_hash},
                          {"vocab_hash", hex64(engine->vocab.hash())},
                          {"step", engine->info.step},
                          {"documents", docs.size()},
                          {"uptime_seconds", uptime}});
    });

    server.Post("/v1/suggest", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const SuggestRequest request =
          parse_suggest_request(parse_body(req), config.default_k, config.max_tokens_per_sign);
      send(res, 200, suggest(*engine, request));
    }));

    server.Get("/v1/docs", guarded([this](const httplib::Request&, httplib::Response& res) {
      Json list = Json::array();
      for (const corpus::Document& doc : docs) {
        list.push_back({{"id", doc.id},
                        {"genre", corpus::genre_name(doc.genre)},
                        {"n_words", doc.words.size()},
                        {"n_signs", doc.sign_count()},
                        {"n_gaps", doc.gaps.size()}});
      }
      send(res, 200, Json{{"documents", list}});
    }));

    server.Get(R"(/v1/docs/([^/]+))",
               guarded([this](const httplib::Request& req, httplib::Response& res) {
                 const std::string id = req.matches[1];
                 auto it = doc_index.find(id);
                 if (it == doc_index.end()) fail(ErrorCode::kNotFound, "unknown document " + id);
                 send(res, 200, corpus::document_to_json(docs[it->second]));
               }));

    server.Get("/v1/annotation/instances",
               guarded([this](const httplib::Request&, httplib::Response& res) {
                 Json list = Json::array();
                 std::lock_guard lock(instances_mutex);
                 for (const auto& inst : instances) list.push_back(eval::instance_to_json(inst));
                 send(res, 200, Json{{"instances", list}});
               }));

    server.Post("/v1/annotation/instances",
                guarded([this](const httplib::Request& req, httplib::Response& res) {
                  const Json body = parse_body(req);
                  std::string doc_id;
                  corpus::GapRun gap;
                  std::uint64_t seed = 0;
                  try {
                    doc_id = body.at("doc_id").get<std::string>();
                    gap.start = body.at("gap").at("start").get<std::size_t>();
                    gap.length = body.at("gap").at("length").get<std::size_t>();
                    seed = body.value("seed", std::uint64_t{0});
                  } catch (const Json::exception& e) {
                    fail(ErrorCode::kInvalidArgument, std::string("bad instance request: ") + e.what());
                  }
                  if (gap.length == 0) fail(ErrorCode::kInvalidArgument, "gap length must be positive");
                  auto it = doc_index.find(doc_id);
                  if (it == doc_index.end()) fail(ErrorCode::kNotFound, "unknown document " + doc_id);
                  decoder::DecodeOptions options;
                  options.beam_width = config.default_k;
                  options.max_tokens_per_sign = config.max_tokens_per_sign;
                  eval::AnnotationInstance inst = eval::generate_annotation_instance(
                      *engine->model, engine->vocab, docs[it->second], gap, docs, seed, options);
                  std::lock_guard lock(instances_mutex);
                  if (instance_index.count(inst.instance_id)) {
                    send(res, 200, eval::instance_to_json(instances[instance_index[inst.instance_id]]));
                    return;
                  }
                  append_instance_file(inst);
                  instance_index.emplace(inst.instance_id, instances.size());
                  instances.push_back(inst);
                  send(res, 201, eval::instance_to_json(inst));
                }));

    server.Post("/v1/annotation/labels",
                guarded([this](const httplib::Request& req, httplib::Response& res) {
                  const eval::AnnotationLabel label = eval::label_from_json(parse_body(req));
                  {
                    std::lock_guard lock(instances_mutex);
                    if (!instance_index.count(label.instance_id)) {
                      fail(ErrorCode::kUnknownInstance, "unknown instance " + label.instance_id);
                    }
                  }
                  store->append(label);
                  send(res, 201, Json{{"stored", true}, {"labels", store->size()}});
                }));

    server.Get("/v1/annotation/report",
               guarded([this](const httplib::Request&, httplib::Response& res) {
                 const auto labels = store->labels();
                 if (labels.empty()) {
                   send(res, 200, Json{{"n_labels", 0}});
                   return;
                 }
                 std::vector<eval::AnnotationInstance> snapshot;
                 {
                   std::lock_guard lock(instances_mutex);
                   snapshot = instances;
                 }
                 send(res, 200, eval::agreement_to_json(eval::score_annotations(snapshot, labels)));
               }));

    if (!config.ui_dir.empty()) server.set_mount_point("/ui", config.ui_dir);
  }
};

Service::Service(ServiceConfig config) : state_(std::make_unique<State>(std::move(config))) {
  state_->config.validate();
}

Service::~Service() { stop(); }

int Service::start() {
  State& s = *state_;
  const std::size_t workers = static_cast<std::size_t>(s.config.max_concurrent);
  s.server.new_task_queue = [workers] { return new httplib::ThreadPool(workers, workers * 8); };
  s.routes();
  int port = s.config.port;
  if (port == 0) {
    port = s.server.bind_to_any_port(s.config.host);
    if (port < 0) fail(ErrorCode::kIo, "cannot bind " + s.config.host);
  } else if (!s.server.bind_to_port(s.config.host, port)) {
    fail(ErrorCode::kIo, "cannot bind " + s.config.host + ":" + std::to_string(port));
  }
  s.loader = std::thread([&s] { s.load(); });
  s.listener = std::thread([&s] { s.server.listen_after_bind(); });
  s.server.wait_until_ready();
  return port;
}

void Service::wait_ready() {
  State& s = *state_;
  std::unique_lock lock(s.load_mutex);
  s.load_done.wait(lock, [&s] { return s.finished_loading; });
  if (!s.loaded) fail(ErrorCode::kIo, "service failed to load: " + s.load_error);
}

bool Service::ready() const { return state_->loaded; }

void Service::wait() {
  while (state_->server.is_running()) std::this_thread::sleep_for(std::chrono::milliseconds(100));
}

void Service::stop() {
  State& s = *state_;
  s.server.stop();
  if (s.listener.joinable()) s.listener.join();
  if (s.loader.joinable()) s.loader.join();
}

}  // namespace lacuna::app
