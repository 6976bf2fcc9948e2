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

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include <httplib.h>
#include <json.hpp>

#include "lacuna/lacuna.h"

namespace {

using Json = nlohmann::json;
namespace fs = std::filesystem;

struct Owned {
  char* text = nullptr;
  ~Owned() { lacuna_string_free(text); }
  Json json() const { return Json::parse(text); }
};

struct Workspace {
  fs::path root = fs::temp_directory_path() / ("lacuna-capi-" + std::to_string(::getpid()));
  Workspace() {
    fs::remove_all(root);
    fs::create_directories(root);
  }
  ~Workspace() {
    std::error_code ec;
    fs::remove_all(root, ec);
  }
  std::string file(const std::string& name) const { return (root / name).string(); }
};

}  // namespace

TEST_SUITE("capi") {
  TEST_CASE("status names and version") {
    CHECK(std::string(lacuna_version()).size() > 0);
    CHECK(std::string(lacuna_status_name(LACUNA_OK)) == "Ok");
    CHECK(std::string(lacuna_status_name(LACUNA_VOCABULARY_MISMATCH)) == "VocabularyMismatch");
    CHECK(std::string(lacuna_status_name(LACUNA_INTERNAL)) == "Internal");
    lacuna_string_free(nullptr);
  }

  TEST_CASE("errors come back as codes with a message") {
    Workspace ws;
    lacuna_model* model = nullptr;
    CHECK(lacuna_model_open(ws.file("absent.ckpt").c_str(), ws.file("absent.txt").c_str(),
                            &model) == LACUNA_IO);
    CHECK(model == nullptr);
    CHECK(std::string(lacuna_last_error()).find("absent") != std::string::npos);
    CHECK(lacuna_model_open(nullptr, nullptr, &model) == LACUNA_INVALID_ARGUMENT);
    CHECK(lacuna_synthesize(nullptr, 10, 1) == LACUNA_INVALID_ARGUMENT);
    Owned json;
    Owned table;
    CHECK(lacuna_stats(ws.file("absent.jsonl").c_str(), &json.text, &table.text) == LACUNA_IO);
    CHECK(json.text == nullptr);
    lacuna_model_close(nullptr);
  }

  TEST_CASE("the whole pipeline through the C interface") {
    Workspace ws;
    const std::string raw = ws.file("raw.jsonl");
    REQUIRE(lacuna_synthesize(raw.c_str(), 60, 2) == LACUNA_OK);

    Owned prepared;
    REQUIRE(lacuna_prepare(raw.c_str(), ws.root.c_str(), 0.2, 2, 0, &prepared.text) == LACUNA_OK);
    CHECK(prepared.json()["test"] == 12);
    const std::string train = ws.file("train.jsonl");
    const std::string test = ws.file("test.jsonl");
    CHECK(fs::exists(ws.file("all.jsonl")));

    Owned stats_json;
    Owned stats_table;
    REQUIRE(lacuna_stats(test.c_str(), &stats_json.text, &stats_table.text) == LACUNA_OK);
    CHECK(stats_json.json()["n_texts"] == 12);

    Owned vocab_report;
    const std::string vocab = ws.file("vocab.txt");
    REQUIRE(lacuna_tokenizer_train(train.c_str(), 80, 1, vocab.c_str(), &vocab_report.text) ==
            LACUNA_OK);

    const std::string config = ws.file("model.cfg");
    {
      std::FILE* f = std::fopen(config.c_str(), "w");
      std::fputs("d_model=16\nn_layers=1\nn_heads=2\nd_ff=32\nmax_seq_len=48\nbatch_size=4\n", f);
      std::fclose(f);
    }
    int progress_lines = 0;
    auto on_step = [](const char* line, void* user) {
      ++*static_cast<int*>(user);
      CHECK(Json::parse(line).contains("loss"));
    };
    Owned summary;
    const std::string ckpt = ws.file("model.ckpt");
    REQUIRE(lacuna_train(train.c_str(), vocab.c_str(), config.c_str(), ckpt.c_str(), 20, 3,
                         R"({"learning_rate":0.002})", on_step, &progress_lines,
                         &summary.text) == LACUNA_OK);
    CHECK(progress_lines == 20);
    CHECK(summary.json()["steps"] == 20);

    lacuna_model* model = nullptr;
    REQUIRE(lacuna_model_open(ckpt.c_str(), vocab.c_str(), &model) == LACUNA_OK);
    Owned info;
    REQUIRE(lacuna_model_info(model, &info.text) == LACUNA_OK);
    CHECK(info.json()["step"] == 20);

    Owned response;
    REQUIRE(lacuna_suggest(model, R"({"text":"a-bat LUGAL x x aš-šur","k":5})", &response.text) ==
            LACUNA_OK);
    const Json suggestions = response.json()["suggestions"];
    CHECK(suggestions.size() == 5);
    for (const Json& s : suggestions) CHECK(s["signs"].size() == 2);
    Owned none;
    CHECK(lacuna_suggest(model, R"({"text":"a-na"})", &none.text) == LACUNA_INVALID_ARGUMENT);

    Owned eval_json;
    Owned eval_table;
    REQUIRE(lacuna_eval_tokens(model, test.c_str(), R"({"seed":1})", &eval_json.text,
                               &eval_table.text) == LACUNA_OK);
    CHECK(eval_json.json()["overall"]["n"].get<int>() > 0);

    Owned curve;
    Owned curve_table;
    Owned csv;
    REQUIRE(lacuna_eval_spans(model, test.c_str(), R"({"lengths":[1,2],"max_spans":20})",
                              &curve.text, &curve_table.text, &csv.text) == LACUNA_OK);
    CHECK(curve.json()["points"].size() == 2);

    Owned generated;
    const std::string instances = ws.file("instances.jsonl");
    REQUIRE(lacuna_annotate_generate(model, test.c_str(), train.c_str(),
                                     R"({"count":6,"lengths":[1,2],"seed":4})", instances.c_str(),
                                     &generated.text) == LACUNA_OK);
    CHECK(generated.json()["instances"] == 6);
    CHECK(fs::exists(instances + ".provenance"));

    // Label every instance twice and score.
    const std::string labels = ws.file("labels.jsonl");
    {
      std::FILE* out = std::fopen(labels.c_str(), "w");
      std::FILE* in = std::fopen(instances.c_str(), "r");
      char line[1 << 14];
      int n = 0;
      while (std::fgets(line, sizeof(line), in)) {
        const Json inst = Json::parse(line);
        for (const char* who : {"ann1", "ann2"}) {
          const Json label = {{"annotator_id", who},
                              {"instance_id", inst["instance_id"]},
                              {"judgments", {true, n % 2 == 0, false, true, who[3] == '1'}}};
          std::fputs((label.dump() + "\n").c_str(), out);
        }
        ++n;
      }
      std::fclose(in);
      std::fclose(out);
    }
    Owned report;
    Owned report_table;
    REQUIRE(lacuna_annotate_score(instances.c_str(), labels.c_str(), &report.text,
                                  &report_table.text) == LACUNA_OK);
    CHECK(report.json()["n_labels"] == 12);

    lacuna_model_close(model);

    // Checkpoint against the wrong vocabulary.
    Owned other_report;
    const std::string other = ws.file("other.txt");
    REQUIRE(lacuna_tokenizer_train(train.c_str(), 50, 1, other.c_str(), &other_report.text) ==
            LACUNA_OK);
    lacuna_model* mismatched = nullptr;
    CHECK(lacuna_model_open(ckpt.c_str(), other.c_str(), &mismatched) ==
          LACUNA_VOCABULARY_MISMATCH);
    CHECK(mismatched == nullptr);

    // Service lifecycle.
    const Json overrides = {{"checkpoint", ckpt},   {"vocabulary", vocab},
                            {"corpus", test},       {"labels", ws.file("service-labels.jsonl")},
                            {"address", "127.0.0.1:0"}};
    lacuna_server* server = nullptr;
    REQUIRE(lacuna_server_start(nullptr, overrides.dump().c_str(), &server) == LACUNA_OK);
    REQUIRE(lacuna_server_wait_ready(server) == LACUNA_OK);
    const int port = lacuna_server_port(server);
    CHECK(port > 0);
    httplib::Client client("127.0.0.1", port);
    auto health = client.Get("/v1/health");
    REQUIRE(health);
    CHECK(health->status == 200);
    lacuna_server_stop(server);
    lacuna_server_wait(server);
    lacuna_server_free(server);

    lacuna_server* bad = nullptr;
    CHECK(lacuna_server_start(nullptr, R"({"colour":"red"})", &bad) == LACUNA_INVALID_ARGUMENT);
    CHECK(bad == nullptr);
  }
}
