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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "common/error.hpp"
#include "common/hash.hpp"
#include "common/rng.hpp"
#include "corpus/normalize.hpp"
#include "model/checkpoint.hpp"
#include "model/config.hpp"
#include "model/masking.hpp"
#include "model/trainer.hpp"
#include "model/transformer.hpp"
#include "model/windows.hpp"
#include "support.hpp"
#include "tokenizer/wordpiece.hpp"

using namespace lacuna;
using namespace lacuna::model;
using tokenizer::TokenId;

namespace {

ModelConfig micro_config(int vocab = 12) {
  ModelConfig c;
  c.vocab_size = vocab;
  c.max_seq_len = 10;
  c.d_model = 8;
  c.n_layers = 2;
  c.n_heads = 2;
  c.d_ff = 16;
  c.dropout = 0.0;
  return c;
}

ModelConfig small_config(int vocab) {
  ModelConfig c;
  c.vocab_size = vocab;
  c.max_seq_len = 32;
  c.d_model = 32;
  c.n_layers = 2;
  c.n_heads = 2;
  c.d_ff = 64;
  c.dropout = 0.0;
  return c;
}

// Two rows, the second padded, three masked targets.
MaskedBatch micro_batch() {
  MaskedBatch b;
  b.input_ids = Grid<TokenId>(2, 7, tokenizer::kPad);
  b.labels = Grid<TokenId>(2, 7, kIgnoreLabel);
  b.attention_mask = Grid<std::uint8_t>(2, 7, 1);
  const int ids[2][7] = {{3, 5, 2, 7, 8, 2, 4}, {3, 9, 10, 2, 4, 0, 0}};
  for (int r = 0; r < 2; ++r) {
    for (int i = 0; i < 7; ++i) {
      b.input_ids.at(r, i) = ids[r][i];
      if (ids[r][i] == tokenizer::kPad) b.attention_mask.at(r, i) = 0;
    }
  }
  b.labels.at(0, 2) = 6;
  b.labels.at(0, 5) = 11;
  b.labels.at(1, 3) = 5;
  b.mask_positions = {{2, 5}, {3}};
  return b;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kInvalidArgument;
}

tokenizer::Vocabulary ana_vocabulary() {
  return testing::make_vocabulary({"-", ".", "a", "n", "##a", "na"});
}

}  // namespace

TEST_SUITE("model") {
  TEST_CASE("parameter count of the standard configuration") {
    // Hand count: embeddings 4000*96 + 128*96 + 2*96, three layers of
    // 4*(96*96+96) + 2*96 + (96*384+384) + (384*96+96) + 2*96, head
    // 96*96+96 + 2*96 and an output bias of 4000.
    const ModelConfig c = ModelConfig::standard();
    CHECK(c.parameter_count() == 745504);
    CHECK(ParameterLayout(c).total() == 745504);
    c.validate();
    ModelConfig wide = c;
    wide.d_model = 128;
    wide.n_heads = 4;
    CHECK(code_of([&] { wide.validate(); }) == ErrorCode::kBudgetInfeasible);
    ModelConfig odd = c;
    odd.n_heads = 5;
    CHECK(code_of([&] { odd.validate(); }) == ErrorCode::kInvalidArgument);
  }

  TEST_CASE("closed-form count matches the layout for assorted shapes") {
    for (int d : {8, 16, 24}) {
      for (int layers : {1, 2, 3}) {
        ModelConfig c = micro_config(30);
        c.d_model = d;
        c.n_layers = layers;
        c.d_ff = 3 * d;
        const BasicModel<double> m(c, 1);
        CHECK(m.parameter_count() == c.parameter_count());
        std::size_t sum = 0;
        for (const NamedSlot& t : m.layout().tensors()) sum += t.slot.size();
        CHECK(sum == c.parameter_count());
      }
    }
  }

  TEST_CASE("config text round trip") {
    ModelConfig c = micro_config();
    c.dropout = 0.25;
    CHECK(ModelConfig::from_text(c.to_text()) == c);
    CHECK_THROWS_AS(ModelConfig::from_text("d_model = nope"), Error);
  }

  TEST_CASE("initialization follows the documented ranges") {
    const BasicModel<double> m(micro_config(), 11);
    for (const NamedSlot& t : m.layout().tensors()) {
      CAPTURE(t.name);
      const auto values = m.parameters().subspan(t.slot.offset, t.slot.size());
      if (t.is_bias) {
        CHECK(std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0; }));
      } else if (t.is_gain) {
        CHECK(std::all_of(values.begin(), values.end(), [](double v) { return v == 1.0; }));
      } else if (t.name.rfind("embeddings.", 0) == 0) {
        const double bound = 0.02 * std::sqrt(3.0);
        CHECK(std::all_of(values.begin(), values.end(),
                          [&](double v) { return std::abs(v) <= bound; }));
      } else {
        const double bound = std::sqrt(6.0 / (t.slot.rows + t.slot.cols));
        CHECK(std::all_of(values.begin(), values.end(),
                          [&](double v) { return std::abs(v) <= bound; }));
      }
    }
  }

  TEST_CASE("analytic gradients match central differences for every tensor") {
    BasicModel<double> m(micro_config(), 7);
    // Push norm and bias parameters away from their initial constants so
    // their gradients are exercised at a generic point.
    Rng rng(99);
    for (double& p : m.parameters()) p += 0.05 * rng.normal();
    const MaskedBatch batch = micro_batch();
    std::vector<double> gradient(m.parameter_count(), 0.0);
    m.loss_and_gradient(batch, gradient, nullptr);
    std::vector<double> scratch(m.parameter_count());
    const double h = 1e-5;
    for (const NamedSlot& t : m.layout().tensors()) {
      double worst = 0.0;
      for (std::size_t i = 0; i < t.slot.size(); ++i) {
        const std::size_t k = t.slot.offset + i;
        const double original = m.parameters()[k];
        m.parameters()[k] = original + h;
        const double plus = m.loss_and_gradient(batch, scratch, nullptr).loss;
        m.parameters()[k] = original - h;
        const double minus = m.loss_and_gradient(batch, scratch, nullptr).loss;
        m.parameters()[k] = original;
        const double numeric = (plus - minus) / (2 * h);
        const double denom = std::max(1e-6, std::abs(numeric) + std::abs(gradient[k]));
        worst = std::max(worst, std::abs(numeric - gradient[k]) / denom);
      }
      CAPTURE(t.name);
      CHECK(worst < 1e-4);
    }
  }

  TEST_CASE("loss and gradient agree with the inference path") {
    BasicModel<double> m(micro_config(), 3);
    const MaskedBatch batch = micro_batch();
    std::vector<double> gradient(m.parameter_count(), 0.0);
    const LossAndGradient lg = m.loss_and_gradient(batch, gradient, nullptr);
    CHECK(lg.masked == 3);
    CHECK(lg.loss == doctest::Approx(m.loss(batch)).epsilon(1e-6));
  }

  TEST_CASE("uniform logits give loss ln V") {
    BatchLogits logits;
    logits.batch = 1;
    logits.seq = 3;
    logits.vocab = 17;
    logits.values.assign(3 * 17, 0.0f);
    Grid<TokenId> labels(1, 3, kIgnoreLabel);
    labels.at(0, 1) = 9;
    CHECK(mlm_loss(logits, labels) == doctest::Approx(std::log(17.0)).epsilon(1e-9));
    Grid<TokenId> none(1, 3, kIgnoreLabel);
    CHECK(code_of([&] { mlm_loss(logits, none); }) == ErrorCode::kNoMaskedPositions);
  }

  TEST_CASE("log_softmax normalizes and is shift invariant") {
    Rng rng(4);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<float> logits(50);
      for (float& v : logits) v = static_cast<float>(10.0 * rng.normal());
      const LogDistribution d = log_softmax(logits);
      double total = 0.0;
      for (double v : d) total += std::exp(v);
      CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
      for (float& v : logits) v += 100.0f;
      const LogDistribution shifted = log_softmax(logits);
      for (std::size_t i = 0; i < d.size(); ++i) CHECK(shifted[i] == doctest::Approx(d[i]).epsilon(1e-4));
    }
  }

  TEST_CASE("predict_masked returns one normalized distribution per mask") {
    const Model m(micro_config(), 5);
    const std::vector<TokenId> ids = {3, 6, 2, 7, 2, 4};
    const auto dists = m.predict_masked(ids);
    REQUIRE(dists.size() == 2);
    for (const auto& d : dists) {
      REQUIRE(d.size() == 12);
      double total = 0.0;
      for (double v : d) total += std::exp(v);
      CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    }
    CHECK(code_of([&] { m.predict_masked(std::vector<TokenId>{3, 6, 4}); }) ==
          ErrorCode::kNoMaskedPositions);
    CHECK(code_of([&] { m.predict_masked(std::vector<TokenId>(11, 2)); }) ==
          ErrorCode::kSequenceTooLong);
    CHECK(code_of([&] { m.predict_masked(std::vector<TokenId>{3, 2, 40, 4}); }) ==
          ErrorCode::kUnknownId);
  }

  TEST_CASE("padding leaves logits at real positions unchanged") {
    const Model m(micro_config(), 8);
    const std::vector<TokenId> row = {3, 6, 2, 7, 9, 4};
    Grid<TokenId> ids(1, 6);
    Grid<std::uint8_t> attention(1, 6, 1);
    std::copy(row.begin(), row.end(), ids.data.begin());
    const BatchLogits plain = m.forward(ids, attention);

    Grid<TokenId> padded(2, 9, tokenizer::kPad);
    Grid<std::uint8_t> padded_attention(2, 9, 0);
    for (int i = 0; i < 6; ++i) {
      padded.at(0, i) = row[static_cast<std::size_t>(i)];
      padded_attention.at(0, i) = 1;
    }
    for (int i = 0; i < 9; ++i) {
      padded.at(1, i) = 5 + i % 4;
      padded_attention.at(1, i) = 1;
    }
    const BatchLogits batched = m.forward(padded, padded_attention);
    for (int s = 0; s < 6; ++s) {
      for (int v = 0; v < 12; ++v) CHECK(std::abs(batched.at(0, s, v) - plain.at(0, s, v)) < 1e-6);
    }
    for (int s = 6; s < 9; ++s) {
      for (int v = 0; v < 12; ++v) CHECK(batched.at(0, s, v) == 0.0f);
    }
  }

  TEST_CASE("masking selects about 15 percent of eligible tokens") {
    const auto vocab = ana_vocabulary();
    const TokenClasses classes = TokenClasses::from_vocabulary(vocab);
    // 100 rows of 100 eligible tokens each.
    std::vector<std::vector<TokenId>> rows(100, std::vector<TokenId>(100));
    Rng rng(1);
    for (auto& row : rows) {
      for (TokenId& id : row) id = static_cast<TokenId>(7 + rng.uniform(4));
    }
    const MaskedBatch batch = make_masked_batch(rows, classes, {}, 77);
    const double n = 10000;
    const double sigma = std::sqrt(n * 0.15 * 0.85);
    CHECK(std::abs(static_cast<double>(batch.masked_count()) - 1500.0) < 3 * sigma);

    // 80/10/10 among the selected positions.
    std::size_t as_mask = 0;
    std::size_t unchanged = 0;
    for (int r = 0; r < batch.input_ids.rows; ++r) {
      for (int pos : batch.mask_positions[static_cast<std::size_t>(r)]) {
        const TokenId label = batch.labels.at(r, pos);
        CHECK(label == rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(pos - 1)]);
        if (batch.input_ids.at(r, pos) == tokenizer::kMask) ++as_mask;
        if (batch.input_ids.at(r, pos) == label) ++unchanged;
      }
    }
    const double m = static_cast<double>(batch.masked_count());
    CHECK(std::abs(as_mask - 0.8 * m) < 3 * std::sqrt(m * 0.8 * 0.2));
    // Unchanged covers the kept 10% plus random draws that hit the original.
    CHECK(unchanged > 0.05 * m);
    CHECK(unchanged < 0.2 * m);
  }

  TEST_CASE("masking frames rows, skips delimiters and is seeded") {
    const auto vocab = ana_vocabulary();
    const TokenClasses classes = TokenClasses::from_vocabulary(vocab);
    CHECK_FALSE(classes.is_eligible(5));  // "-"
    CHECK(TokenClasses::from_vocabulary(vocab, true).is_eligible(5));
    std::vector<std::vector<TokenId>> rows = {{7, 5, 10, 7, 5, 10}, {7, 5, 10}};
    MaskOptions options;
    options.rate = 0.5;
    const MaskedBatch a = make_masked_batch(rows, classes, options, 3);
    const MaskedBatch b = make_masked_batch(rows, classes, options, 3);
    CHECK(a.input_ids.data == b.input_ids.data);
    CHECK(a.labels.data == b.labels.data);
    CHECK(a.input_ids.cols == 8);
    CHECK(a.input_ids.at(0, 0) == tokenizer::kCls);
    CHECK(a.input_ids.at(0, 7) == tokenizer::kSep);
    CHECK(a.input_ids.at(1, 4) == tokenizer::kSep);
    CHECK(a.input_ids.at(1, 5) == tokenizer::kPad);
    CHECK(a.attention_mask.at(1, 5) == 0);
    for (int r = 0; r < 2; ++r) {
      for (int pos : a.mask_positions[static_cast<std::size_t>(r)]) {
        CHECK(a.labels.at(r, pos) != 5);
      }
    }
    MaskOptions off;
    off.rate = 0.0;
    off.force_min = false;
    const MaskedBatch empty = make_masked_batch(rows, classes, off, 3);
    CHECK(empty.masked_count() == 0);
    const Model m(small_config(static_cast<int>(vocab.size())), 1);
    CHECK(code_of([&] { (void)m.loss(empty); }) == ErrorCode::kNoMaskedPositions);
    off.force_min = true;
    CHECK(make_masked_batch(rows, classes, off, 3).masked_count() == 1);
    MaskOptions bad;
    bad.rate = 1.0;
    CHECK(code_of([&] { make_masked_batch(rows, classes, bad, 3); }) == ErrorCode::kInvalidArgument);
  }

  TEST_CASE("windows respect length and never start on a continuation") {
    const auto vocab = ana_vocabulary();
    const auto seq = tokenizer::encode(vocab, "a-na n-a a-n na na-a a-na n-a a-na a n");
    for (int length : {4, 5, 8}) {
      const auto windows = make_windows(vocab, seq.ids, length);
      REQUIRE(!windows.empty());
      for (const auto& w : windows) {
        CHECK(static_cast<int>(w.size()) <= length);
        CHECK(vocab.kind(w.front()) != tokenizer::TokenKind::kContinuation);
      }
      CHECK(windows.back().back() == seq.ids.back());
    }
  }

  TEST_CASE("learning rate warms up then decays linearly") {
    BasicModel<double> m(micro_config(), 1);
    TrainOptions options;
    options.steps = 100;
    options.learning_rate = 1e-3;
    options.warmup_fraction = 0.05;
    const Trainer<double> trainer(m, options);
    CHECK(trainer.learning_rate_at(1) == doctest::Approx(2e-4));
    CHECK(trainer.learning_rate_at(5) == doctest::Approx(1e-3));
    CHECK(trainer.learning_rate_at(6) == doctest::Approx(1e-3));
    CHECK(trainer.learning_rate_at(100) == doctest::Approx(1e-3 / 96));
    for (int s = 6; s < 100; ++s) CHECK(trainer.learning_rate_at(s + 1) < trainer.learning_rate_at(s));
  }

  TEST_CASE("non-finite loss aborts the step without touching parameters") {
    BasicModel<double> m(micro_config(), 1);
    m.parameters()[0] = std::numeric_limits<double>::quiet_NaN();
    for (double& p : m.parameters()) p = std::numeric_limits<double>::infinity();
    const std::vector<double> before(m.parameters().begin(), m.parameters().end());
    Trainer<double> trainer(m, TrainOptions{});
    CHECK(code_of([&] { trainer.step(micro_batch()); }) == ErrorCode::kNonFiniteLoss);
    CHECK(trainer.steps_done() == 0);
    for (std::size_t i = 0; i < before.size(); ++i) CHECK(std::isinf(m.parameters()[i]));
  }

  TEST_CASE("200 steps on a toy corpus bring the loss below ln V") {
    std::vector<corpus::Document> docs;
    for (int i = 0; i < 50; ++i) {
      docs.push_back(corpus::parse_document("a-bat LUGAL a-na aš-šur qi-bi-ma um-ša",
                                            "t" + std::to_string(i), corpus::Genre::kOther));
    }
    const auto vocab = tokenizer::train_wordpiece(docs, 40, 1);
    Model m(small_config(static_cast<int>(vocab.size())), 2);
    TrainOptions options;
    options.steps = 200;
    options.batch_size = 8;
    options.learning_rate = 2e-3;
    const auto reports =
        train(m, training_windows(vocab, docs, 32), TokenClasses::from_vocabulary(vocab), options);
    REQUIRE(reports.size() == 200);
    const double ln_v = std::log(static_cast<double>(vocab.size()));
    double tail = 0.0;
    for (std::size_t i = 180; i < 200; ++i) tail += reports[i].loss;
    CHECK(tail / 20 < ln_v);
    CHECK(reports.back().loss < ln_v);
    CHECK_THROWS_AS(train(m, {}, TokenClasses::from_vocabulary(vocab), options), Error);
  }

  TEST_CASE("a converged model predicts na in a-na a-na") {
    const auto vocab = ana_vocabulary();
    std::vector<corpus::Document> docs;
    std::string text = "a-na";
    for (int i = 0; i < 15; ++i) text += " a-na";
    for (int i = 0; i < 20; ++i) {
      docs.push_back(corpus::parse_document(text, "d" + std::to_string(i), corpus::Genre::kOther));
    }
    Model m(small_config(static_cast<int>(vocab.size())), 3);
    TrainOptions options;
    options.steps = 150;
    options.batch_size = 8;
    options.learning_rate = 3e-3;
    train(m, training_windows(vocab, docs, 32), TokenClasses::from_vocabulary(vocab), options);
    const TokenId na = *vocab.find("na");
    auto seq = tokenizer::encode(vocab, "a-na a-na a-[MASK] a-na a-na").ids;
    seq.insert(seq.begin(), tokenizer::kCls);
    seq.push_back(tokenizer::kSep);
    const auto dists = m.predict_masked(seq);
    REQUIRE(dists.size() == 1);
    const auto& d = dists[0];
    CHECK(std::max_element(d.begin(), d.end()) - d.begin() == na);
    CHECK(std::exp(d[static_cast<std::size_t>(na)]) > 0.9);
  }

  TEST_CASE("checkpoint round trip preserves weights and predictions") {
    const Model m(micro_config(), 21);
    const CheckpointInfo info{0xabcdefULL, 21, 300};
    const std::string bytes = serialize_checkpoint(m, info);
    const LoadedCheckpoint loaded = parse_checkpoint(bytes, 0xabcdefULL);
    CHECK(loaded.info.step == 300);
    CHECK(loaded.info.seed == 21);
    CHECK(loaded.model->config() == m.config());
    CHECK(std::equal(m.parameters().begin(), m.parameters().end(),
                     loaded.model->parameters().begin()));
    const std::vector<TokenId> ids = {3, 6, 2, 7, 4};
    CHECK(m.predict_masked(ids) == loaded.model->predict_masked(ids));
    CHECK(loaded.content_hash == parse_checkpoint(bytes).content_hash);

    testing::TempDir dir("ckpt");
    save_checkpoint(dir.file("m.ckpt"), m, info);
    CHECK(load_checkpoint(dir.file("m.ckpt")).content_hash == loaded.content_hash);
    CHECK(code_of([&] { load_checkpoint(dir.file("none.ckpt")); }) == ErrorCode::kIo);
  }

  TEST_CASE("damaged or mismatched checkpoints are rejected") {
    const Model m(micro_config(), 21);
    const std::string bytes = serialize_checkpoint(m, {7, 1, 1});
    for (std::size_t keep : {std::size_t{0}, std::size_t{5}, bytes.size() / 2, bytes.size() - 1}) {
      CAPTURE(keep);
      CHECK(code_of([&] { parse_checkpoint(bytes.substr(0, keep)); }) == ErrorCode::kCorruptFile);
    }
    std::string flipped = bytes;
    flipped[bytes.size() / 2] ^= 0x40;
    CHECK(code_of([&] { parse_checkpoint(flipped); }) == ErrorCode::kCorruptFile);
    std::string magic = bytes;
    magic[0] = 'X';
    CHECK(code_of([&] { parse_checkpoint(magic); }) == ErrorCode::kCorruptFile);

    // Version 2 with a valid checksum.
    std::string future = bytes.substr(0, bytes.size() - 8);
    future[8] = 2;
    Fnv1a h;
    h.update(future);
    const std::uint64_t sum = h.digest();
    for (int i = 0; i < 8; ++i) future.push_back(static_cast<char>((sum >> (8 * i)) & 0xff));
    CHECK(code_of([&] { parse_checkpoint(future); }) == ErrorCode::kVersionMismatch);

    CHECK(code_of([&] { parse_checkpoint(bytes, 8); }) == ErrorCode::kVocabularyMismatch);
  }
}
