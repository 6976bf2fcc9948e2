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

#ifndef LACUNA_MODEL_TRANSFORMER_HPP_
#define LACUNA_MODEL_TRANSFORMER_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "common/rng.hpp"
#include "model/batch.hpp"
#include "model/config.hpp"
#include "model/predictor.hpp"

namespace lacuna::model {

// Location of one tensor inside the flat parameter buffer. Biases and norm
// parameters are 1 x n.
struct Slot {
  std::size_t offset = 0;
  int rows = 0;
  int cols = 0;

  std::size_t size() const { return static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols); }
};

struct NamedSlot {
  std::string name;
  Slot slot;
  bool is_bias = false;  // zero-initialized
  bool is_gain = false;  // one-initialized (norm scale)
};

struct LayerSlots {
  Slot wq, bq, wk, bk, wv, bv, wo, bo;
  Slot ln1_gain, ln1_bias;
  Slot w1, b1, w2, b2;
  Slot ln2_gain, ln2_bias;
};

// Post-norm BERT encoder with a transform + norm head whose output
// projection is the transposed token embedding.
class ParameterLayout {
 public:
  explicit ParameterLayout(const ModelConfig& config);

  Slot token_embedding;
  Slot position_embedding;
  Slot embedding_gain, embedding_bias;
  std::vector<LayerSlots> layers;
  Slot head_weight, head_bias;
  Slot head_gain, head_norm_bias;
  Slot output_bias;

  const std::vector<NamedSlot>& tensors() const { return tensors_; }
  std::size_t total() const { return total_; }

 private:
  Slot add(std::string name, int rows, int cols, bool is_bias = false, bool is_gain = false);

  std::vector<NamedSlot> tensors_;
  std::size_t total_ = 0;
};

// Statistics of one optimization pass over a batch.
struct LossAndGradient {
  double loss = 0.0;  // mean cross-entropy over masked positions
  std::size_t masked = 0;
};

template <typename T>
class BasicModel final : public MaskedPredictor {
 public:
  // Validates the config; weights uniform in ±sqrt(6/(fan_in+fan_out)),
  // embeddings uniform in ±0.02*sqrt(3), biases zero, norm gains one.
  BasicModel(const ModelConfig& config, std::uint64_t seed);

  // Adopts an existing parameter buffer (checkpoint load).
  BasicModel(const ModelConfig& config, std::vector<T> parameters);

  const ModelConfig& config() const { return config_; }
  const ParameterLayout& layout() const { return layout_; }
  std::span<T> parameters() { return parameters_; }
  std::span<const T> parameters() const { return parameters_; }
  std::size_t parameter_count() const { return parameters_.size(); }

  int vocab_size() const override { return config_.vocab_size; }
  int max_seq_len() const override { return config_.max_seq_len; }

  // Logits at every position; padding positions (attention 0) neither attend
  // nor are attended to and get all-zero logits.
  BatchLogits forward(const Grid<TokenId>& ids, const Grid<std::uint8_t>& attention) const;

  std::vector<LogDistribution> predict_masked(std::span<const TokenId> ids) const override;

  // Mean masked cross-entropy of `batch` and its gradient, accumulated into
  // `gradient` (same layout as parameters()). With a dropout stream the
  // configured dropout is applied; without one the pass is deterministic.
  // Throws Error(kNoMaskedPositions) when the batch has no labels.
  LossAndGradient loss_and_gradient(const MaskedBatch& batch, std::span<T> gradient,
                                    Rng* dropout) const;

  // Same loss without gradients or dropout.
  double loss(const MaskedBatch& batch) const;

 private:
  void check_ids(std::span<const TokenId> ids) const;

  ModelConfig config_;
  ParameterLayout layout_;
  std::vector<T> parameters_;
};

using Model = BasicModel<float>;

// Mean cross-entropy over positions whose label is not kIgnoreLabel.
// Throws Error(kNoMaskedPositions) when there are none.
double mlm_loss(const BatchLogits& logits, const Grid<TokenId>& labels);

// Log-softmax in double precision.
LogDistribution log_softmax(std::span<const float> logits);

}  // namespace lacuna::model

#endif  // LACUNA_MODEL_TRANSFORMER_HPP_
