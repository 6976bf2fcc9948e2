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

#ifndef LACUNA_MODEL_TRAINER_HPP_
#define LACUNA_MODEL_TRAINER_HPP_

#include <cstdint>
#include <functional>
#include <vector>

#include "common/keyvalue.hpp"
#include "model/masking.hpp"
#include "model/transformer.hpp"

namespace lacuna::model {

struct TrainOptions {
  int steps = 1000;
  int batch_size = 16;
  double learning_rate = 3e-4;
  double warmup_fraction = 0.05;
  double clip_norm = 1.0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  MaskOptions masking;
  std::uint64_t seed = 1;

  // Reads `steps`, `batch_size`, `learning_rate`, `warmup_fraction`,
  // `clip_norm`, `mask_rate`, `mask_delimiters`; unknown keys are left alone.
  static TrainOptions from_key_values(const KeyValues& values, TrainOptions base);
  static TrainOptions from_key_values(const KeyValues& values);
};

struct StepReport {
  int step = 0;  // 1-based
  double loss = 0.0;
  double learning_rate = 0.0;
  double gradient_norm = 0.0;  // before clipping
  double tokens_per_second = 0.0;
  std::size_t masked = 0;
};

// Adam with linear warmup then linear decay and global-norm clipping.
template <typename T>
class Trainer {
 public:
  Trainer(BasicModel<T>& model, TrainOptions options);

  double learning_rate_at(int step) const;

  // One update. Throws Error(kNonFiniteLoss) when the loss or the gradient
  // is not finite; the parameters are left untouched in that case.
  StepReport step(const MaskedBatch& batch);

  int steps_done() const { return steps_done_; }

 private:
  BasicModel<T>& model_;
  TrainOptions options_;
  std::vector<T> gradient_;
  std::vector<double> first_moment_;
  std::vector<double> second_moment_;
  int steps_done_ = 0;
};

using ProgressCallback = std::function<void(const StepReport&)>;

// Runs options.steps updates over `windows`, visiting them in a seeded
// shuffled order per epoch. Throws Error(kEmptyCorpus) without windows.
std::vector<StepReport> train(Model& model, const std::vector<std::vector<TokenId>>& windows,
                              const TokenClasses& classes, const TrainOptions& options,
                              const ProgressCallback& progress = {});

}  // namespace lacuna::model

#endif  // LACUNA_MODEL_TRAINER_HPP_
