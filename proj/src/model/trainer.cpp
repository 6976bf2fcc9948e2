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

#include "model/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

#include "common/error.hpp"
#include "common/rng.hpp"

namespace lacuna::model {

TrainOptions TrainOptions::from_key_values(const KeyValues& values) {
  return from_key_values(values, TrainOptions{});
}

TrainOptions TrainOptions::from_key_values(const KeyValues& values, TrainOptions base) {
  base.steps = values.get("steps", base.steps);
  base.batch_size = values.get("batch_size", base.batch_size);
  base.learning_rate = values.get("learning_rate", base.learning_rate);
  base.warmup_fraction = values.get("warmup_fraction", base.warmup_fraction);
  base.clip_norm = values.get("clip_norm", base.clip_norm);
  base.masking.rate = values.get("mask_rate", base.masking.rate);
  base.masking.delimiter_targets = values.get("mask_delimiters", base.masking.delimiter_targets);
  return base;
}

template <typename T>
Trainer<T>::Trainer(BasicModel<T>& model, TrainOptions options)
    : model_(model),
      options_(options),
      gradient_(model.parameter_count(), T(0)),
      first_moment_(model.parameter_count(), 0.0),
      second_moment_(model.parameter_count(), 0.0) {
  if (options_.steps <= 0 || options_.batch_size <= 0) {
    fail(ErrorCode::kInvalidArgument, "steps and batch_size must be positive");
  }
  if (options_.learning_rate < 0.0 || options_.clip_norm <= 0.0 ||
      options_.warmup_fraction < 0.0 || options_.warmup_fraction >= 1.0) {
    fail(ErrorCode::kInvalidArgument, "bad optimizer settings");
  }
}

template <typename T>
double Trainer<T>::learning_rate_at(int step) const {
  const int total = options_.steps;
  const int warmup = std::max(1, static_cast<int>(std::lround(options_.warmup_fraction * total)));
  if (step <= warmup) return options_.learning_rate * step / warmup;
  if (total <= warmup) return options_.learning_rate;
  const double remaining = static_cast<double>(total - step + 1) / (total - warmup + 1);
  return options_.learning_rate * std::clamp(remaining, 0.0, 1.0);
}

template <typename T>
StepReport Trainer<T>::step(const MaskedBatch& batch) {
  const auto start = std::chrono::steady_clock::now();
  const int step = steps_done_ + 1;
  std::fill(gradient_.begin(), gradient_.end(), T(0));
  Rng dropout(Rng::mix(options_.seed, 0x5eed0000ULL + static_cast<std::uint64_t>(step)));
  const LossAndGradient result = model_.loss_and_gradient(
      batch, gradient_, model_.config().dropout > 0.0 ? &dropout : nullptr);

  double squared = 0.0;
  for (T g : gradient_) squared += static_cast<double>(g) * static_cast<double>(g);
  const double norm = std::sqrt(squared);
  if (!std::isfinite(result.loss) || !std::isfinite(norm)) {
    std::ostringstream message;
    message << "step " << step << ": loss " << result.loss << ", gradient norm " << norm
            << " over " << result.masked << " masked positions";
    fail(ErrorCode::kNonFiniteLoss, message.str());
  }

  const double scale = norm > options_.clip_norm ? options_.clip_norm / norm : 1.0;
  const double lr = learning_rate_at(step);
  const double b1 = options_.beta1;
  const double b2 = options_.beta2;
  const double correction1 = 1.0 - std::pow(b1, step);
  const double correction2 = 1.0 - std::pow(b2, step);
  std::span<T> params = model_.parameters();
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = static_cast<double>(gradient_[i]) * scale;
    first_moment_[i] = b1 * first_moment_[i] + (1.0 - b1) * g;
    second_moment_[i] = b2 * second_moment_[i] + (1.0 - b2) * g * g;
    const double m_hat = first_moment_[i] / correction1;
    const double v_hat = second_moment_[i] / correction2;
    params[i] = static_cast<T>(static_cast<double>(params[i]) -
                               lr * m_hat / (std::sqrt(v_hat) + options_.epsilon));
  }
  steps_done_ = step;

  std::size_t tokens = 0;
  for (std::uint8_t a : batch.attention_mask.data) tokens += a;
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  StepReport report;
  report.step = step;
  report.loss = result.loss;
  report.learning_rate = lr;
  report.gradient_norm = norm;
  report.tokens_per_second = seconds > 0.0 ? static_cast<double>(tokens) / seconds : 0.0;
  report.masked = result.masked;
  return report;
}

template class Trainer<float>;
template class Trainer<double>;

std::vector<StepReport> train(Model& model, const std::vector<std::vector<TokenId>>& windows,
                              const TokenClasses& classes, const TrainOptions& options,
                              const ProgressCallback& progress) {
  if (windows.empty()) fail(ErrorCode::kEmptyCorpus, "no training windows");
  Trainer<float> trainer(model, options);
  std::vector<std::size_t> order(windows.size());
  std::size_t cursor = order.size();
  std::uint64_t epoch = 0;
  std::vector<StepReport> reports;
  reports.reserve(static_cast<std::size_t>(options.steps));
  for (int s = 1; s <= options.steps; ++s) {
    std::vector<std::vector<TokenId>> rows;
    while (static_cast<int>(rows.size()) < options.batch_size) {
      if (cursor == order.size()) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        Rng rng(Rng::mix(options.seed, epoch++));
        rng.shuffle(std::span<std::size_t>(order));
        cursor = 0;
      }
      rows.push_back(windows[order[cursor++]]);
      if (rows.size() == windows.size()) break;
    }
    const MaskedBatch batch = make_masked_batch(
        rows, classes, options.masking,
        Rng::mix(options.seed, 0xba7c0000ULL + static_cast<std::uint64_t>(s)));
    reports.push_back(trainer.step(batch));
    if (progress) progress(reports.back());
  }
  return reports;
}

}  // namespace lacuna::model
