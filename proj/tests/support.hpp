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

#ifndef LACUNA_TESTS_SUPPORT_HPP_
#define LACUNA_TESTS_SUPPORT_HPP_

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "common/hash.hpp"
#include "common/rng.hpp"
#include "model/predictor.hpp"
#include "tokenizer/vocabulary.hpp"

namespace lacuna::testing {

using tokenizer::TokenId;

// Deterministic stand-in for a trained model: every [MASK] gets log-softmax
// of pseudo-random logits keyed on the whole input and the mask position.
class HashPredictor final : public model::MaskedPredictor {
 public:
  HashPredictor(int vocab_size, int max_seq_len, std::uint64_t salt = 0, double scale = 3.0)
      : vocab_size_(vocab_size), max_seq_len_(max_seq_len), salt_(salt), scale_(scale) {}

  int vocab_size() const override { return vocab_size_; }
  int max_seq_len() const override { return max_seq_len_; }

  std::vector<model::LogDistribution> predict_masked(
      std::span<const TokenId> ids) const override {
    Fnv1a h;
    h.update(ids.data(), ids.size_bytes());
    std::vector<model::LogDistribution> out;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (ids[i] != tokenizer::kMask) continue;
      Rng rng(Rng::mix(h.digest() ^ salt_, i));
      model::LogDistribution d(static_cast<std::size_t>(vocab_size_));
      double max = -1e300;
      for (double& v : d) {
        v = scale_ * rng.normal();
        max = std::max(max, v);
      }
      double z = 0.0;
      for (double v : d) z += std::exp(v - max);
      for (double& v : d) v -= max + std::log(z);
      out.push_back(std::move(d));
    }
    ++calls;
    return out;
  }

  mutable std::size_t calls = 0;

 private:
  int vocab_size_;
  int max_seq_len_;
  std::uint64_t salt_;
  double scale_;
};

inline tokenizer::Vocabulary make_vocabulary(std::vector<std::string> pieces) {
  std::vector<std::string> tokens = {"[PAD]", "[UNK]", "[MASK]", "[CLS]", "[SEP]"};
  tokens.insert(tokens.end(), pieces.begin(), pieces.end());
  return tokenizer::Vocabulary::from_tokens(std::move(tokens));
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& name) {
    path_ = std::filesystem::temp_directory_path() /
            ("lacuna-" + name + "-" + std::to_string(Rng(std::random_device{}()).next() % 1000000));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  std::string file(const std::string& name) const { return (path_ / name).string(); }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace lacuna::testing

#endif  // LACUNA_TESTS_SUPPORT_HPP_
