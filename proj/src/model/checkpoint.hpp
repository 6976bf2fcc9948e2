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

#ifndef LACUNA_MODEL_CHECKPOINT_HPP_
#define LACUNA_MODEL_CHECKPOINT_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "model/transformer.hpp"

namespace lacuna::model {

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct CheckpointInfo {
  std::uint64_t vocab_hash = 0;
  std::uint64_t seed = 0;
  std::uint64_t step = 0;
};

struct LoadedCheckpoint {
  std::shared_ptr<const Model> model;
  CheckpointInfo info;
  std::string content_hash;  // hex checksum of the file
};

// Layout: magic "LACUNAMD", u32 version, u32-prefixed config text, u64
// vocabulary hash, u64 seed, u64 step, u32 tensor count, then per tensor a
// u32-prefixed name, u32 rank, u32 dims and little-endian f32 values. A u64
// FNV-1a of everything before it closes the file.
std::string serialize_checkpoint(const Model& model, const CheckpointInfo& info);

// Throws Error(kCorruptFile) on truncation, bad magic, checksum or tensor
// shape; Error(kVersionMismatch) on another format version; and
// Error(kVocabularyMismatch) when `expected_vocab_hash` is given and differs.
LoadedCheckpoint parse_checkpoint(const std::string& bytes,
                                  std::optional<std::uint64_t> expected_vocab_hash = {});

void save_checkpoint(const std::string& path, const Model& model, const CheckpointInfo& info);
LoadedCheckpoint load_checkpoint(const std::string& path,
                                 std::optional<std::uint64_t> expected_vocab_hash = {});

}  // namespace lacuna::model

#endif  // LACUNA_MODEL_CHECKPOINT_HPP_
