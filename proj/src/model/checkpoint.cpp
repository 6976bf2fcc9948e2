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

#include "model/checkpoint.hpp"

#include <bit>
#include <cstring>

#include "common/error.hpp"
#include "common/hash.hpp"
#include "common/records.hpp"

namespace lacuna::model {
namespace {

constexpr char kMagic[8] = {'L', 'A', 'C', 'U', 'N', 'A', 'M', 'D'};

static_assert(sizeof(float) == 4);

class Writer {
 public:
  void raw(const void* data, std::size_t size) {
    out_.append(static_cast<const char*>(data), size);
  }
  template <typename U>
  void integer(U value) {
    for (std::size_t i = 0; i < sizeof(U); ++i) {
      out_.push_back(static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xff));
    }
  }
  void text(const std::string& s) {
    integer(static_cast<std::uint32_t>(s.size()));
    raw(s.data(), s.size());
  }
  void f32(float value) { integer(std::bit_cast<std::uint32_t>(value)); }
  std::string& bytes() { return out_; }

 private:
  std::string out_;
};

class Reader {
 public:
  Reader(const std::string& bytes, std::size_t end) : bytes_(bytes), end_(end) {}

  void need(std::size_t n) const {
    if (end_ - pos_ < n) fail(ErrorCode::kCorruptFile, "checkpoint is truncated");
  }
  template <typename U>
  U integer() {
    need(sizeof(U));
    std::uint64_t value = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) {
      value |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    }
    pos_ += sizeof(U);
    return static_cast<U>(value);
  }
  std::string text() {
    const auto n = integer<std::uint32_t>();
    need(n);
    std::string s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  float f32() { return std::bit_cast<float>(integer<std::uint32_t>()); }
  std::size_t position() const { return pos_; }

 private:
  const std::string& bytes_;
  std::size_t end_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string serialize_checkpoint(const Model& model, const CheckpointInfo& info) {
  Writer w;
  w.raw(kMagic, sizeof(kMagic));
  w.integer(kCheckpointVersion);
  w.text(model.config().to_text());
  w.integer(info.vocab_hash);
  w.integer(info.seed);
  w.integer(info.step);
  const auto& tensors = model.layout().tensors();
  w.integer(static_cast<std::uint32_t>(tensors.size()));
  const std::span<const float> params = model.parameters();
  for (const NamedSlot& tensor : tensors) {
    w.text(tensor.name);
    w.integer(std::uint32_t{2});
    w.integer(static_cast<std::uint32_t>(tensor.slot.rows));
    w.integer(static_cast<std::uint32_t>(tensor.slot.cols));
    for (std::size_t i = 0; i < tensor.slot.size(); ++i) w.f32(params[tensor.slot.offset + i]);
  }
  Fnv1a hash;
  hash.update(w.bytes());
  w.integer(hash.digest());
  return std::move(w.bytes());
}

LoadedCheckpoint parse_checkpoint(const std::string& bytes,
                                  std::optional<std::uint64_t> expected_vocab_hash) {
  if (bytes.size() < sizeof(kMagic) + 4 + 8 ||
      std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
    fail(ErrorCode::kCorruptFile, "not a checkpoint file");
  }
  const std::size_t body = bytes.size() - 8;
  Reader r(bytes, body);
  r.need(sizeof(kMagic));
  for (std::size_t i = 0; i < sizeof(kMagic); ++i) r.integer<std::uint8_t>();
  const auto version = r.integer<std::uint32_t>();
  if (version != kCheckpointVersion) {
    fail(ErrorCode::kVersionMismatch, "checkpoint format version " + std::to_string(version) +
                                          ", expected " + std::to_string(kCheckpointVersion));
  }
  Fnv1a hash;
  hash.update(bytes.data(), body);
  Reader tail(bytes, bytes.size());
  for (std::size_t i = 0; i < body; ++i) tail.integer<std::uint8_t>();
  const auto stored = tail.integer<std::uint64_t>();
  if (stored != hash.digest()) fail(ErrorCode::kCorruptFile, "checkpoint checksum mismatch");

  const ModelConfig config = ModelConfig::from_text(r.text());
  LoadedCheckpoint out;
  out.info.vocab_hash = r.integer<std::uint64_t>();
  out.info.seed = r.integer<std::uint64_t>();
  out.info.step = r.integer<std::uint64_t>();
  if (expected_vocab_hash && *expected_vocab_hash != out.info.vocab_hash) {
    fail(ErrorCode::kVocabularyMismatch, "checkpoint was trained with vocabulary " +
                                             hex64(out.info.vocab_hash) + ", got " +
                                             hex64(*expected_vocab_hash));
  }
  const ParameterLayout layout(config);
  const auto count = r.integer<std::uint32_t>();
  if (count != layout.tensors().size()) fail(ErrorCode::kCorruptFile, "wrong tensor count");
  std::vector<float> params(layout.total());
  for (const NamedSlot& tensor : layout.tensors()) {
    const std::string name = r.text();
    const auto rank = r.integer<std::uint32_t>();
    if (name != tensor.name || rank != 2) fail(ErrorCode::kCorruptFile, "unexpected tensor " + name);
    const auto rows = r.integer<std::uint32_t>();
    const auto cols = r.integer<std::uint32_t>();
    if (rows != static_cast<std::uint32_t>(tensor.slot.rows) ||
        cols != static_cast<std::uint32_t>(tensor.slot.cols)) {
      fail(ErrorCode::kCorruptFile, "shape mismatch for " + name);
    }
    for (std::size_t i = 0; i < tensor.slot.size(); ++i) params[tensor.slot.offset + i] = r.f32();
  }
  if (r.position() != body) fail(ErrorCode::kCorruptFile, "trailing bytes in checkpoint");
  out.model = std::make_shared<const Model>(config, std::move(params));
  out.content_hash = hex64(stored);
  return out;
}

void save_checkpoint(const std::string& path, const Model& model, const CheckpointInfo& info) {
  records::write_file(path, serialize_checkpoint(model, info));
}

LoadedCheckpoint load_checkpoint(const std::string& path,
                                 std::optional<std::uint64_t> expected_vocab_hash) {
  return parse_checkpoint(records::read_file(path), expected_vocab_hash);
}

}  // namespace lacuna::model
