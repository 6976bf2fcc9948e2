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

#include "app/label_store.hpp"

#include <filesystem>

#include "common/error.hpp"
#include "common/records.hpp"

namespace lacuna::app {

std::vector<eval::AnnotationLabel> LabelStore::load(const std::string& path) {
  std::vector<eval::AnnotationLabel> out;
  if (!std::filesystem::exists(path)) return out;
  records::for_each_line(path, [&](const records::Json& row) {
    out.push_back(eval::label_from_json(row));
  });
  return out;
}

LabelStore::LabelStore(std::string path) : path_(std::move(path)) {
  try {
    labels_ = load(path_);
  } catch (const Error& e) {
    fail(ErrorCode::kStoreUnavailable, "cannot read label store " + path_ + ": " + e.what());
  }
  for (const auto& label : labels_) keys_.emplace(label.annotator_id, label.instance_id);
  file_ = std::fopen(path_.c_str(), "a");
  if (!file_) fail(ErrorCode::kStoreUnavailable, "cannot open label store " + path_);
}

LabelStore::~LabelStore() {
  if (file_) std::fclose(file_);
}

void LabelStore::append(const eval::AnnotationLabel& label) {
  const std::string line = eval::label_to_json(label).dump() + "\n";
  std::lock_guard lock(mutex_);
  auto key = std::make_pair(label.annotator_id, label.instance_id);
  if (keys_.count(key)) {
    fail(ErrorCode::kDuplicateLabel,
         label.annotator_id + " already labelled " + label.instance_id);
  }
  if (std::fwrite(line.data(), 1, line.size(), file_) != line.size() || std::fflush(file_) != 0) {
    fail(ErrorCode::kStoreUnavailable, "write to " + path_ + " failed");
  }
  keys_.insert(std::move(key));
  labels_.push_back(label);
}

std::vector<eval::AnnotationLabel> LabelStore::labels() const {
  std::lock_guard lock(mutex_);
  return labels_;
}

std::size_t LabelStore::size() const {
  std::lock_guard lock(mutex_);
  return labels_.size();
}

}  // namespace lacuna::app
