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

#ifndef LACUNA_APP_LABEL_STORE_HPP_
#define LACUNA_APP_LABEL_STORE_HPP_

#include <cstdio>
#include <mutex>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "eval/annotation.hpp"

namespace lacuna::app {

// Append-only label file, one record per line, flushed on every write.
// Safe for concurrent use.
class LabelStore {
 public:
  // Loads existing labels and opens the file for appending.
  // Throws Error(kStoreUnavailable) when it cannot be opened.
  explicit LabelStore(std::string path);
  ~LabelStore();

  LabelStore(const LabelStore&) = delete;
  LabelStore& operator=(const LabelStore&) = delete;

  // Throws Error(kDuplicateLabel) when the annotator already labelled the
  // instance and Error(kStoreUnavailable) when the write fails.
  void append(const eval::AnnotationLabel& label);

  std::vector<eval::AnnotationLabel> labels() const;
  std::size_t size() const;
  const std::string& path() const { return path_; }

  static std::vector<eval::AnnotationLabel> load(const std::string& path);

 private:
  std::string path_;
  std::FILE* file_ = nullptr;
  mutable std::mutex mutex_;
  std::vector<eval::AnnotationLabel> labels_;
  std::set<std::pair<std::string, std::string>> keys_;
};

}  // namespace lacuna::app

#endif  // LACUNA_APP_LABEL_STORE_HPP_
