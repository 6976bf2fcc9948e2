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

#ifndef LACUNA_CORPUS_STATS_HPP_
#define LACUNA_CORPUS_STATS_HPP_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "common/records.hpp"
#include "corpus/document.hpp"

namespace lacuna::corpus {

struct Counts {
  std::size_t n_texts = 0;
  std::size_t n_words = 0;
  std::size_t n_signs = 0;

  Counts& operator+=(const Counts& other);
  bool operator==(const Counts&) const = default;
};

struct CorpusStats {
  Counts total;
  std::map<Genre, Counts> per_genre;  // every genre present, zero if unused

  CorpusStats& operator+=(const CorpusStats& other);
  bool operator==(const CorpusStats&) const = default;
};

CorpusStats operator+(CorpusStats a, const CorpusStats& b);

// Documents with zero words do not count as texts.
CorpusStats corpus_stats(std::span<const Document> docs);

std::string format_stats_table(const CorpusStats& stats);
records::Json stats_to_json(const CorpusStats& stats);

// Document-level split. The test side gets round(n * test_fraction) documents,
// clamped to [1, n - 1]; both sides keep input order. Throws
// Error(kTooFewDocuments) for fewer than two documents.
std::pair<std::vector<Document>, std::vector<Document>> split_corpus(
    std::span<const Document> docs, double test_fraction, std::uint64_t seed);

// Corpus file I/O -----------------------------------------------------------

struct RawRecord {
  std::string id;
  std::string genre;
  std::string text;
  std::string translation;
};

std::vector<RawRecord> read_raw_records(const std::string& path);

struct LoadReport {
  std::vector<Document> documents;
  // (id, message) for records that failed to parse when skip_invalid is set.
  std::vector<std::pair<std::string, std::string>> rejected;
};

// Parses every record. With skip_invalid=false the first domain error
// propagates.
LoadReport load_corpus(const std::string& path, bool skip_invalid = false);

records::Json document_to_json(const Document& doc);
void write_normalized(const std::string& path, std::span<const Document> docs);

}  // namespace lacuna::corpus

#endif  // LACUNA_CORPUS_STATS_HPP_
