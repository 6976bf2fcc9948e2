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

#include "corpus/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "common/error.hpp"
#include "common/rng.hpp"
#include "corpus/normalize.hpp"

namespace lacuna::corpus {

Counts& Counts::operator+=(const Counts& other) {
  n_texts += other.n_texts;
  n_words += other.n_words;
  n_signs += other.n_signs;
  return *this;
}

CorpusStats& CorpusStats::operator+=(const CorpusStats& other) {
  total += other.total;
  for (const auto& [genre, counts] : other.per_genre) per_genre[genre] += counts;
  return *this;
}

CorpusStats operator+(CorpusStats a, const CorpusStats& b) {
  a += b;
  return a;
}

CorpusStats corpus_stats(std::span<const Document> docs) {
  CorpusStats stats;
  for (Genre genre : kAllGenres) stats.per_genre[genre] = Counts{};
  for (const Document& doc : docs) {
    if (doc.words.empty()) continue;
    Counts counts{1, doc.words.size(), doc.sign_count()};
    stats.per_genre[doc.genre] += counts;
    stats.total += counts;
  }
  return stats;
}

std::string format_stats_table(const CorpusStats& stats) {
  std::string out;
  char line[128];
  std::snprintf(line, sizeof(line), "%-20s %10s %12s %12s\n", "genre", "# texts", "# words",
                "# signs");
  out += line;
  auto row = [&](std::string_view name, const Counts& c) {
    std::snprintf(line, sizeof(line), "%-20.*s %10zu %12zu %12zu\n",
                  static_cast<int>(name.size()), name.data(), c.n_texts, c.n_words, c.n_signs);
    out += line;
  };
  for (const auto& [genre, counts] : stats.per_genre) row(genre_name(genre), counts);
  row("total", stats.total);
  return out;
}

records::Json stats_to_json(const CorpusStats& stats) {
  auto counts = [](const Counts& c) {
    return records::Json{{"n_texts", c.n_texts}, {"n_words", c.n_words}, {"n_signs", c.n_signs}};
  };
  records::Json out = counts(stats.total);
  records::Json per_genre = records::Json::object();
  for (const auto& [genre, c] : stats.per_genre) per_genre[std::string(genre_name(genre))] = counts(c);
  out["per_genre"] = std::move(per_genre);
  return out;
}

std::pair<std::vector<Document>, std::vector<Document>> split_corpus(
    std::span<const Document> docs, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    fail(ErrorCode::kInvalidArgument, "test_fraction must lie in (0, 1)");
  }
  const std::size_t n = docs.size();
  if (n < 2) fail(ErrorCode::kTooFewDocuments, "need at least two documents, got " + std::to_string(n));
  auto n_test = static_cast<std::size_t>(std::llround(static_cast<double>(n) * test_fraction));
  n_test = std::clamp<std::size_t>(n_test, 1, n - 1);

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(order));
  std::vector<bool> is_test(n, false);
  for (std::size_t i = 0; i < n_test; ++i) is_test[order[i]] = true;

  std::pair<std::vector<Document>, std::vector<Document>> out;
  for (std::size_t i = 0; i < n; ++i) (is_test[i] ? out.second : out.first).push_back(docs[i]);
  return out;
}

std::vector<RawRecord> read_raw_records(const std::string& path) {
  std::vector<RawRecord> out;
  std::size_t index = 0;
  records::for_each_line(path, [&](const records::Json& row) {
    ++index;
    if (!row.is_object() || !row.contains("text") || !row["text"].is_string()) {
      fail(ErrorCode::kCorruptFile, path + ": record " + std::to_string(index) + " has no text");
    }
    RawRecord record;
    record.id = row.contains("id") ? (row["id"].is_string() ? row["id"].get<std::string>()
                                                            : row["id"].dump())
                                   : "doc" + std::to_string(index);
    if (row.contains("genre") && row["genre"].is_string()) record.genre = row["genre"];
    record.text = row["text"];
    if (row.contains("translation") && row["translation"].is_string()) {
      record.translation = row["translation"];
    }
    out.push_back(std::move(record));
  });
  return out;
}

LoadReport load_corpus(const std::string& path, bool skip_invalid) {
  LoadReport report;
  for (RawRecord& record : read_raw_records(path)) {
    try {
      report.documents.push_back(
          parse_document(record.text, record.id, parse_genre(record.genre)));
    } catch (const Error& e) {
      if (!skip_invalid) throw;
      report.rejected.emplace_back(record.id, e.what());
    }
  }
  return report;
}

records::Json document_to_json(const Document& doc) {
  records::Json gaps = records::Json::array();
  for (const GapRun& gap : doc.gaps) gaps.push_back({gap.start, gap.length});
  records::Json marks = records::Json::array();
  for (std::string_view name : doc.stripped_marks().names()) marks.push_back(name);
  records::Json out{{"id", doc.id},
                    {"genre", genre_name(doc.genre)},
                    {"text", doc.render()},
                    {"n_words", doc.words.size()},
                    {"n_signs", doc.sign_count()},
                    {"gaps", std::move(gaps)},
                    {"stripped_marks", std::move(marks)}};
  if (doc.dropped_lines > 0) out["dropped_lines"] = doc.dropped_lines;
  if (!doc.warnings.empty()) out["warnings"] = doc.warnings;
  return out;
}

void write_normalized(const std::string& path, std::span<const Document> docs) {
  std::vector<records::Json> rows;
  rows.reserve(docs.size());
  for (const Document& doc : docs) rows.push_back(document_to_json(doc));
  records::write_lines(path, rows);
}

}  // namespace lacuna::corpus
