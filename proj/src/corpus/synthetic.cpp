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

#include "corpus/synthetic.hpp"

#include <array>
#include <string_view>

#include "common/rng.hpp"

namespace lacuna::corpus {
namespace {

struct Slot {
  std::string_view sign;
  char after;  // separator following the sign: '-', '.' or ' '
};

constexpr std::array<Slot, 21> kSentence = {{
    {"a", '-'},  {"bat", ' '}, {"LUGAL", ' '}, {"a", '-'},  {"na", ' '},     {"aš", '-'},
    {"šur", ' '}, {"qi", '-'}, {"bi", '-'},    {"ma", ' '}, {"um", '-'},     {"ša", ' '},
    {"ru", '-'}, {"lu", ' '},  {"ki", '.'},    {"ti", ' '}, {"ia", ' '},     {"DINGIR", ' '},
    {"i", '-'},  {"li", '-'},  {"tu", ' '},
}};

constexpr std::array<Genre, 5> kGenres = {Genre::kRoyalInscription, Genre::kRoyalOrMonumental,
                                          Genre::kAstrologicalReport, Genre::kLexical,
                                          Genre::kDecree};

}  // namespace

std::string synthetic_sentence() {
  std::string out;
  for (const Slot& slot : kSentence) {
    out += slot.sign;
    if (&slot != &kSentence.back()) out.push_back(slot.after);
  }
  return out;
}

std::vector<RawRecord> synthetic_corpus(const SyntheticOptions& options) {
  std::vector<std::size_t> word_starts;
  for (std::size_t i = 0; i < kSentence.size(); ++i) {
    if (i == 0 || kSentence[i - 1].after == ' ') word_starts.push_back(i);
  }
  Rng rng(options.seed);
  std::vector<RawRecord> out;
  out.reserve(options.n_docs);
  for (std::size_t d = 0; d < options.n_docs; ++d) {
    const std::size_t span = options.max_signs > options.min_signs
                                 ? options.max_signs - options.min_signs + 1
                                 : 1;
    const std::size_t target = options.min_signs + rng.uniform(span);
    std::size_t slot = word_starts[rng.uniform(word_starts.size())];
    std::string text;
    std::size_t emitted = 0;
    while (true) {
      const Slot& s = kSentence[slot % kSentence.size()];
      text += s.sign;
      ++emitted;
      ++slot;
      // Stop only at a word end so documents never open or close mid-word.
      if (emitted >= target && s.after == ' ') break;
      text.push_back(s.after);
      if (s.after == ' ' && emitted % 12 == 0) text.back() = '\n';
    }
    RawRecord record;
    char id[32];
    std::snprintf(id, sizeof(id), "syn%05zu", d);
    record.id = id;
    record.genre = std::string(genre_name(kGenres[d % kGenres.size()]));
    record.text = std::move(text);
    out.push_back(std::move(record));
  }
  return out;
}

void write_raw_records(const std::string& path, const std::vector<RawRecord>& rows) {
  std::vector<records::Json> lines;
  lines.reserve(rows.size());
  for (const RawRecord& row : rows) {
    records::Json line{{"id", row.id}, {"genre", row.genre}, {"text", row.text}};
    if (!row.translation.empty()) line["translation"] = row.translation;
    lines.push_back(std::move(line));
  }
  records::write_lines(path, lines);
}

}  // namespace lacuna::corpus
