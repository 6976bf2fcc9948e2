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

#include "corpus/document.hpp"

#include <algorithm>
#include <cctype>

namespace lacuna::corpus {

std::string_view genre_name(Genre genre) {
  switch (genre) {
    case Genre::kRoyalInscription: return "RoyalInscription";
    case Genre::kRoyalOrMonumental: return "RoyalOrMonumental";
    case Genre::kAstrologicalReport: return "AstrologicalReport";
    case Genre::kLexical: return "Lexical";
    case Genre::kDecree: return "Decree";
    case Genre::kOther: return "Other";
  }
  return "Other";
}

Genre parse_genre(std::string_view text) {
  std::string key;
  for (char c : text) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  for (Genre genre : kAllGenres) {
    std::string name;
    for (char c : genre_name(genre)) {
      name.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    if (key == name) return genre;
  }
  if (key == "royalormonumental" || key == "monumental" || key == "royalmonumental") {
    return Genre::kRoyalOrMonumental;
  }
  if (key == "astrological" || key == "astrologicalreports") return Genre::kAstrologicalReport;
  if (key == "royalinscriptions") return Genre::kRoyalInscription;
  if (key == "decrees") return Genre::kDecree;
  return Genre::kOther;
}

std::string_view mark_name(Mark mark) {
  switch (mark) {
    case Mark::kCertainty: return "certainty";
    case Mark::kBreakage: return "breakage";
    case Mark::kDeterminative: return "determinative";
    case Mark::kFlag: return "flag";
  }
  return "unknown";
}

std::vector<std::string_view> MarkSet::names() const {
  std::vector<std::string_view> out;
  for (Mark mark : {Mark::kCertainty, Mark::kBreakage, Mark::kDeterminative, Mark::kFlag}) {
    if (contains(mark)) out.push_back(mark_name(mark));
  }
  return out;
}

std::string Word::render() const {
  std::string out;
  for (std::size_t i = 0; i < signs.size(); ++i) {
    if (i > 0) out.push_back(delimiters[i - 1]);
    out += signs[i].grapheme;
  }
  return out;
}

std::size_t Document::sign_count() const {
  std::size_t n = 0;
  for (const Word& word : words) n += word.signs.size();
  return n;
}

std::vector<SignLocation> Document::sign_locations() const {
  std::vector<SignLocation> out;
  out.reserve(sign_count());
  for (std::size_t w = 0; w < words.size(); ++w) {
    for (std::size_t s = 0; s < words[w].signs.size(); ++s) out.push_back({w, s});
  }
  return out;
}

std::string Document::render() const {
  std::string out;
  for (const Word& word : words) {
    if (!out.empty()) out.push_back(' ');
    out += word.render();
  }
  return out;
}

MarkSet Document::stripped_marks() const {
  MarkSet marks;
  for (const Word& word : words) {
    for (const Sign& sign : word.signs) marks |= sign.stripped_marks;
  }
  return marks;
}

bool structurally_equal(const Document& a, const Document& b) {
  if (a.words.size() != b.words.size() || a.gaps != b.gaps) return false;
  for (std::size_t w = 0; w < a.words.size(); ++w) {
    const Word& x = a.words[w];
    const Word& y = b.words[w];
    if (x.delimiters != y.delimiters || x.signs.size() != y.signs.size()) return false;
    for (std::size_t s = 0; s < x.signs.size(); ++s) {
      if (x.signs[s].grapheme != y.signs[s].grapheme || x.signs[s].is_gap != y.signs[s].is_gap) {
        return false;
      }
    }
  }
  return true;
}

namespace {

// Shared walker: emits each sign in [begin, end) with the separator that
// precedes it (nothing for the first).
template <typename Emit>
void walk_span(const Document& doc, std::size_t begin, std::size_t end, Emit&& emit) {
  std::size_t index = 0;
  bool first = true;
  for (const Word& word : doc.words) {
    for (std::size_t s = 0; s < word.signs.size(); ++s, ++index) {
      if (index < begin || index >= end) continue;
      char separator = 0;
      if (!first) separator = s == 0 ? ' ' : word.delimiters[s - 1];
      emit(separator, index, word.signs[s]);
      first = false;
    }
  }
}

}  // namespace

std::string render_span(const Document& doc, std::size_t begin, std::size_t end) {
  std::string out;
  walk_span(doc, begin, end, [&](char separator, std::size_t, const Sign& sign) {
    if (separator) out.push_back(separator);
    out += sign.grapheme;
  });
  return out;
}

std::string render_with_gap(const Document& doc, std::size_t begin, std::size_t end,
                            std::size_t context) {
  const std::size_t total = doc.sign_count();
  const std::size_t from = begin > context ? begin - context : 0;
  const std::size_t to = context == SIZE_MAX ? total : std::min(total, end + context);
  std::string out;
  walk_span(doc, from, to, [&](char separator, std::size_t index, const Sign& sign) {
    if (separator) out.push_back(separator);
    out += (index >= begin && index < end) ? std::string("x") : sign.grapheme;
  });
  return out;
}

}  // namespace lacuna::corpus
