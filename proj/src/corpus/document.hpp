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

#ifndef LACUNA_CORPUS_DOCUMENT_HPP_
#define LACUNA_CORPUS_DOCUMENT_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace lacuna::corpus {

enum class Genre {
  kRoyalInscription,
  kRoyalOrMonumental,
  kAstrologicalReport,
  kLexical,
  kDecree,
  kOther,
};

inline constexpr std::array<Genre, 6> kAllGenres = {
    Genre::kRoyalInscription, Genre::kRoyalOrMonumental, Genre::kAstrologicalReport,
    Genre::kLexical,          Genre::kDecree,            Genre::kOther,
};

std::string_view genre_name(Genre genre);

// Lenient: case, spaces, hyphens and underscores are ignored, so
// "royal inscription" and "RoyalInscription" agree. Unknown or empty
// input maps to kOther.
Genre parse_genre(std::string_view text);

// Categories of editorial notation removed during normalization.
enum class Mark : std::uint8_t {
  kCertainty = 0,      // half brackets around uncertain readings
  kBreakage = 1,       // [ ] and angle brackets
  kDeterminative = 2,  // {..} classifiers, super- and subscripts
  kFlag = 3,           // ? ! # *
};

class MarkSet {
 public:
  void insert(Mark mark) { bits_ |= static_cast<std::uint8_t>(1u << static_cast<int>(mark)); }
  bool contains(Mark mark) const { return bits_ & (1u << static_cast<int>(mark)); }
  bool empty() const { return bits_ == 0; }
  MarkSet& operator|=(MarkSet other) {
    bits_ |= other.bits_;
    return *this;
  }
  bool operator==(const MarkSet&) const = default;

  std::vector<std::string_view> names() const;

 private:
  std::uint8_t bits_ = 0;
};

std::string_view mark_name(Mark mark);

struct Sign {
  std::string grapheme;
  bool is_gap = false;
  MarkSet stripped_marks;
};

struct Word {
  std::vector<Sign> signs;
  std::vector<char> delimiters;  // size() == signs.size() - 1, each '-' or '.'

  std::string render() const;
};

struct GapRun {
  std::size_t start = 0;  // global sign index
  std::size_t length = 0;

  bool operator==(const GapRun&) const = default;
};

// Position of a sign inside the word list.
struct SignLocation {
  std::size_t word = 0;
  std::size_t sign = 0;
};

struct Document {
  std::string id;
  Genre genre = Genre::kOther;
  std::vector<Word> words;
  std::vector<GapRun> gaps;
  std::vector<std::string> warnings;
  std::size_t dropped_lines = 0;

  std::size_t sign_count() const;
  std::vector<SignLocation> sign_locations() const;
  const Sign& sign_at(const SignLocation& location) const {
    return words[location.word].signs[location.sign];
  }

  // Words joined by single spaces.
  std::string render() const;

  MarkSet stripped_marks() const;
};

// Same signs, gap flags, delimiters and gap runs. Marks and warnings are
// provenance, not structure, and are ignored.
bool structurally_equal(const Document& a, const Document& b);

// Text of signs [begin, end) in normalized form: delimiters between signs of
// one word, single spaces between words.
std::string render_span(const Document& doc, std::size_t begin, std::size_t end);

// Renders the document with signs [begin, end) replaced by `x`, keeping the
// surrounding delimiters. Optionally clipped to `context` signs each side.
std::string render_with_gap(const Document& doc, std::size_t begin, std::size_t end,
                            std::size_t context = SIZE_MAX);

}  // namespace lacuna::corpus

#endif  // LACUNA_CORPUS_DOCUMENT_HPP_
