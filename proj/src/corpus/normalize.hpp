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

#ifndef LACUNA_CORPUS_NORMALIZE_HPP_
#define LACUNA_CORPUS_NORMALIZE_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "corpus/document.hpp"

namespace lacuna::corpus {

struct StrippedToken {
  std::string grapheme;
  MarkSet marks;
  // Characters that are neither letters, digits, delimiters nor known marks.
  // They are kept in the grapheme and reported here.
  std::vector<std::string> unknown;
};

// Removes editorial notation from one whitespace-free token:
//   certainty   ⌐ ¬ ⸢ ⸣ ˹ ˺
//   breakage    [ ] ⟨ ⟩
//   determinative {..} (content included), superscript letters/digits,
//               subscript digits and ₓ
//   flag        ? ! # *
// Delimiters '-' and '.' are kept. The token is NFC-composed first.
StrippedToken strip_editorial(std::string_view raw_token);

// Parses raw transliteration (lines separated by '\n') into a Document.
//
// Lines starting with '@', '#', '&', '>' or "$ " are structural/comment lines
// and skipped. A leading line label such as "1." or "12'." is dropped. Lines
// with a gap of unknown length ("..." or "…") are dropped and counted in
// Document::dropped_lines.
//
// Throws Error(kUnbalancedMarkup) when a bracket pair does not close within
// the document (braces must close within their token), and
// Error(kEmptyAfterNormalization) when no sign survives.
Document parse_document(std::string_view raw, std::string id, Genre genre);

// Maximal runs of consecutive gap signs, in order.
std::vector<GapRun> find_gaps(const Document& doc);

}  // namespace lacuna::corpus

#endif  // LACUNA_CORPUS_NORMALIZE_HPP_
