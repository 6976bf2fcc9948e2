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

#include "corpus/normalize.hpp"

#include <array>
#include <optional>

#include "common/error.hpp"
#include "common/utf8.hpp"

namespace lacuna::corpus {
namespace {

std::optional<Mark> classify(char32_t c) {
  switch (c) {
    case U'⌐': case U'¬': case U'⸢': case U'⸣': case U'˹': case U'˺':
      return Mark::kCertainty;
    case U'[': case U']': case U'⟨': case U'⟩':
      return Mark::kBreakage;
    case U'?': case U'!': case U'#': case U'*':
      return Mark::kFlag;
    default:
      break;
  }
  // Subscript digits and index x, superscript digits and modifier letters.
  if ((c >= 0x2080 && c <= 0x2089) || c == 0x2093) return Mark::kDeterminative;
  if ((c >= 0x2070 && c <= 0x207f) || c == 0x00b2 || c == 0x00b3 || c == 0x00b9) {
    return Mark::kDeterminative;
  }
  if ((c >= 0x1d2c && c <= 0x1d6a) || (c >= 0x02b0 && c <= 0x02b8)) return Mark::kDeterminative;
  return std::nullopt;
}

bool is_delimiter(char32_t c) { return c == U'-' || c == U'.'; }

// Pieces of one token after stripping: signs with the marks attached to them
// and the delimiter preceding each sign.
struct Piece {
  std::string grapheme;
  MarkSet marks;
  char delimiter = 0;  // delimiter before this piece; 0 for the first
};

struct StripResult {
  std::vector<Piece> pieces;
  MarkSet marks;
  std::vector<std::string> unknown;
};

StripResult strip_into_pieces(std::string_view token) {
  StripResult result;
  const std::u32string text = utf8::decode(utf8::nfc(token));
  Piece current;
  MarkSet pending;  // marks seen since the last closed piece
  char delimiter = 0;
  bool in_braces = false;

  auto close_piece = [&](char next_delimiter) {
    if (!current.grapheme.empty()) {
      current.marks |= pending;
      current.delimiter = delimiter;
      result.pieces.push_back(std::move(current));
      current = Piece{};
      pending = MarkSet{};
      delimiter = next_delimiter;
    } else if (delimiter == 0 || result.pieces.empty()) {
      // Leading or doubled delimiter: keep the first one seen after a sign.
      if (!result.pieces.empty() && delimiter == 0) delimiter = next_delimiter;
    }
  };

  for (char32_t c : text) {
    if (in_braces) {
      if (c == U'}') in_braces = false;
      continue;
    }
    if (c == U'{') {
      in_braces = true;
      pending.insert(Mark::kDeterminative);
      result.marks.insert(Mark::kDeterminative);
      continue;
    }
    if (c == U'}') {
      // Stray closer; treated as markup.
      pending.insert(Mark::kDeterminative);
      result.marks.insert(Mark::kDeterminative);
      continue;
    }
    if (auto mark = classify(c)) {
      // A closing mark right after a sign belongs to that sign.
      if (current.grapheme.empty() && !result.pieces.empty() && delimiter == 0) {
        result.pieces.back().marks.insert(*mark);
      } else {
        pending.insert(*mark);
      }
      result.marks.insert(*mark);
      continue;
    }
    if (is_delimiter(c)) {
      close_piece(static_cast<char>(c));
      continue;
    }
    if (!utf8::is_alnum(c) && !utf8::is_combining_mark(c)) {
      result.unknown.push_back(utf8::encode(c));
    }
    current.grapheme += utf8::encode(c);
  }
  close_piece(0);
  if (!result.pieces.empty()) result.pieces.back().marks |= pending;
  return result;
}

bool has_unknown_length_gap(std::string_view line) {
  return line.find("...") != std::string_view::npos ||
         line.find("…") != std::string_view::npos;
}

bool is_structural_line(std::string_view line) {
  const std::size_t first = line.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return true;
  const char c = line[first];
  if (c == '@' || c == '#' || c == '&' || c == '>') return true;
  if (c == '$' && (first + 1 >= line.size() || line[first + 1] == ' ')) return true;
  return false;
}

bool is_line_label(std::string_view token) {
  if (token.size() < 2 || token.back() != '.') return false;
  bool digit = false;
  for (std::size_t i = 0; i + 1 < token.size(); ++i) {
    const char c = token[i];
    if (c >= '0' && c <= '9') {
      digit = true;
    } else if (c != '\'' && !(c >= 'a' && c <= 'z')) {
      return false;
    }
  }
  return digit;
}

struct BracketPair {
  char32_t open;
  char32_t close;
};

constexpr std::array<BracketPair, 5> kPairs = {{
    {U'[', U']'}, {U'⸢', U'⸣'}, {U'⌐', U'¬'}, {U'˹', U'˺'}, {U'⟨', U'⟩'},
}};

void check_balance(const std::vector<std::string_view>& lines, const std::string& id) {
  std::array<long, kPairs.size()> depth{};
  for (std::string_view line : lines) {
    for (std::string_view token : utf8::split_whitespace(line)) {
      int braces = 0;
      for (char32_t c : utf8::decode(token)) {
        if (c == U'{') {
          if (++braces > 1) fail(ErrorCode::kUnbalancedMarkup, id + ": nested '{' in " + std::string(token));
        } else if (c == U'}') {
          if (--braces < 0) fail(ErrorCode::kUnbalancedMarkup, id + ": unmatched '}' in " + std::string(token));
        }
        for (std::size_t p = 0; p < kPairs.size(); ++p) {
          if (c == kPairs[p].open) ++depth[p];
          if (c == kPairs[p].close && --depth[p] < 0) {
            fail(ErrorCode::kUnbalancedMarkup,
                 id + ": closing " + utf8::encode(c) + " without opener");
          }
        }
      }
      if (braces != 0) fail(ErrorCode::kUnbalancedMarkup, id + ": unclosed '{' in " + std::string(token));
    }
  }
  for (std::size_t p = 0; p < kPairs.size(); ++p) {
    if (depth[p] != 0) {
      fail(ErrorCode::kUnbalancedMarkup, id + ": unclosed " + utf8::encode(kPairs[p].open));
    }
  }
}

}  // namespace

StrippedToken strip_editorial(std::string_view raw_token) {
  StripResult pieces = strip_into_pieces(raw_token);
  StrippedToken out;
  out.marks = pieces.marks;
  out.unknown = std::move(pieces.unknown);
  for (const Piece& piece : pieces.pieces) {
    if (piece.delimiter) out.grapheme.push_back(piece.delimiter);
    out.grapheme += piece.grapheme;
  }
  return out;
}

Document parse_document(std::string_view raw, std::string id, Genre genre) {
  Document doc;
  doc.id = std::move(id);
  doc.genre = genre;

  const std::string composed = utf8::nfc(raw);
  std::vector<std::string_view> lines;
  std::string_view rest = composed;
  while (!rest.empty()) {
    const std::size_t nl = rest.find('\n');
    std::string_view line = rest.substr(0, nl);
    if (!is_structural_line(line)) lines.push_back(line);
    if (nl == std::string_view::npos) break;
    rest.remove_prefix(nl + 1);
  }
  check_balance(lines, doc.id);

  for (std::string_view line : lines) {
    if (has_unknown_length_gap(line)) {
      ++doc.dropped_lines;
      continue;
    }
    std::vector<std::string_view> tokens = utf8::split_whitespace(line);
    std::size_t first = 0;
    if (!tokens.empty() && is_line_label(tokens.front())) first = 1;
    for (std::size_t t = first; t < tokens.size(); ++t) {
      StripResult stripped = strip_into_pieces(tokens[t]);
      for (const std::string& unknown : stripped.unknown) {
        doc.warnings.push_back("unknown character '" + unknown + "' kept in " +
                               std::string(tokens[t]));
      }
      if (stripped.pieces.empty()) continue;
      Word word;
      for (Piece& piece : stripped.pieces) {
        if (!word.signs.empty()) word.delimiters.push_back(piece.delimiter ? piece.delimiter : '-');
        Sign sign;
        sign.is_gap = piece.grapheme == "x";
        sign.grapheme = std::move(piece.grapheme);
        sign.stripped_marks = piece.marks;
        word.signs.push_back(std::move(sign));
      }
      doc.words.push_back(std::move(word));
    }
  }
  if (doc.words.empty()) {
    fail(ErrorCode::kEmptyAfterNormalization, doc.id + ": no signs after normalization");
  }
  doc.gaps = find_gaps(doc);
  return doc;
}

std::vector<GapRun> find_gaps(const Document& doc) {
  std::vector<GapRun> runs;
  std::size_t index = 0;
  bool open = false;
  for (const Word& word : doc.words) {
    for (const Sign& sign : word.signs) {
      if (sign.is_gap) {
        if (open) {
          ++runs.back().length;
        } else {
          runs.push_back({index, 1});
          open = true;
        }
      } else {
        open = false;
      }
      ++index;
    }
  }
  return runs;
}

}  // namespace lacuna::corpus
