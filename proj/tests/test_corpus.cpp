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

#include <doctest.h>

#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "common/error.hpp"
#include "common/records.hpp"
#include "corpus/document.hpp"
#include "corpus/normalize.hpp"
#include "corpus/stats.hpp"
#include "corpus/synthetic.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace lacuna;
using namespace lacuna::corpus;

namespace {

using testing::golden_lines;
using testing::GoldenLine;

std::size_t count_x(const Document& doc) {
  std::size_t n = 0;
  for (const Word& w : doc.words) {
    for (const Sign& s : w.signs) n += s.grapheme == "x";
  }
  return n;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kInvalidArgument;
}

}  // namespace

TEST_SUITE("corpus") {
  TEST_CASE("golden lines normalize to their hand-written form") {
    const auto lines = golden_lines();
    REQUIRE(lines.size() >= 50);
    for (const GoldenLine& g : lines) {
      CAPTURE(g.raw);
      const Document doc = parse_document(g.raw, "golden", Genre::kOther);
      CHECK(doc.render() == g.expected);
    }
  }

  TEST_CASE("golden lines: parse, render, parse is a fixed point") {
    for (const GoldenLine& g : golden_lines()) {
      CAPTURE(g.raw);
      const Document first = parse_document(g.raw, "golden", Genre::kOther);
      const Document second = parse_document(first.render(), "golden", Genre::kOther);
      CHECK(structurally_equal(first, second));
      CHECK(second.render() == first.render());
      CHECK(second.stripped_marks().empty());
    }
  }

  TEST_CASE("golden lines: gap runs add up to the x count") {
    for (const GoldenLine& g : golden_lines()) {
      CAPTURE(g.raw);
      const Document doc = parse_document(g.raw, "golden", Genre::kOther);
      std::size_t total = 0;
      for (const GapRun& run : doc.gaps) total += run.length;
      CHECK(total == count_x(doc));
      CHECK(total == g.gap_signs);
      CHECK(doc.gaps == find_gaps(doc));
    }
  }

  TEST_CASE("golden lines cover every editorial mark category") {
    MarkSet seen;
    for (const GoldenLine& g : golden_lines()) {
      seen |= parse_document(g.raw, "golden", Genre::kOther).stripped_marks();
    }
    for (Mark m : {Mark::kCertainty, Mark::kBreakage, Mark::kDeterminative, Mark::kFlag}) {
      CAPTURE(mark_name(m));
      CHECK(seen.contains(m));
    }
  }

  TEST_CASE("strip_editorial examples") {
    CHECK(strip_editorial("⌐a¬-bat").grapheme == "a-bat");
    CHECK(strip_editorial("{d}AMAR.UTU").grapheme == "AMAR.UTU");
    CHECK(strip_editorial("be-li₂-ia").grapheme == "be-li-ia");
    CHECK(strip_editorial("[x]-x").grapheme == "x-x");
    const StrippedToken flagged = strip_editorial("UGU?!");
    CHECK(flagged.grapheme == "UGU");
    CHECK(flagged.marks.contains(Mark::kFlag));
    CHECK(strip_editorial("a%b").unknown == std::vector<std::string>{"%"});
  }

  TEST_CASE("gap runs are maximal and indexed by global sign position") {
    const Document doc = parse_document("a-na x x LUGAL x-ti x", "d", Genre::kOther);
    REQUIRE(doc.gaps.size() == 3);
    CHECK(doc.gaps[0] == GapRun{2, 2});
    CHECK(doc.gaps[1] == GapRun{5, 1});
    CHECK(doc.gaps[2] == GapRun{7, 1});
    CHECK(doc.sign_count() == 8);
  }

  TEST_CASE("structural lines, labels and unknown-length gaps") {
    const Document doc = parse_document(
        "@obverse\n# note\n$ broken\n&P123 = X\n1. a-na LUGAL\n2'. [...] be-li\n3. ARAD-ka …\n4. ša",
        "d", Genre::kDecree);
    CHECK(doc.render() == "a-na LUGAL ša");
    CHECK(doc.dropped_lines == 2);
  }

  TEST_CASE("unbalanced markup and empty documents are rejected") {
    CHECK(code_of([] { parse_document("[a-na LUGAL", "d", Genre::kOther); }) ==
          ErrorCode::kUnbalancedMarkup);
    CHECK(code_of([] { parse_document("a-na] LUGAL", "d", Genre::kOther); }) ==
          ErrorCode::kUnbalancedMarkup);
    CHECK(code_of([] { parse_document("{d AMAR", "d", Genre::kOther); }) ==
          ErrorCode::kUnbalancedMarkup);
    CHECK(code_of([] { parse_document("@obverse\n[...]", "d", Genre::kOther); }) ==
          ErrorCode::kEmptyAfterNormalization);
    CHECK(code_of([] { parse_document("", "d", Genre::kOther); }) ==
          ErrorCode::kEmptyAfterNormalization);
  }

  TEST_CASE("brackets may span lines within a document") {
    const Document doc = parse_document("a-na [LUGAL\nbe]-li", "d", Genre::kOther);
    CHECK(doc.render() == "a-na LUGAL be-li");
  }

  TEST_CASE("genre names parse leniently") {
    CHECK(parse_genre("Royal Inscription") == Genre::kRoyalInscription);
    CHECK(parse_genre("royal_inscription") == Genre::kRoyalInscription);
    CHECK(parse_genre("astrological-report") == Genre::kAstrologicalReport);
    CHECK(parse_genre("") == Genre::kOther);
    CHECK(parse_genre("poetry") == Genre::kOther);
    for (Genre g : kAllGenres) CHECK(parse_genre(genre_name(g)) == g);
  }

  TEST_CASE("render_span and render_with_gap") {
    const Document doc = parse_document("a-bat LUGAL a-na aš-šur", "d", Genre::kOther);
    CHECK(render_span(doc, 3, 5) == "a-na");
    CHECK(render_span(doc, 2, 4) == "LUGAL a");
    CHECK(render_with_gap(doc, 3, 5) == "a-bat LUGAL x-x aš-šur");
    CHECK(render_with_gap(doc, 3, 4, 1) == "LUGAL x-na");
  }

  TEST_CASE("corpus statistics count texts, words and signs per genre") {
    std::vector<Document> docs;
    docs.push_back(parse_document("a-na LUGAL", "1", Genre::kLexical));
    docs.push_back(parse_document("a-bat LUGAL a-na aš-šur", "2", Genre::kLexical));
    docs.push_back(parse_document("x x", "3", Genre::kDecree));
    const CorpusStats stats = corpus_stats(docs);
    CHECK(stats.total == Counts{3, 8, 12});
    CHECK(stats.per_genre.at(Genre::kLexical) == Counts{2, 6, 10});
    CHECK(stats.per_genre.at(Genre::kDecree) == Counts{1, 2, 2});
    CHECK(stats.per_genre.at(Genre::kOther) == Counts{});
    CHECK(stats.per_genre.size() == kAllGenres.size());
    CHECK(format_stats_table(stats).find("total") != std::string::npos);
  }

  TEST_CASE("stats of a union equal the sum of stats") {
    const auto rows = synthetic_corpus({.n_docs = 30, .seed = 4});
    std::vector<Document> docs;
    for (const auto& r : rows) docs.push_back(parse_document(r.text, r.id, parse_genre(r.genre)));
    const std::span<const Document> all(docs);
    CHECK(corpus_stats(all) == corpus_stats(all.first(11)) + corpus_stats(all.subspan(11)));
  }

  TEST_CASE("split is deterministic, disjoint and complete") {
    const auto rows = synthetic_corpus({.n_docs = 50, .seed = 9});
    std::vector<Document> docs;
    for (const auto& r : rows) docs.push_back(parse_document(r.text, r.id, parse_genre(r.genre)));
    const auto [train1, test1] = split_corpus(docs, 0.2, 3);
    const auto [train2, test2] = split_corpus(docs, 0.2, 3);
    CHECK(test1.size() == 10);
    CHECK(train1.size() == 40);
    std::set<std::string> ids;
    for (const auto& d : train1) ids.insert(d.id);
    for (const auto& d : test1) {
      CHECK(ids.insert(d.id).second);
    }
    CHECK(ids.size() == docs.size());
    for (std::size_t i = 0; i < test1.size(); ++i) CHECK(test1[i].id == test2[i].id);
    const auto [train3, test3] = split_corpus(docs, 0.2, 4);
    bool differs = false;
    for (std::size_t i = 0; i < test1.size(); ++i) differs |= test1[i].id != test3[i].id;
    CHECK(differs);
    CHECK_THROWS_AS(split_corpus(std::span<const Document>(docs).first(1), 0.2, 1), Error);
  }

  TEST_CASE("corpus files load, report rejects and round trip") {
    testing::TempDir dir("corpus");
    const std::string raw = dir.file("raw.jsonl");
    records::write_lines(raw, {
        {{"id", "a"}, {"genre", "Decree"}, {"text", "a-na LUGAL\nbe-li₂-ia"}},
        {{"id", "b"}, {"genre", "Lexical"}, {"text", "[a-na"}},
        {{"id", "c"}, {"genre", "?"}, {"text", "x x ša"}, {"translation", "unused"}},
    });
    CHECK_THROWS_AS(load_corpus(raw), Error);
    const LoadReport report = load_corpus(raw, true);
    REQUIRE(report.documents.size() == 2);
    REQUIRE(report.rejected.size() == 1);
    CHECK(report.rejected[0].first == "b");
    CHECK(report.documents[1].genre == Genre::kOther);

    const std::string normalized = dir.file("norm.jsonl");
    write_normalized(normalized, report.documents);
    const LoadReport again = load_corpus(normalized);
    REQUIRE(again.documents.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
      CHECK(structurally_equal(again.documents[i], report.documents[i]));
      CHECK(again.documents[i].genre == report.documents[i].genre);
    }
  }

  TEST_CASE("synthetic corpus is deterministic and made of the cyclic sentence") {
    const auto a = synthetic_corpus({.n_docs = 20, .seed = 2});
    const auto b = synthetic_corpus({.n_docs = 20, .seed = 2});
    REQUIRE(a.size() == 20);
    const Document sentence = parse_document(synthetic_sentence(), "s", Genre::kOther);
    std::set<std::string> alphabet;
    for (const Word& w : sentence.words) {
      for (const Sign& s : w.signs) alphabet.insert(s.grapheme);
    }
    CHECK(alphabet.size() == 20);
    std::size_t longest_word = 0;
    for (const Word& w : sentence.words) longest_word = std::max(longest_word, w.signs.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].text == b[i].text);
      const Document doc = parse_document(a[i].text, a[i].id, parse_genre(a[i].genre));
      CHECK(doc.sign_count() >= 60);
      // Documents close at the first word end after the target length.
      CHECK(doc.sign_count() <= 110 + longest_word - 1);
      // Every document is a window of the repeated sentence.
      std::string repeated;
      while (repeated.size() < 2 * doc.render().size() + 200) repeated += sentence.render() + " ";
      CHECK(repeated.find(doc.render()) != std::string::npos);
    }
  }
}
