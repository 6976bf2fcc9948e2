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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 when any
// criterion fails.
//
//   acceptance <path to lacuna CLI> <scratch directory>

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "common/error.hpp"
#include "common/records.hpp"
#include "common/rng.hpp"
#include "corpus/normalize.hpp"
#include "corpus/stats.hpp"
#include "corpus/synthetic.hpp"
#include "decoder/beam.hpp"
#include "eval/agreement.hpp"
#include "eval/annotation.hpp"
#include "eval/metrics.hpp"
#include "eval/span_eval.hpp"
#include "eval/token_eval.hpp"
#include "model/masking.hpp"
#include "model/trainer.hpp"
#include "model/transformer.hpp"
#include "model/windows.hpp"
#include "oracles.hpp"
#include "support.hpp"
#include "tokenizer/wordpiece.hpp"

namespace {

using namespace lacuna;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Records the first failed check of a criterion.
class Checker {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok && outcome_.pass) {
      outcome_.pass = false;
      outcome_.detail = what;
    }
  }
  void note(const std::string& text) {
    if (outcome_.pass) outcome_.detail = text;
  }
  Outcome result() const { return outcome_; }

 private:
  Outcome outcome_;
};

std::string fmt(const char* pattern, double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), pattern, value);
  return buffer;
}

int failures = 0;

void run(const std::string& name, const std::function<Outcome()>& criterion) {
  const auto start = Clock::now();
  Outcome outcome;
  try {
    outcome = criterion();
  } catch (const std::exception& e) {
    outcome = {false, std::string("exception: ") + e.what()};
  }
  const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
  if (!outcome.pass) ++failures;
  std::printf("%s  %-24s %7.1fs  %s\n", outcome.pass ? "PASS" : "FAIL", name.c_str(), seconds,
              outcome.detail.c_str());
  std::fflush(stdout);
}

double elapsed(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Micro model, every tensor against central differences, under a minute.
Outcome gradient_oracle() {
  const auto start = Clock::now();
  model::ModelConfig c;
  c.vocab_size = 12;
  c.max_seq_len = 10;
  c.d_model = 8;
  c.n_layers = 2;
  c.n_heads = 2;
  c.d_ff = 16;
  c.dropout = 0.0;
  model::BasicModel<double> m(c, 7);
  Rng rng(99);
  for (double& p : m.parameters()) p += 0.05 * rng.normal();
  model::MaskedBatch b;
  b.input_ids = model::Grid<tokenizer::TokenId>(2, 7, tokenizer::kPad);
  b.labels = model::Grid<tokenizer::TokenId>(2, 7, model::kIgnoreLabel);
  b.attention_mask = model::Grid<std::uint8_t>(2, 7, 1);
  const int ids[2][7] = {{3, 5, 2, 7, 8, 2, 4}, {3, 9, 10, 2, 4, 0, 0}};
  for (int r = 0; r < 2; ++r) {
    for (int i = 0; i < 7; ++i) {
      b.input_ids.at(r, i) = ids[r][i];
      if (ids[r][i] == tokenizer::kPad) b.attention_mask.at(r, i) = 0;
    }
  }
  b.labels.at(0, 2) = 6;
  b.labels.at(0, 5) = 11;
  b.labels.at(1, 3) = 5;
  b.mask_positions = {{2, 5}, {3}};

  std::vector<double> gradient(m.parameter_count(), 0.0);
  m.loss_and_gradient(b, gradient, nullptr);
  std::vector<double> scratch(m.parameter_count());
  Checker check;
  double worst = 0.0;
  std::string worst_name;
  for (const model::NamedSlot& t : m.layout().tensors()) {
    double tensor_worst = 0.0;
    for (std::size_t i = 0; i < t.slot.size(); ++i) {
      const std::size_t k = t.slot.offset + i;
      const double original = m.parameters()[k];
      const double h = 1e-5;
      m.parameters()[k] = original + h;
      const double plus = m.loss_and_gradient(b, scratch, nullptr).loss;
      m.parameters()[k] = original - h;
      const double minus = m.loss_and_gradient(b, scratch, nullptr).loss;
      m.parameters()[k] = original;
      const double numeric = (plus - minus) / (2 * h);
      const double denom = std::max(1e-6, std::abs(numeric) + std::abs(gradient[k]));
      tensor_worst = std::max(tensor_worst, std::abs(numeric - gradient[k]) / denom);
    }
    check.expect(tensor_worst < 1e-4, t.name + " relative error " + fmt("%.2e", tensor_worst));
    if (tensor_worst > worst) {
      worst = tensor_worst;
      worst_name = t.name;
    }
  }
  check.expect(elapsed(start) < 60.0, "slower than one minute");
  check.note(std::to_string(m.layout().tensors().size()) + " tensors, worst relative error " +
             fmt("%.2e", worst) + " (" + worst_name + "), bound 1e-4");
  return check.result();
}

// Train on the cyclic synthetic language and evaluate on held-out documents.
Outcome synthetic_mastery() {
  const auto start = Clock::now();
  std::vector<corpus::Document> docs;
  for (const auto& r : corpus::synthetic_corpus({})) {
    docs.push_back(corpus::parse_document(r.text, r.id, corpus::parse_genre(r.genre)));
  }
  const auto [train_docs, test_docs] = corpus::split_corpus(docs, 0.2, 1);
  const tokenizer::Vocabulary vocab = tokenizer::train_wordpiece(train_docs, 4000, 1);
  std::size_t tokens = 0;
  for (const auto& d : docs) tokens += tokenizer::encode(vocab, d.render()).ids.size();

  model::ModelConfig config;
  config.vocab_size = static_cast<int>(vocab.size());
  config.max_seq_len = 64;
  config.d_model = 64;
  config.n_layers = 2;
  config.n_heads = 2;
  config.d_ff = 128;
  config.dropout = 0.0;
  model::Model m(config, 1);
  model::TrainOptions options;
  options.steps = 3000;
  options.batch_size = 16;
  options.learning_rate = 1e-3;
  options.seed = 1;
  model::train(m, model::training_windows(vocab, train_docs, config.max_seq_len),
               model::TokenClasses::from_vocabulary(vocab), options);

  const eval::EvalReport tokens_report =
      eval::evaluate_token_level(m, vocab, test_docs, {.seed = 1});
  const eval::SpanCurve curve = eval::evaluate_span_level(m, vocab, test_docs, {.seed = 1});
  const double seconds = elapsed(start);

  Checker check;
  const double hit1 = tokens_report.overall.hit_at.at(1);
  check.expect(hit1 >= 0.95, "token Hit@1 " + fmt("%.3f", hit1) + " < 0.95");
  check.expect(curve.points.size() == 4 && curve.points.front().length == 1,
               "span curve is missing lengths");
  std::string shape;
  double previous = 1.0;
  for (const eval::SpanPoint& p : curve.points) {
    const double h5 = p.hit_at.at(5);
    shape += (shape.empty() ? "" : " ") + fmt("%.2f", h5);
    check.expect(h5 <= previous, "span Hit@5 rises at length " + std::to_string(p.length));
    previous = h5;
  }
  if (!curve.points.empty()) {
    const double h5 = curve.points.front().hit_at.at(5);
    check.expect(h5 >= 0.95, "span Hit@5 at length 1 " + fmt("%.3f", h5) + " < 0.95");
  }
  check.expect(seconds < 15 * 60, "slower than 15 minutes");
  check.note(std::to_string(tokens) + " tokens; token Hit@1 " + fmt("%.3f", hit1) +
             "; span Hit@5 by length 1-4: " + shape);
  return check.result();
}

Outcome decoder_oracle() {
  Checker check;
  const auto vocab = testing::make_vocabulary({"-", "a", "b", "##a", "##b"});
  int cases = 0;
  for (std::uint64_t salt = 0; salt < 20; ++salt) {
    const testing::HashPredictor p(static_cast<int>(vocab.size()), 32, salt);
    for (int n : {1, 2}) {
      for (int max : {1, 2}) {
        decoder::GapQuery q;
        q.left = tokenizer::encode(vocab, "a-b").ids;
        q.right = tokenizer::encode(vocab, "ba").ids;
        q.n_signs = n;
        q.max_tokens_per_sign = max;
        q.beam_width = 1;
        const auto oracle = testing::exhaustive(p, vocab, q);
        q.beam_width = static_cast<int>(oracle.size()) + 1;
        const auto beam = decoder::complete_gap(p, vocab, q);
        bool same = beam.size() == oracle.size();
        for (std::size_t i = 0; same && i < beam.size(); ++i) {
          same = beam[i].tokens == oracle[i].tokens &&
                 std::abs(beam[i].logprob - oracle[i].logprob) < 1e-9;
        }
        check.expect(same, "full-width beam differs from enumeration (n=" + std::to_string(n) +
                               ", max=" + std::to_string(max) + ")");
        for (int k : {1, 2, 3}) {
          q.beam_width = k;
          const auto narrow = decoder::complete_gap(p, vocab, q);
          check.expect(narrow.front().logprob <= oracle.front().logprob + 1e-12,
                       "narrow beam beats the exhaustive optimum");
        }
        ++cases;
      }
    }
  }
  check.note(std::to_string(cases) + " queries, vocab 5, n<=2, max tokens per sign <=2");
  return check.result();
}

Outcome metric_checks() {
  Checker check;
  const std::vector<eval::Rank> r124 = {1, 2, 4};
  const double m = eval::mrr(r124);
  check.expect(std::abs(m - 0.58333) < 1e-5 && std::abs(m - 7.0 / 12.0) < 1e-9,
               "mrr([1,2,4]) = " + fmt("%.9f", m));

  Rng rng(17);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<eval::Rank> ranks(1 + rng.uniform(30));
    for (eval::Rank& r : ranks) {
      r = rng.bernoulli(0.1) ? eval::Rank{} : eval::Rank(1 + static_cast<int>(rng.uniform(20)));
    }
    double previous = 0.0;
    for (int k = 1; k <= 21; ++k) {
      const double h = eval::hit_at_k(ranks, k);
      check.expect(h >= previous, "hit@k decreased in k");
      previous = h;
    }
  }

  std::vector<corpus::Document> docs;
  for (const auto& r : corpus::synthetic_corpus({.n_docs = 60, .seed = 5})) {
    docs.push_back(corpus::parse_document(r.text, r.id, corpus::parse_genre(r.genre)));
  }
  const auto vocab = tokenizer::train_wordpiece(docs, 80, 1);
  const int v = static_cast<int>(vocab.size());
  const testing::HashPredictor random_model(v, 64, 12345);
  const auto report = eval::evaluate_token_level(random_model, vocab, docs, {.seed = 3});
  double harmonic = 0.0;
  double squares = 0.0;
  for (int r = 1; r <= v; ++r) {
    harmonic += 1.0 / r;
    squares += 1.0 / (static_cast<double>(r) * r);
  }
  const double mean = harmonic / v;
  const double sigma = std::sqrt((squares / v - mean * mean) / static_cast<double>(report.overall.n));
  const double z = (report.overall.mrr - mean) / sigma;
  check.expect(std::abs(z) < 3.0, "random-model MRR is " + fmt("%.2f", z) + " sigma off");
  check.note("mrr([1,2,4]) = " + fmt("%.9f", m) + "; 1000 monotone rank lists; random model z = " +
             fmt("%.2f", z));
  return check.result();
}

Outcome parser_round_trip() {
  Checker check;
  const auto lines = testing::golden_lines();
  check.expect(lines.size() >= 50, "golden corpus has fewer than 50 lines");
  corpus::MarkSet seen;
  for (const auto& g : lines) {
    const corpus::Document first = corpus::parse_document(g.raw, "g", corpus::Genre::kOther);
    const corpus::Document second = corpus::parse_document(first.render(), "g", corpus::Genre::kOther);
    check.expect(corpus::structurally_equal(first, second), "not a fixed point: " + g.raw);
    check.expect(first.render() == g.expected, "unexpected normalization of " + g.raw);
    std::size_t gaps = 0;
    std::size_t xs = 0;
    for (const auto& run : first.gaps) gaps += run.length;
    for (const auto& w : first.words) {
      for (const auto& s : w.signs) xs += s.grapheme == "x";
    }
    check.expect(gaps == xs && gaps == g.gap_signs, "gap total differs from x count: " + g.raw);
    seen |= first.stripped_marks();
  }
  for (corpus::Mark mark : {corpus::Mark::kCertainty, corpus::Mark::kBreakage,
                            corpus::Mark::kDeterminative, corpus::Mark::kFlag}) {
    check.expect(seen.contains(mark), std::string("no golden line with ") +
                                          std::string(corpus::mark_name(mark)));
  }
  check.note(std::to_string(lines.size()) + " golden lines, all four mark categories");
  return check.result();
}

Outcome tokenizer_round_trip() {
  Checker check;
  const auto docs = testing::training_documents();
  const auto a = tokenizer::train_wordpiece(docs, 400, 1);
  const auto b = tokenizer::train_wordpiece(docs, 400, 1);
  check.expect(a == b, "vocabulary training is not deterministic");
  const auto [initial, internal] = testing::charset(docs);
  Rng rng(2024);
  for (int i = 0; i < 1000; ++i) {
    const std::string text = testing::random_text(rng, initial, internal);
    const auto first = tokenizer::encode(a, text);
    const auto second = tokenizer::encode(b, text);
    check.expect(first.ids == second.ids, "encoding is not deterministic: " + text);
    check.expect(tokenizer::decode(a, first.ids) == text, "round trip failed: " + text);
  }
  check.note("1000 random strings, vocabulary of " + std::to_string(a.size()));
  return check.result();
}

Outcome annotation_invariants() {
  Checker check;
  std::vector<corpus::Document> docs;
  for (const auto& r : corpus::synthetic_corpus({.n_docs = 60, .seed = 7})) {
    docs.push_back(corpus::parse_document(r.text, r.id, corpus::parse_genre(r.genre)));
  }
  const auto vocab = tokenizer::train_wordpiece(docs, 80, 1);
  const testing::HashPredictor model(static_cast<int>(vocab.size()), 128, 3, 1.0);
  const std::vector<int> lengths = {1, 2, 3, 4};
  const auto instances = eval::generate_annotation_instances(
      model, vocab, docs, docs, 1000, lengths, 11, {.beam_width = 6, .max_tokens_per_sign = 3});
  check.expect(instances.size() == 1000, "only " + std::to_string(instances.size()) + " instances");
  std::array<double, 5> gold_slots{};
  std::array<double, 5> distractor_slots{};
  for (const auto& inst : instances) {
    std::map<eval::Provenance, int> counts;
    for (std::size_t i = 0; i < eval::kOptionCount; ++i) {
      ++counts[inst.provenance[i]];
      const auto signs =
          corpus::parse_document(inst.options[i], "o", corpus::Genre::kOther).sign_count();
      check.expect(signs == inst.gap.length, "option length differs from gap: " + inst.instance_id);
      if (inst.provenance[i] == eval::Provenance::kGold) ++gold_slots[i];
      if (inst.provenance[i] == eval::Provenance::kDistractor) ++distractor_slots[i];
    }
    check.expect(counts[eval::Provenance::kGold] == 1, "gold not exactly once: " + inst.instance_id);
    check.expect(counts[eval::Provenance::kModel] == 3 && counts[eval::Provenance::kDistractor] == 1,
                 "wrong provenance mix: " + inst.instance_id);
  }
  // Critical value of chi-square with 4 degrees of freedom at 0.01.
  const double critical = 13.277;
  double chi_gold = 0.0;
  double chi_distractor = 0.0;
  const double expected = static_cast<double>(instances.size()) / 5.0;
  for (std::size_t i = 0; i < 5; ++i) {
    chi_gold += (gold_slots[i] - expected) * (gold_slots[i] - expected) / expected;
    chi_distractor += (distractor_slots[i] - expected) * (distractor_slots[i] - expected) / expected;
  }
  check.expect(chi_gold < critical, "gold slots not uniform, chi2 " + fmt("%.2f", chi_gold));
  check.expect(chi_distractor < critical,
               "distractor slots not uniform, chi2 " + fmt("%.2f", chi_distractor));
  check.note(std::to_string(instances.size()) + " instances; chi2 gold " + fmt("%.2f", chi_gold) +
             ", distractor " + fmt("%.2f", chi_distractor) + " < 13.277");
  return check.result();
}

double kappa(const std::vector<bool>& x, const std::vector<bool>& y) {
  const std::unique_ptr<bool[]> xs(new bool[x.size()]);
  const std::unique_ptr<bool[]> ys(new bool[y.size()]);
  std::copy(x.begin(), x.end(), xs.get());
  std::copy(y.begin(), y.end(), ys.get());
  return eval::cohen_kappa(std::span<const bool>(xs.get(), x.size()),
                           std::span<const bool>(ys.get(), y.size()));
}

Outcome kappa_checks() {
  Checker check;
  const std::vector<bool> a = {true, true, false, false};
  const std::vector<bool> b = {true, false, true, false};
  check.expect(kappa(a, a) == 1.0, "identical labelings are not 1");
  check.expect(std::abs(kappa(a, b)) < 1e-12, "hand example is not 0");
  Rng rng(8);
  int pairs = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 4 + rng.uniform(40);
    std::vector<bool> x(n);
    std::vector<bool> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = rng.bernoulli(0.6);
      y[i] = rng.bernoulli(0.3) ? !x[i] : x[i];
    }
    try {
      check.expect(std::abs(kappa(x, y) - kappa(y, x)) < 1e-12, "kappa is not symmetric");
      ++pairs;
    } catch (const Error& e) {
      check.expect(e.code() == ErrorCode::kDegenerateMarginals, "unexpected kappa error");
    }
  }
  check.note("identity 1.0, hand example 0.0, symmetric on " + std::to_string(pairs) +
             " random pairs");
  return check.result();
}

int shell(const std::string& command) {
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string quote(const std::string& s) { return "'" + s + "'"; }

// prepare -> tokenizer-train -> train -> eval -> suggest through the CLI.
Outcome end_to_end(const std::string& cli, const fs::path& dir) {
  const auto start = Clock::now();
  Checker check;
  fs::remove_all(dir);
  fs::create_directories(dir);
  const auto path = [&](const std::string& name) { return quote((dir / name).string()); };
  const std::string exe = quote(cli);
  {
    std::FILE* f = std::fopen((dir / "model.cfg").c_str(), "w");
    std::fputs("d_model = 64\nn_layers = 2\nn_heads = 2\nd_ff = 128\nmax_seq_len = 64\n"
               "dropout = 0.0\nbatch_size = 16\nlearning_rate = 0.001\n",
               f);
    std::fclose(f);
  }
  const std::vector<std::pair<std::string, std::string>> steps = {
      {"synth", exe + " synth --out " + path("raw.jsonl") + " --seed 1 > /dev/null"},
      {"prepare", exe + " prepare --in " + path("raw.jsonl") + " --out-dir " + path("data") +
                      " --seed 1 > " + path("prepare.json")},
      {"tokenizer-train", exe + " tokenizer-train --corpus " + path("data/train.jsonl") +
                              " --vocab-size 4000 --out " + path("vocab.txt") + " > /dev/null"},
      {"train", exe + " train --corpus " + path("data/train.jsonl") + " --vocab " +
                    path("vocab.txt") + " --config " + path("model.cfg") +
                    " --steps 1500 --seed 1 --out " + path("model.ckpt") + " --log " +
                    path("train.log") + " 2> /dev/null"},
      {"eval", exe + " eval --ckpt " + path("model.ckpt") + " --vocab " + path("vocab.txt") +
                   " --corpus " + path("data/test.jsonl") + " --format records > " +
                   path("eval.json")},
      {"suggest", exe + " suggest --ckpt " + path("model.ckpt") + " --vocab " + path("vocab.txt") +
                      " --text 'a-bat LUGAL x x aš-šur' --k 5 --format records > " +
                      path("suggest.json")},
  };
  for (const auto& [name, command] : steps) {
    const int code = shell(command);
    check.expect(code == 0, name + " exited with " + std::to_string(code));
    if (code != 0) return check.result();
  }
  const records::Json response =
      records::Json::parse(records::read_file((dir / "suggest.json").string()));
  const auto& suggestions = response.at("suggestions");
  check.expect(suggestions.size() == 5, std::to_string(suggestions.size()) + " suggestions");
  std::string top;
  for (const auto& s : suggestions) {
    const std::string surface = s.at("surface");
    if (top.empty()) top = surface;
    const auto n = corpus::parse_document(surface, "s", corpus::Genre::kOther).sign_count();
    check.expect(n == 2 && s.at("signs").size() == 2, "suggestion '" + surface + "' is not 2 signs");
  }
  const records::Json eval = records::Json::parse(records::read_file((dir / "eval.json").string()));
  const double seconds = elapsed(start);
  check.expect(seconds < 20 * 60, "slower than 20 minutes");
  check.note("5 two-sign suggestions, top '" + top + "'; token MRR " +
             fmt("%.3f", eval.at("overall").at("mrr").get<double>()));
  return check.result();
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::fprintf(stderr, "usage: acceptance <lacuna-cli> <scratch-dir>\n");
    return 2;
  }
  const std::string cli = argv[1];
  const fs::path scratch = argv[2];

  run("gradient-oracle", gradient_oracle);
  run("synthetic-mastery", synthetic_mastery);
  run("decoder-oracle", decoder_oracle);
  run("metric-checks", metric_checks);
  run("parser-round-trip", parser_round_trip);
  run("tokenizer-round-trip", tokenizer_round_trip);
  run("annotation-invariants", annotation_invariants);
  run("kappa-checks", kappa_checks);
  run("end-to-end-smoke", [&] { return end_to_end(cli, scratch / "e2e"); });

  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
