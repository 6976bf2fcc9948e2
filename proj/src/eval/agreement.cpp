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

#include "eval/agreement.hpp"

#include <algorithm>
#include <cstdio>
#include <memory>
#include <set>
#include <sstream>

#include "common/error.hpp"

namespace lacuna::eval {
namespace {

double kappa_of(const std::vector<char>& xs, const std::vector<char>& ys) {
  const std::unique_ptr<bool[]> a(new bool[xs.size() + 1]);
  const std::unique_ptr<bool[]> b(new bool[ys.size() + 1]);
  std::copy(xs.begin(), xs.end(), a.get());
  std::copy(ys.begin(), ys.end(), b.get());
  return cohen_kappa(std::span<const bool>(a.get(), xs.size()), std::span<const bool>(b.get(), ys.size()));
}

}  // namespace

double cohen_kappa(std::span<const bool> a, std::span<const bool> b) {
  if (a.size() != b.size()) fail(ErrorCode::kInvalidArgument, "labelings differ in length");
  if (a.empty()) fail(ErrorCode::kNoOverlap, "no shared judgments");
  const auto n = static_cast<double>(a.size());
  double agree = 0.0;
  double a_true = 0.0;
  double b_true = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    agree += a[i] == b[i];
    a_true += a[i];
    b_true += b[i];
  }
  const double po = agree / n;
  const double pa = a_true / n;
  const double pb = b_true / n;
  const double pe = pa * pb + (1.0 - pa) * (1.0 - pb);
  if (pe >= 1.0) {
    if (po == 1.0) return 1.0;
    fail(ErrorCode::kDegenerateMarginals, "chance agreement is 1");
  }
  return (po - pe) / (1.0 - pe);
}

double cohen_kappa(std::span<const AnnotationLabel> a, std::span<const AnnotationLabel> b) {
  std::map<std::string, const AnnotationLabel*> by_instance;
  for (const AnnotationLabel& l : a) by_instance[l.instance_id] = &l;
  std::vector<char> xs;
  std::vector<char> ys;
  for (const AnnotationLabel& l : b) {
    auto it = by_instance.find(l.instance_id);
    if (it == by_instance.end()) continue;
    for (std::size_t i = 0; i < kOptionCount; ++i) {
      xs.push_back(it->second->judgments[i]);
      ys.push_back(l.judgments[i]);
    }
  }
  return kappa_of(xs, ys);
}

AgreementReport score_annotations(std::span<const AnnotationInstance> instances,
                                  std::span<const AnnotationLabel> labels) {
  if (labels.empty()) fail(ErrorCode::kEmptyInput, "no labels");
  std::map<std::string, const AnnotationInstance*> by_id;
  for (const AnnotationInstance& inst : instances) by_id[inst.instance_id] = &inst;

  AgreementReport report;
  std::size_t golds = 0;
  std::size_t golds_rejected = 0;
  std::size_t distractors = 0;
  std::size_t distractors_accepted = 0;
  double accuracy_sum = 0.0;
  std::map<std::size_t, std::pair<double, std::size_t>> per_length;
  std::map<std::string, std::vector<AnnotationLabel>> per_annotator;

  for (const AnnotationLabel& label : labels) {
    auto it = by_id.find(label.instance_id);
    if (it == by_id.end()) fail(ErrorCode::kUnknownInstance, "unknown instance " + label.instance_id);
    const AnnotationInstance& inst = *it->second;
    LabelScore s;
    s.annotator_id = label.annotator_id;
    s.instance_id = label.instance_id;
    s.gap_length = inst.gap.length;
    std::size_t model_options = 0;
    for (std::size_t i = 0; i < kOptionCount; ++i) {
      const bool plausible = label.judgments[i];
      switch (inst.provenance[i]) {
        case Provenance::kModel:
          ++model_options;
          s.approved += plausible;
          break;
        case Provenance::kGold:
          ++golds;
          if (!plausible) {
            ++golds_rejected;
            s.underestimation = true;
          }
          break;
        case Provenance::kDistractor:
          ++distractors;
          if (plausible) {
            ++distractors_accepted;
            s.overestimation = true;
          }
          break;
      }
    }
    s.accuracy = model_options ? static_cast<double>(s.approved) / model_options : 0.0;
    accuracy_sum += s.accuracy;
    auto& bucket = per_length[inst.gap.length];
    bucket.first += static_cast<double>(s.approved);
    ++bucket.second;
    per_annotator[label.annotator_id].push_back(label);
    report.labels.push_back(s);
  }

  report.n_labels = labels.size();
  report.accuracy = accuracy_sum / static_cast<double>(labels.size());
  report.false_negative_rate = golds ? static_cast<double>(golds_rejected) / golds : 0.0;
  report.false_positive_rate =
      distractors ? static_cast<double>(distractors_accepted) / distractors : 0.0;
  for (const auto& [length, bucket] : per_length) {
    report.approved_per_length[length] = bucket.first / static_cast<double>(bucket.second);
  }

  // Pool every doubly-labelled judgment across annotator pairs.
  std::vector<char> xs;
  std::vector<char> ys;
  for (auto a = per_annotator.begin(); a != per_annotator.end(); ++a) {
    std::map<std::string, const AnnotationLabel*> mine;
    for (const AnnotationLabel& l : a->second) mine[l.instance_id] = &l;
    for (auto b = std::next(a); b != per_annotator.end(); ++b) {
      for (const AnnotationLabel& l : b->second) {
        auto hit = mine.find(l.instance_id);
        if (hit == mine.end()) continue;
        for (std::size_t i = 0; i < kOptionCount; ++i) {
          xs.push_back(hit->second->judgments[i]);
          ys.push_back(l.judgments[i]);
        }
      }
    }
  }
  if (xs.empty()) {
    report.kappa_note = "no doubly annotated instances";
  } else {
    try {
      report.kappa = kappa_of(xs, ys);
      report.kappa_note = "pooled over all annotator pairs";
    } catch (const Error& e) {
      report.kappa_note = e.what();
    }
  }
  return report;
}

records::Json agreement_to_json(const AgreementReport& report) {
  records::Json per_length = records::Json::object();
  for (const auto& [length, mean] : report.approved_per_length) {
    per_length[std::to_string(length)] = mean;
  }
  records::Json labels = records::Json::array();
  for (const LabelScore& s : report.labels) {
    labels.push_back({{"annotator_id", s.annotator_id},
                      {"instance_id", s.instance_id},
                      {"gap_length", s.gap_length},
                      {"accuracy", s.accuracy},
                      {"approved", s.approved},
                      {"overestimation", s.overestimation},
                      {"underestimation", s.underestimation}});
  }
  return {{"n_labels", report.n_labels},
          {"accuracy", report.accuracy},
          {"false_negative_rate", report.false_negative_rate},
          {"false_positive_rate", report.false_positive_rate},
          {"approved_per_length", per_length},
          {"kappa", report.kappa ? records::Json(*report.kappa) : records::Json(nullptr)},
          {"aggregation", "pooled"},
          {"kappa_note", report.kappa_note},
          {"labels", labels}};
}

std::string format_agreement(const AgreementReport& report) {
  std::ostringstream out;
  char line[128];
  std::snprintf(line, sizeof(line), "labels               %zu\n", report.n_labels);
  out << line;
  std::snprintf(line, sizeof(line), "accuracy             %.3f\n", report.accuracy);
  out << line;
  std::snprintf(line, sizeof(line), "false negative rate  %.3f\n", report.false_negative_rate);
  out << line;
  std::snprintf(line, sizeof(line), "false positive rate  %.3f\n", report.false_positive_rate);
  out << line;
  if (report.kappa) {
    std::snprintf(line, sizeof(line), "kappa                %.3f\n", *report.kappa);
  } else {
    std::snprintf(line, sizeof(line), "kappa                n/a (%s)\n", report.kappa_note.c_str());
  }
  out << line;
  out << "length  approved\n";
  for (const auto& [length, mean] : report.approved_per_length) {
    std::snprintf(line, sizeof(line), "%-7zu %8.3f\n", length, mean);
    out << line;
  }
  return out.str();
}

}  // namespace lacuna::eval
