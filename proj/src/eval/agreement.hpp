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

#ifndef LACUNA_EVAL_AGREEMENT_HPP_
#define LACUNA_EVAL_AGREEMENT_HPP_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "common/records.hpp"
#include "eval/annotation.hpp"

namespace lacuna::eval {

// Outcome of one label on its instance.
struct LabelScore {
  std::string annotator_id;
  std::string instance_id;
  std::size_t gap_length = 0;
  double accuracy = 0.0;          // model options judged plausible / 3
  std::size_t approved = 0;       // model options judged plausible
  bool overestimation = false;    // distractor judged plausible
  bool underestimation = false;   // gold judged implausible
};

struct AgreementReport {
  std::size_t n_labels = 0;
  double accuracy = 0.0;
  double false_negative_rate = 0.0;  // gold options judged implausible
  double false_positive_rate = 0.0;  // distractors judged plausible
  std::map<std::size_t, double> approved_per_length;
  std::optional<double> kappa;  // pooled over annotator pairs
  std::string kappa_note;
  std::vector<LabelScore> labels;
};

// Throws Error(kUnknownInstance) for a label without an instance and
// Error(kEmptyInput) without labels.
AgreementReport score_annotations(std::span<const AnnotationInstance> instances,
                                  std::span<const AnnotationLabel> labels);

// Two-category kappa over paired judgments. Throws Error(kNoOverlap) on no
// pairs, Error(kInvalidArgument) on unequal lengths and
// Error(kDegenerateMarginals) when chance agreement is 1 but the labelings
// differ.
double cohen_kappa(std::span<const bool> a, std::span<const bool> b);

// Kappa over the judgments of instances both annotators labelled.
double cohen_kappa(std::span<const AnnotationLabel> a, std::span<const AnnotationLabel> b);

records::Json agreement_to_json(const AgreementReport& report);
std::string format_agreement(const AgreementReport& report);

}  // namespace lacuna::eval

#endif  // LACUNA_EVAL_AGREEMENT_HPP_
