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

#ifndef LACUNA_COMMON_ERROR_HPP_
#define LACUNA_COMMON_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace lacuna {

// Every failure the core can report. The C API mirrors these one-to-one.
enum class ErrorCode {
  kInvalidArgument = 1,
  kIo,
  kNotFound,
  kUnbalancedMarkup,
  kEmptyAfterNormalization,
  kTooFewDocuments,
  kEmptyCorpus,
  kUnknownId,
  kBudgetInfeasible,
  kSequenceTooLong,
  kNoMaskedPositions,
  kNonFiniteLoss,
  kVersionMismatch,
  kVocabularyMismatch,
  kCorruptFile,
  kNoValidCompletion,
  kEmptyInput,
  kEmptyTestSet,
  kInsufficientSpans,
  kDistractorUnavailable,
  kUnknownInstance,
  kNoOverlap,
  kDegenerateMarginals,
  kDuplicateLabel,
  kStoreUnavailable,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, std::string(to_string(code)) + ": " + message);
}

}  // namespace lacuna

#endif  // LACUNA_COMMON_ERROR_HPP_
