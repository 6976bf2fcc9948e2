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

#include "common/error.hpp"

namespace lacuna {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kNotFound: return "NotFound";
    case ErrorCode::kUnbalancedMarkup: return "UnbalancedMarkup";
    case ErrorCode::kEmptyAfterNormalization: return "EmptyAfterNormalization";
    case ErrorCode::kTooFewDocuments: return "TooFewDocuments";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kUnknownId: return "UnknownId";
    case ErrorCode::kBudgetInfeasible: return "BudgetInfeasible";
    case ErrorCode::kSequenceTooLong: return "SequenceTooLong";
    case ErrorCode::kNoMaskedPositions: return "NoMaskedPositions";
    case ErrorCode::kNonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::kVersionMismatch: return "VersionMismatch";
    case ErrorCode::kVocabularyMismatch: return "VocabularyMismatch";
    case ErrorCode::kCorruptFile: return "CorruptFile";
    case ErrorCode::kNoValidCompletion: return "NoValidCompletion";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kEmptyTestSet: return "EmptyTestSet";
    case ErrorCode::kInsufficientSpans: return "InsufficientSpans";
    case ErrorCode::kDistractorUnavailable: return "DistractorUnavailable";
    case ErrorCode::kUnknownInstance: return "UnknownInstance";
    case ErrorCode::kNoOverlap: return "NoOverlap";
    case ErrorCode::kDegenerateMarginals: return "DegenerateMarginals";
    case ErrorCode::kDuplicateLabel: return "DuplicateLabel";
    case ErrorCode::kStoreUnavailable: return "StoreUnavailable";
  }
  return "Unknown";
}

}  // namespace lacuna
