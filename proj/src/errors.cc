// Copyright 2026 The Judgerank Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "judgerank/errors.h"

namespace judgerank {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kValidation:
      return "validation";
    case ErrorCode::kParse:
      return "parse";
    case ErrorCode::kDuplicateSample:
      return "duplicate-sample";
    case ErrorCode::kConfiguration:
      return "configuration";
    case ErrorCode::kIncompleteTriplet:
      return "incomplete-triplet";
    case ErrorCode::kEmptyInput:
      return "empty-input";
    case ErrorCode::kInsufficientModels:
      return "insufficient-models";
    case ErrorCode::kUndefinedConsistency:
      return "undefined-consistency";
    case ErrorCode::kUnidentifiable:
      return "unidentifiable";
    case ErrorCode::kNonConvergence:
      return "non-convergence";
    case ErrorCode::kLookup:
      return "lookup";
    case ErrorCode::kMissingComparison:
      return "missing-comparison";
    case ErrorCode::kDomain:
      return "domain";
    case ErrorCode::kPartialResult:
      return "partial-result";
    case ErrorCode::kTemplate:
      return "template";
    case ErrorCode::kExtraction:
      return "extraction";
    case ErrorCode::kTransport:
      return "transport";
    case ErrorCode::kIo:
      return "io";
  }
  return "unknown";
}

bool Error::IsValidationError() const {
  switch (code_) {
    case ErrorCode::kValidation:
    case ErrorCode::kParse:
    case ErrorCode::kDuplicateSample:
    case ErrorCode::kConfiguration:
    case ErrorCode::kIncompleteTriplet:
    case ErrorCode::kEmptyInput:
    case ErrorCode::kInsufficientModels:
    case ErrorCode::kUndefinedConsistency:
    case ErrorCode::kLookup:
    case ErrorCode::kMissingComparison:
    case ErrorCode::kDomain:
    case ErrorCode::kTemplate:
      return true;
    default:
      return false;
  }
}

}  // namespace judgerank
