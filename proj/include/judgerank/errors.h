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

#ifndef JUDGERANK_ERRORS_H_
#define JUDGERANK_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace judgerank {

enum class ErrorCode {
  kValidation,
  kParse,
  kDuplicateSample,
  kConfiguration,
  kIncompleteTriplet,
  kEmptyInput,
  kInsufficientModels,
  kUndefinedConsistency,
  kUnidentifiable,
  kNonConvergence,
  kLookup,
  kMissingComparison,
  kDomain,
  kPartialResult,
  kTemplate,
  kExtraction,
  kTransport,
  kIo,
};

const char* ErrorCodeName(ErrorCode code);

// Base class for every error raised by the library. Subclasses that carry a
// payload (partial fits, partial samples, resumable schedules) live next to
// the types they carry.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

  // True for errors caused by bad input or configuration, as opposed to
  // failures that happened while doing the work.
  bool IsValidationError() const;

 private:
  ErrorCode code_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : Error(ErrorCode::kParse,
              "line " + std::to_string(line) + ": " + message),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace judgerank

#endif  // JUDGERANK_ERRORS_H_
