// Copyright 2026 The diophset Authors
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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace diophset {

enum class ErrorKind {
  kInvalidInput,
  kUnsupportedField,
  kDivisionByZero,
  kIndexOutOfRange,
  kPeriodNotFound,
  kHypothesisViolation,
  kIndeterminateFloor,
  kParse,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidInput: return "invalid-input";
    case ErrorKind::kUnsupportedField: return "unsupported-field";
    case ErrorKind::kDivisionByZero: return "division-by-zero";
    case ErrorKind::kIndexOutOfRange: return "index-out-of-range";
    case ErrorKind::kPeriodNotFound: return "period-not-found";
    case ErrorKind::kHypothesisViolation: return "hypothesis-violation";
    case ErrorKind::kIndeterminateFloor: return "indeterminate-floor";
    case ErrorKind::kParse: return "parse-error";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace diophset
