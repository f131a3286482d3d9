/* Copyright 2026 The recperf Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef RECPERF_ERROR_HPP_
#define RECPERF_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace recperf {

// Every error raised by the library carries a stable machine-readable code
// (e.g. "UNKNOWN_PRESET", "ROW_OVERFLOW") next to the human-readable text.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

// Raised when a Scenario (or part of one) violates an invariant. The CLI maps
// these to exit code 1.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Raised for malformed config documents; carries a 1-based line/column.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line, int column)
      : Error("SYNTAX_ERROR", message), line_(line), column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace recperf

#endif  // RECPERF_ERROR_HPP_
