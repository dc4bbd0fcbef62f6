/*
 * Copyright (c) 2026 The protoforge Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace protoforge {

enum class ErrorCode {
  Syntax,
  ProbabilityOutOfRange,
  SelfAddressedEvent,
  UnknownCar,
  DuplicateCar,
  DuplicateEventOnPath,
  InconsistentEvent,
  NotWellPosed,
  MissingBound,
  Unrealizable,
  NonDeterministic,
  InvalidCsa,
  InvalidParams,
  SequenceTooShort,
  DivergenceDetected,
  Io,
  Internal,
};

const char* to_string(ErrorCode code);

// Single exception type for the library; callers dispatch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised by the parser; carries a 1-based source position.
class ParseError : public Error {
 public:
  ParseError(ErrorCode code, const std::string& what, int line, int column)
      : Error(code, std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace protoforge
