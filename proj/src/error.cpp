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

#include "protoforge/error.hpp"

namespace protoforge {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Syntax: return "Syntax";
    case ErrorCode::ProbabilityOutOfRange: return "ProbabilityOutOfRange";
    case ErrorCode::SelfAddressedEvent: return "SelfAddressedEvent";
    case ErrorCode::UnknownCar: return "UnknownCar";
    case ErrorCode::DuplicateCar: return "DuplicateCar";
    case ErrorCode::DuplicateEventOnPath: return "DuplicateEventOnPath";
    case ErrorCode::InconsistentEvent: return "InconsistentEvent";
    case ErrorCode::NotWellPosed: return "NotWellPosed";
    case ErrorCode::MissingBound: return "MissingBound";
    case ErrorCode::Unrealizable: return "Unrealizable";
    case ErrorCode::NonDeterministic: return "NonDeterministic";
    case ErrorCode::InvalidCsa: return "InvalidCsa";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::SequenceTooShort: return "SequenceTooShort";
    case ErrorCode::DivergenceDetected: return "DivergenceDetected";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

}  // namespace protoforge
