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

#include <string>
#include <vector>

#include "protoforge/csa.hpp"
#include "protoforge/qos.hpp"
#include "protoforge/spec.hpp"

namespace protoforge {

// Names bound to a global event.
std::string message_id(const std::string& event);
std::string counter_name(const std::string& event);
std::string fail_name(const std::string& event);
std::string success_name(const std::string& event);

/// Builds the CSA of `car` for a well-posed specification.
/// Throws Error(NotWellPosed), Error(MissingBound) and, when two branches of
/// a disjunction start with the same transition, Error(NonDeterministic).
Csa synthesize_for_car(const ProtocolSpec& spec, const CarId& car, const BoundsVector& bounds);

struct Synthesis {
  BoundsVector bounds;
  std::vector<Csa> csas;  // one per car, in declaration order
};

/// Solves the bounds and synthesizes a CSA for every declared car.
/// Throws Error(NotWellPosed) and Error(Unrealizable).
Synthesis synthesize_all(const FullSpec& spec, int cap = kDefaultCap);

}  // namespace protoforge
