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

#include <map>
#include <span>
#include <string>

#include "protoforge/spec.hpp"

namespace protoforge {

/// Retransmission bound per global event, keyed by event name.
using BoundsVector = std::map<std::string, int>;

inline constexpr int kDefaultCap = 512;

/// Probability that a two-event sequence synchronizes with bounds (n1, n2).
double sync_prob_two(int n1, int n2, double delta);

/// Synchronization probability for bounds n_1..n_l along a sequence.
/// Throws Error(SequenceTooShort) when l < 2.
double sync_prob(std::span<const int> bounds, double delta);

/// Least upper bound of sync_prob over all bounds: (1-δ)/(1-δ(1-δ)).
double sup_sync_prob_two(double delta);

enum class OptStatus { Optimal, Infeasible, InfeasibleWithinCap };

const char* to_string(OptStatus status);

struct OptResult {
  OptStatus status = OptStatus::Infeasible;
  BoundsVector bounds;  // set when Optimal
  std::string reason;   // set otherwise
};

/// Minimizes the sum of bounds subject to sync_prob >= p for every sequence
/// of the specification. Ties go to the lexicographically smallest vector in
/// event order. Throws Error(NotWellPosed).
OptResult solve_opt(const ProtocolSpec& spec, double delta, int cap = kDefaultCap);

/// Bounds of the events of `sequence`, in order. Throws Error(MissingBound).
std::vector<int> bounds_along(const BoundsVector& bounds, std::span<const GlobalEvent> sequence);

bool realizable(const FullSpec& spec, int cap = kDefaultCap);

}  // namespace protoforge
