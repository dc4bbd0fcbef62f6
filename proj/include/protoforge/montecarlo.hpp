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

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "protoforge/semantics.hpp"

namespace protoforge {

struct McOptions {
  std::size_t runs = 1;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;      // separates independent experiments sharing a seed
  bool traces = false;
  std::size_t max_steps = 1'000'000;
};

struct McResult {
  std::size_t runs = 0;
  std::size_t successes = 0;
  std::size_t failures = 0;
  std::size_t diverged = 0;
  double rate = 0.0;
  double std_error = 0.0;
  std::vector<std::string> traces;  // one JSON object per run when requested
};

/// Samples `runs` deductions: the medium drops with probability δ, every other
/// nondeterministic choice is uniform. Each run draws from its own generator
/// derived from (seed, stream, run).
McResult run_monte_carlo(const System& system, double delta, std::span<const GlobalEvent> sigma,
                         const McOptions& options);
McResult run_monte_carlo_serial(const System& system, double delta, std::span<const GlobalEvent> sigma,
                                const McOptions& options);

}  // namespace protoforge
