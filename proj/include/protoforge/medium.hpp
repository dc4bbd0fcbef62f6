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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "protoforge/qos.hpp"
#include "protoforge/spec.hpp"

namespace protoforge {

struct MediumParams {
  int n_cars = 2;
  double d_max = 0.0;
  double tau_min = 1.0;
  double a = 4.0;
  double b = 0.002;
};

/// r = (N - 2) d_max / tau_min. Throws Error(InvalidParams).
double load_rate(const MediumParams& params);

/// δ = 1 / (1 + a exp(-b r)). Throws Error(InvalidParams).
double drop_prob(const MediumParams& params);

/// Inclusive range "from:to:step".
struct GridAxis {
  double from = 0.0;
  double to = 0.0;
  double step = 1.0;

  std::vector<double> values() const;
};

/// Throws Error(InvalidParams) on malformed text, step <= 0 or to < from.
GridAxis parse_axis(std::string_view text);

struct SweepGrid {
  GridAxis n_cars;
  GridAxis d_max;
  GridAxis tau_min;
  double a = 4.0;
  double b = 0.002;
  int cap = kDefaultCap;
};

struct SweepRow {
  int n_cars = 2;
  double d_max = 0.0;
  double tau_min = 1.0;
  double r = 0.0;
  double delta = 0.0;
  bool realizable = false;
  std::optional<int> sum_bounds;
};

/// Rows ordered by N, then d_max, then tau_min. Throws Error(NotWellPosed).
std::vector<SweepRow> feasibility_sweep(const ProtocolSpec& spec, const SweepGrid& grid);
std::vector<SweepRow> feasibility_sweep_serial(const ProtocolSpec& spec, const SweepGrid& grid);

std::string sweep_csv(const std::vector<SweepRow>& rows);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

}  // namespace protoforge
