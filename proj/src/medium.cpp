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

#include "protoforge/medium.hpp"

#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>

#include "protoforge/error.hpp"

namespace protoforge {

double load_rate(const MediumParams& p) {
  if (p.n_cars < 2) throw Error(ErrorCode::InvalidParams, "at least two cars are required");
  if (!(p.d_max >= 0.0)) throw Error(ErrorCode::InvalidParams, "d_max must be nonnegative");
  if (!(p.tau_min > 0.0)) throw Error(ErrorCode::InvalidParams, "tau_min must be positive");
  return (p.n_cars - 2) * p.d_max / p.tau_min;
}

double drop_prob(const MediumParams& p) {
  if (!(p.a > 0.0)) throw Error(ErrorCode::InvalidParams, "a must be positive");
  if (!(p.b >= 0.0)) throw Error(ErrorCode::InvalidParams, "b must be nonnegative");
  return 1.0 / (1.0 + p.a * std::exp(-p.b * load_rate(p)));
}

std::vector<double> GridAxis::values() const {
  const auto count = static_cast<std::size_t>(std::floor((to - from) / step + 1e-9)) + 1;
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k) out[k] = from + static_cast<double>(k) * step;
  return out;
}

GridAxis parse_axis(std::string_view text) {
  GridAxis axis;
  double* fields[] = {&axis.from, &axis.to, &axis.step};
  std::size_t pos = 0;
  for (int k = 0; k < 3; ++k) {
    const std::size_t end = k < 2 ? text.find(':', pos) : text.size();
    if (end == std::string_view::npos) throw Error(ErrorCode::InvalidParams, "grid axis must look like FROM:TO:STEP");
    const char* first = text.data() + pos;
    const char* last = text.data() + end;
    auto [ptr, ec] = std::from_chars(first, last, *fields[k]);
    if (ec != std::errc() || ptr != last) {
      throw Error(ErrorCode::InvalidParams, "bad number in grid axis '" + std::string(text) + "'");
    }
    pos = end + 1;
  }
  if (!(axis.step > 0.0)) throw Error(ErrorCode::InvalidParams, "grid step must be positive");
  if (axis.to < axis.from) throw Error(ErrorCode::InvalidParams, "grid axis ends before it starts");
  return axis;
}

namespace {

struct Point {
  int n;
  double d;
  double tau;
};

std::vector<Point> points(const SweepGrid& grid) {
  std::vector<Point> out;
  for (double n : grid.n_cars.values()) {
    if (n != std::floor(n)) throw Error(ErrorCode::InvalidParams, "car counts must be integers");
    for (double d : grid.d_max.values()) {
      for (double t : grid.tau_min.values()) out.push_back({static_cast<int>(n), d, t});
    }
  }
  return out;
}

SweepRow evaluate(const ProtocolSpec& spec, const SweepGrid& grid, const Point& pt) {
  SweepRow row;
  row.n_cars = pt.n;
  row.d_max = pt.d;
  row.tau_min = pt.tau;
  const MediumParams params{pt.n, pt.d, pt.tau, grid.a, grid.b};
  row.r = load_rate(params);
  row.delta = drop_prob(params);
  const auto opt = solve_opt(spec, row.delta, grid.cap);
  row.realizable = opt.status == OptStatus::Optimal;
  if (row.realizable) {
    row.sum_bounds = std::accumulate(opt.bounds.begin(), opt.bounds.end(), 0,
                                     [](int acc, const auto& kv) { return acc + kv.second; });
  }
  return row;
}

void require_well_posed(const ProtocolSpec& spec) {
  const auto report = well_posed(spec);
  if (!report.ok()) throw Error(ErrorCode::NotWellPosed, report.describe());
}

}  // namespace

std::vector<SweepRow> feasibility_sweep_serial(const ProtocolSpec& spec, const SweepGrid& grid) {
  require_well_posed(spec);
  const auto pts = points(grid);
  std::vector<SweepRow> rows;
  rows.reserve(pts.size());
  for (const auto& pt : pts) rows.push_back(evaluate(spec, grid, pt));
  return rows;
}

std::vector<SweepRow> feasibility_sweep(const ProtocolSpec& spec, const SweepGrid& grid) {
  require_well_posed(spec);
  const auto pts = points(grid);
  for (const auto& pt : pts) load_rate(MediumParams{pt.n, pt.d, pt.tau, grid.a, grid.b});
  std::vector<SweepRow> rows(pts.size());
  const auto count = static_cast<long long>(pts.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (long long k = 0; k < count; ++k) rows[k] = evaluate(spec, grid, pts[k]);
  return rows;
}

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "N,d_max,tau_min,r,delta,realizable,sum_bounds\n";
  for (const auto& row : rows) {
    out << row.n_cars << ',' << format_double(row.d_max) << ',' << format_double(row.tau_min) << ','
        << format_double(row.r) << ',' << format_double(row.delta) << ',' << (row.realizable ? "true" : "false")
        << ',';
    if (row.sum_bounds) out << *row.sum_bounds;
    out << '\n';
  }
  return out.str();
}

}  // namespace protoforge
