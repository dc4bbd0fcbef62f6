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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "protoforge/error.hpp"
#include "protoforge/medium.hpp"
#include "support.hpp"

using namespace pftest;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Internal;
}

// δ computed directly from the logistic form it is the reciprocal of.
double reference_delta(int n, double d, double tau, double a, double b) {
  const double r = (n - 2) * d / tau;
  return 1.0 / (1.0 + a * std::exp(-b * r));
}

}  // namespace

TEST_CASE("load rate and drop probability") {
  MediumParams p;
  p.n_cars = 2;
  CHECK(load_rate(p) == 0.0);
  CHECK(drop_prob(p) == doctest::Approx(0.2));
  p = MediumParams{10, 50.0, 4.0, 4.0, 0.002};
  CHECK(load_rate(p) == doctest::Approx(100.0));
  CHECK(drop_prob(p) == doctest::Approx(reference_delta(10, 50.0, 4.0, 4.0, 0.002)));

  double last = 0.0;
  for (int n = 2; n <= 40; n += 2) {
    p.n_cars = n;
    const double d = drop_prob(p);
    CHECK(d >= last);
    CHECK(d > 0.0);
    CHECK(d < 1.0);
    last = d;
  }
  p.n_cars = 1000;
  p.d_max = 1000.0;
  p.tau_min = 0.01;
  CHECK(drop_prob(p) == doctest::Approx(1.0));
}

TEST_CASE("invalid medium parameters") {
  CHECK(code_of([] { load_rate(MediumParams{1, 1.0, 1.0}); }) == ErrorCode::InvalidParams);
  CHECK(code_of([] { load_rate(MediumParams{3, -1.0, 1.0}); }) == ErrorCode::InvalidParams);
  CHECK(code_of([] { load_rate(MediumParams{3, 1.0, 0.0}); }) == ErrorCode::InvalidParams);
  CHECK(code_of([] { drop_prob(MediumParams{3, 1.0, 1.0, 0.0, 0.1}); }) == ErrorCode::InvalidParams);
  CHECK(code_of([] { drop_prob(MediumParams{3, 1.0, 1.0, 1.0, -0.1}); }) == ErrorCode::InvalidParams);
}

TEST_CASE("grid axes") {
  CHECK(parse_axis("2:20:2").values().size() == 10);
  CHECK(parse_axis("1:10:1").values().back() == 10.0);
  CHECK(parse_axis("0.1:0.3:0.1").values().size() == 3);
  CHECK(parse_axis("5:5:1").values() == std::vector<double>{5.0});
  for (const char* bad : {"1:2", "a:2:1", "1:2:0", "3:1:1", "1:2:-1", ""}) {
    CHECK(code_of([&] { parse_axis(bad); }) == ErrorCode::InvalidParams);
  }
}

TEST_CASE("sweep rows") {
  const FullSpec spec = parse_spec(kExample);
  SweepGrid grid{parse_axis("2:10:4"), parse_axis("10:30:10"), parse_axis("1:2:1")};
  const auto rows = feasibility_sweep(spec.protocol, grid);
  REQUIRE(rows.size() == 18);
  CHECK(rows[0].n_cars == 2);
  CHECK(rows[1].tau_min == 2.0);
  CHECK(rows[2].d_max == 20.0);
  CHECK(rows.back().n_cars == 10);
  for (const auto& row : rows) {
    const double d = reference_delta(row.n_cars, row.d_max, row.tau_min, 4.0, 0.002);
    CHECK(row.delta == doctest::Approx(d).epsilon(1e-14));
    const OptResult opt = solve_opt(spec.protocol, row.delta);
    CHECK(row.realizable == (opt.status == OptStatus::Optimal));
    if (row.realizable) {
      int sum = 0;
      for (const auto& [name, n] : opt.bounds) sum += n;
      CHECK(row.sum_bounds == sum);
    } else {
      CHECK_FALSE(row.sum_bounds);
    }
  }
}

TEST_CASE("parallel sweep matches serial sweep") {
  const FullSpec spec = parse_spec(kExampleStrict);
  SweepGrid grid{parse_axis("2:20:2"), parse_axis("10:100:10"), parse_axis("1:10:1")};
  const auto par = feasibility_sweep(spec.protocol, grid);
  const auto ser = feasibility_sweep_serial(spec.protocol, grid);
  CHECK(sweep_csv(par) == sweep_csv(ser));
  CHECK(par.size() == 1000);
}

TEST_CASE("sweep rejects bad input") {
  SweepGrid grid{parse_axis("2:4:1"), parse_axis("10:10:1"), parse_axis("1:1:1")};
  const FullSpec bad = parse_spec("delta 0.2; cars A B; x A->B : 0.5\n");
  CHECK(code_of([&] { feasibility_sweep(bad.protocol, grid); }) == ErrorCode::NotWellPosed);
  const FullSpec good = parse_spec(kExample);
  SweepGrid frac{parse_axis("2:3:0.5"), parse_axis("10:10:1"), parse_axis("1:1:1")};
  CHECK(code_of([&] { feasibility_sweep(good.protocol, frac); }) == ErrorCode::InvalidParams);
  SweepGrid one{parse_axis("1:2:1"), parse_axis("10:10:1"), parse_axis("1:1:1")};
  CHECK(code_of([&] { feasibility_sweep(good.protocol, one); }) == ErrorCode::InvalidParams);
}

TEST_CASE("csv text") {
  SweepRow a;
  a.n_cars = 4;
  a.d_max = 10;
  a.tau_min = 2;
  a.r = 10;
  a.delta = 0.25;
  a.realizable = true;
  a.sum_bounds = 7;
  SweepRow b = a;
  b.realizable = false;
  b.sum_bounds.reset();
  CHECK(sweep_csv({a, b}) ==
        "N,d_max,tau_min,r,delta,realizable,sum_bounds\n"
        "4,10,2,10,0.25,true,7\n"
        "4,10,2,10,0.25,false,\n");
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0 / 3.0) == "0.3333333333333333");
}
