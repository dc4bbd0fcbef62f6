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
#include "support.hpp"

using namespace pftest;

namespace {

bool feasible(const ProtocolSpec& spec, const BoundsVector& b, double delta) {
  for (const auto& s : enumerate_sequences(spec)) {
    if (sync_prob(bounds_along(b, s.events), delta) < s.p) return false;
  }
  return true;
}

std::vector<int> in_order(const ProtocolSpec& spec, const BoundsVector& b) {
  std::vector<int> out;
  for (const auto& e : event_order(spec)) out.push_back(b.at(e.name));
  return out;
}

}  // namespace

TEST_CASE("two-event closed form") {
  CHECK(sync_prob_two(3, 1, 0.35) == doctest::Approx(0.781780796875).epsilon(1e-14));
  CHECK(sync_prob_two(3, 2, 0.35) == doctest::Approx(hand_deduction_two(3, 2, 0.35)).epsilon(1e-14));
  for (double d : {0.1, 0.35, 0.8}) {
    const double rho = 1.0 - d;
    CHECK(sync_prob_two(0, 0, d) == doctest::Approx(rho * rho));
    CHECK(sync_prob_two(0, 5, d) == doctest::Approx(rho * rho));
    CHECK(sync_prob_two(200, 200, d) == doctest::Approx(sup_sync_prob_two(d)).epsilon(1e-12));
  }
  for (int n1 = 0; n1 <= 6; ++n1) {
    for (int n2 = 0; n2 <= 6; ++n2) {
      CHECK(sync_prob_two(n1, n2, 0.0) == 1.0);
      CHECK(sync_prob_two(n1, n2, 1.0) == 0.0);
      const std::vector<int> v{n1, n2};
      CHECK(sync_prob(v, 0.27) == doctest::Approx(sync_prob_two(n1, n2, 0.27)).epsilon(1e-14));
    }
  }
}

TEST_CASE("supremum") {
  CHECK(sup_sync_prob_two(0.0) == 1.0);
  CHECK(sup_sync_prob_two(1.0) == 0.0);
  CHECK(sup_sync_prob_two(0.35) == doctest::Approx(0.65 / (1.0 - 0.35 * 0.65)));
  for (int n = 0; n <= 30; ++n) CHECK(sync_prob_two(n, n, 0.35) < sup_sync_prob_two(0.35));
  const std::vector<int> far(5, 300);
  CHECK(sync_prob(far, 0.35) == doctest::Approx(sup_sync_prob_two(0.35)).epsilon(1e-12));
}

TEST_CASE("longer sequences") {
  const std::vector<int> v{2, 2, 2};
  CHECK(sync_prob(v, 0.3) == doctest::Approx(0.790648957).epsilon(1e-9));
  const std::vector<int> zeros{0, 0, 0};
  CHECK(sync_prob(zeros, 0.3) == doctest::Approx(0.343));
  const std::vector<int> one{3};
  CHECK_THROWS_AS(sync_prob(one, 0.3), Error);
  CHECK_THROWS_AS(sync_prob(std::vector<int>{}, 0.3), Error);
}

TEST_CASE("monotone in bounds and in delta") {
  SpecGen g(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int len = g.uniform(2, 6);
    std::vector<int> n(static_cast<std::size_t>(len));
    for (auto& x : n) x = g.uniform(0, 6);
    const double d = g.prob();
    const double base = sync_prob(n, d);
    auto up = n;
    ++up[static_cast<std::size_t>(g.uniform(0, len - 1))];
    CHECK(sync_prob(up, d) >= base - 1e-15);
    const double d2 = std::min(1.0, d + 0.05 * g.prob());
    CHECK(sync_prob(n, d2) <= base + 1e-15);
    CHECK(base >= 0.0);
    CHECK(base <= 1.0);
  }
}

TEST_CASE("optimum of the example") {
  const FullSpec spec = parse_spec(kExample);
  const OptResult r = solve_opt(spec.protocol, spec.delta);
  REQUIRE(r.status == OptStatus::Optimal);
  CHECK(r.bounds == BoundsVector{{"snd", 3}, {"ack", 1}, {"nack", 2}});
  CHECK(realizable(spec));

  const auto brute = brute_force_opt(spec.protocol, spec.delta, 6);
  REQUIRE(brute);
  CHECK(*brute == in_order(spec.protocol, r.bounds));

  const OptResult lossless = solve_opt(spec.protocol, 0.0);
  REQUIRE(lossless.status == OptStatus::Optimal);
  CHECK(lossless.bounds == BoundsVector{{"snd", 0}, {"ack", 0}, {"nack", 0}});
}

TEST_CASE("infeasible requirements") {
  const FullSpec strict = parse_spec(kExampleStrict);
  const OptResult r = solve_opt(strict.protocol, strict.delta);
  CHECK(r.status == OptStatus::Infeasible);
  CHECK_FALSE(r.reason.empty());
  CHECK_FALSE(realizable(strict));

  // Below the supremum but out of reach of small bounds.
  const FullSpec near = parse_spec("delta 0.35; cars A B; x A->B . y B->A : 0.84\n");
  CHECK(solve_opt(near.protocol, 0.35, 3).status == OptStatus::InfeasibleWithinCap);
  CHECK(solve_opt(near.protocol, 0.35).status == OptStatus::Optimal);

  const FullSpec certain = parse_spec("delta 0.2; cars A B; x A->B . y B->A : 1\n");
  CHECK(solve_opt(certain.protocol, 0.2).status == OptStatus::Infeasible);
  CHECK(solve_opt(certain.protocol, 0.0).status == OptStatus::Optimal);

  const FullSpec free = parse_spec("delta 1; cars A B; x A->B . y B->A : 0\n");
  CHECK(solve_opt(free.protocol, 1.0).status == OptStatus::Optimal);

  const FullSpec bad = parse_spec("delta 0.2; cars A B; x A->B : 0.5\n");
  try {
    solve_opt(bad.protocol, 0.2);
    FAIL("expected NotWellPosed");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotWellPosed);
  }
}

TEST_CASE("optimizer agrees with exhaustive search") {
  SpecGen g(2024);
  int compared = 0;
  for (int trial = 0; trial < 300 && compared < 60; ++trial) {
    const ProtocolSpec spec = g.make(2);
    if (event_order(spec).size() > 5) continue;
    const double d = 0.05 + 0.3 * g.prob();
    const OptResult r = solve_opt(spec, d, 40);
    if (r.status != OptStatus::Optimal) {
      CHECK_FALSE(brute_force_opt(spec, d, 4));
      continue;
    }
    const auto v = in_order(spec, r.bounds);
    if (*std::max_element(v.begin(), v.end()) > 4) continue;
    const auto brute = brute_force_opt(spec, d, 4);
    REQUIRE(brute);
    CHECK(*brute == v);
    ++compared;
  }
  CHECK(compared >= 30);
}

TEST_CASE("optimal bounds are locally minimal and upward closed") {
  SpecGen g(77);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const ProtocolSpec spec = g.make(4);
    const double d = 0.05 + 0.4 * g.prob();
    const OptResult r = solve_opt(spec, d, 64);
    if (r.status != OptStatus::Optimal) continue;
    ++checked;
    CHECK(feasible(spec, r.bounds, d));
    for (const auto& [name, n] : r.bounds) {
      BoundsVector up = r.bounds;
      ++up[name];
      CHECK(feasible(spec, up, d));
      if (n == 0) continue;
      BoundsVector down = r.bounds;
      --down[name];
      CHECK_FALSE(feasible(spec, down, d));
    }
  }
  CHECK(checked >= 50);
}

TEST_CASE("bounds along a sequence") {
  const BoundsVector b{{"snd", 3}, {"ack", 1}};
  const std::vector<GlobalEvent> s{ev("snd", "A", "B", "d"), ev("ack", "B", "A")};
  CHECK(bounds_along(b, s) == std::vector<int>{3, 1});
  const std::vector<GlobalEvent> t{ev("snd", "A", "B", "d"), ev("nack", "B", "A")};
  try {
    bounds_along(b, t);
    FAIL("expected MissingBound");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MissingBound);
  }
}

TEST_CASE("status names") {
  CHECK(std::string(to_string(OptStatus::Optimal)) == "optimal");
  CHECK(std::string(to_string(OptStatus::InfeasibleWithinCap)) == "infeasible-within-cap");
}
