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
#include <json.hpp>

#include "protoforge/error.hpp"
#include "protoforge/montecarlo.hpp"
#include "support.hpp"

using namespace pftest;

namespace {

System example_system() { return System({reference_sender(3), reference_receiver(1, 2)}); }

const std::vector<GlobalEvent> kSndAck{ev("snd", "A", "B", "d"), ev("ack", "B", "A")};

}  // namespace

TEST_CASE("parallel runs reproduce serial runs") {
  const System sys = example_system();
  McOptions opt;
  opt.runs = 5000;
  opt.seed = 99;
  opt.traces = true;
  const McResult par = run_monte_carlo(sys, 0.35, kSndAck, opt);
  const McResult ser = run_monte_carlo_serial(sys, 0.35, kSndAck, opt);
  CHECK(par.successes == ser.successes);
  CHECK(par.failures == ser.failures);
  CHECK(par.traces == ser.traces);
  CHECK(par.runs == 5000);
  CHECK(par.successes + par.failures + par.diverged == par.runs);
}

TEST_CASE("estimate agrees with the exact value") {
  const System sys = example_system();
  for (double delta : {0.1, 0.35, 0.6}) {
    McOptions opt;
    opt.runs = 20000;
    opt.seed = 7;
    const McResult r = run_monte_carlo(sys, delta, kSndAck, opt);
    const double exact = sync_prob_two(3, 1, delta);
    const double sigma = std::sqrt(exact * (1.0 - exact) / static_cast<double>(opt.runs));
    CHECK(std::abs(r.rate - exact) <= 3.0 * sigma);
    CHECK(r.std_error == doctest::Approx(std::sqrt(r.rate * (1 - r.rate) / opt.runs)));
  }
}

TEST_CASE("seeds and streams") {
  const System sys = example_system();
  McOptions opt;
  opt.runs = 2000;
  opt.seed = 1;
  const auto a = run_monte_carlo(sys, 0.35, kSndAck, opt);
  const auto b = run_monte_carlo(sys, 0.35, kSndAck, opt);
  CHECK(a.successes == b.successes);
  opt.stream = 1;
  opt.traces = true;
  const auto c = run_monte_carlo(sys, 0.35, kSndAck, opt);
  opt.stream = 0;
  const auto d = run_monte_carlo(sys, 0.35, kSndAck, opt);
  CHECK(c.traces != d.traces);
  CHECK(d.successes == a.successes);
}

TEST_CASE("edge drop probabilities") {
  const System sys = example_system();
  McOptions opt;
  opt.runs = 500;
  CHECK(run_monte_carlo(sys, 0.0, kSndAck, opt).successes == 500);
  CHECK(run_monte_carlo(sys, 1.0, kSndAck, opt).successes == 0);
  CHECK_THROWS_AS(run_monte_carlo(sys, 1.5, kSndAck, opt), Error);
  opt.runs = 0;
  CHECK_THROWS_AS(run_monte_carlo(sys, 0.5, kSndAck, opt), Error);
}

TEST_CASE("trace records") {
  const System sys = example_system();
  McOptions opt;
  opt.runs = 50;
  opt.seed = 3;
  opt.traces = true;
  const auto r = run_monte_carlo(sys, 0.35, kSndAck, opt);
  REQUIRE(r.traces.size() == 50);
  std::size_t ok = 0;
  for (std::size_t k = 0; k < r.traces.size(); ++k) {
    const auto j = nlohmann::json::parse(r.traces[k]);
    CHECK(j.at("run") == k);
    CHECK(j.at("sequence") == "snd.ack");
    CHECK(j.at("rho").is_array());
    CHECK(j.at("final_states").contains("A"));
    CHECK(j.at("final_states").contains("B"));
    if (j.at("outcome") == "success") {
      ++ok;
      CHECK(j.at("final_states").at("A") == 5);
      CHECK(j.at("final_states").at("B") == 6);
    }
  }
  CHECK(ok == r.successes);
}

TEST_CASE("runaway runs are cut off") {
  Csa loop;
  loop.owner = CarId{"A"};
  loop.states = {0};
  loop.add_transition(0, label::TimeoutSys{sys_ev("tick", "B")}, 0);
  const System sys({loop});
  McOptions opt;
  opt.runs = 4;
  opt.max_steps = 100;
  const std::vector<GlobalEvent> sigma{ev("x", "A", "B")};
  const auto r = run_monte_carlo(sys, 0.5, sigma, opt);
  CHECK(r.diverged == 4);
  CHECK(r.successes == 0);
}
