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

#include <benchmark/benchmark.h>

#include "protoforge/medium.hpp"
#include "protoforge/montecarlo.hpp"
#include "protoforge/synthesis.hpp"

namespace {

using namespace protoforge;

const char* const kSpec = "delta 0.35; cars A B; snd A->B(d) . (ack B->A : 0.7 | nack B->A : 0.8)";
const char* const kStrict = "delta 0.35; cars A B; snd A->B(d) . (ack B->A : 0.9 | nack B->A : 0.9)";

struct Fixture {
  FullSpec spec = parse_spec(kSpec);
  Synthesis synth = synthesize_all(spec);
  System system{synth.csas};
  std::vector<GlobalEvent> sigma = enumerate_sequences(spec.protocol).front().events;
};

Fixture& fixture() {
  static Fixture f;
  return f;
}

SweepGrid grid() {
  SweepGrid g;
  g.n_cars = parse_axis("2:20:2");
  g.d_max = parse_axis("10:100:10");
  g.tau_min = parse_axis("1:10:1");
  return g;
}

void BM_MonteCarloSerial(benchmark::State& state) {
  auto& f = fixture();
  McOptions opt;
  opt.runs = static_cast<std::size_t>(state.range(0));
  opt.seed = 7;
  for (auto _ : state) benchmark::DoNotOptimize(run_monte_carlo_serial(f.system, 0.35, f.sigma, opt).successes);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_MonteCarloParallel(benchmark::State& state) {
  auto& f = fixture();
  McOptions opt;
  opt.runs = static_cast<std::size_t>(state.range(0));
  opt.seed = 7;
  for (auto _ : state) benchmark::DoNotOptimize(run_monte_carlo(f.system, 0.35, f.sigma, opt).successes);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SweepSerial(benchmark::State& state) {
  const auto spec = parse_spec(kStrict).protocol;
  const auto g = grid();
  for (auto _ : state) benchmark::DoNotOptimize(feasibility_sweep_serial(spec, g).size());
}

void BM_SweepParallel(benchmark::State& state) {
  const auto spec = parse_spec(kStrict).protocol;
  const auto g = grid();
  for (auto _ : state) benchmark::DoNotOptimize(feasibility_sweep(spec, g).size());
}

}  // namespace

BENCHMARK(BM_MonteCarloSerial)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MonteCarloParallel)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepParallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
