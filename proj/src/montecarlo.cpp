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

#include "protoforge/montecarlo.hpp"

#include <cmath>
#include <json.hpp>
#include <random>

#include "protoforge/error.hpp"

namespace protoforge {

namespace {

enum class Outcome : char { Success, Failure, Diverged };

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Success: return "success";
    case Outcome::Failure: return "failure";
    case Outcome::Diverged: return "diverged";
  }
  return "?";
}

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::size_t pick(std::mt19937_64& rng, std::size_t n) {
  return n == 1 ? 0 : static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n));
}

std::string sequence_label(std::span<const GlobalEvent> sigma) {
  std::string out;
  for (const auto& e : sigma) {
    if (!out.empty()) out += '.';
    out += e.name;
  }
  return out;
}

struct RunRecord {
  Outcome outcome = Outcome::Failure;
  std::string trace;
};

RunRecord simulate_one(const System& system, double delta, const Scenario& scenario, const McOptions& opt,
                       std::size_t run) {
  std::mt19937_64 rng(splitmix(splitmix(opt.seed) ^ splitmix(opt.stream + 0x5851f42d4c957f2dULL) ^ run));
  GlobalConfig cfg = system.initial(scenario, opt.traces);
  RunRecord rec;
  std::size_t steps = 0;
  for (;;) {
    if (steps++ >= opt.max_steps) {
      rec.outcome = Outcome::Diverged;
      break;
    }
    auto successors = system.global_steps(delta, cfg, scenario);
    if (successors.empty()) {
      const bool ok = cfg.projection.complete(scenario.sequence.size()) && system.globally_final(cfg);
      rec.outcome = ok ? Outcome::Success : Outcome::Failure;
      break;
    }
    std::vector<std::size_t> trans;
    std::size_t drop = successors.size();
    for (std::size_t k = 0; k < successors.size(); ++k) {
      if (successors[k].rule == GlobalRule::Trans) trans.push_back(k);
      if (successors[k].rule == GlobalRule::Drop) drop = k;
    }
    std::size_t chosen;
    if (!trans.empty() || drop < successors.size()) {
      const bool dropped = trans.empty() || (drop < successors.size() && uniform01(rng) < delta);
      chosen = dropped ? drop : trans[pick(rng, trans.size())];
    } else {
      chosen = pick(rng, successors.size());
    }
    cfg = std::move(successors[chosen].config);
    cfg.prob = 1.0;
  }
  if (opt.traces) {
    nlohmann::ordered_json j;
    j["run"] = run;
    j["sequence"] = sequence_label(scenario.sequence);
    j["outcome"] = outcome_name(rec.outcome);
    auto rho = nlohmann::json::array();
    for (const auto& item : cfg.rho) rho.push_back(to_string(item));
    j["rho"] = std::move(rho);
    nlohmann::ordered_json finals = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < system.size(); ++i) finals[system.at(i).csa().owner.name] = cfg.locals[i].state;
    j["final_states"] = std::move(finals);
    rec.trace = j.dump();
  }
  return rec;
}

McResult summarize(std::vector<RunRecord>& records, bool traces) {
  McResult r;
  r.runs = records.size();
  for (auto& rec : records) {
    switch (rec.outcome) {
      case Outcome::Success: ++r.successes; break;
      case Outcome::Failure: ++r.failures; break;
      case Outcome::Diverged: ++r.diverged; break;
    }
    if (traces) r.traces.push_back(std::move(rec.trace));
  }
  const double n = static_cast<double>(r.runs);
  r.rate = static_cast<double>(r.successes) / n;
  r.std_error = std::sqrt(r.rate * (1.0 - r.rate) / n);
  return r;
}

void check(double delta, const McOptions& opt) {
  if (!(delta >= 0.0 && delta <= 1.0)) throw Error(ErrorCode::InvalidParams, "drop probability must lie in [0,1]");
  if (opt.runs == 0) throw Error(ErrorCode::InvalidParams, "at least one run is required");
}

}  // namespace

McResult run_monte_carlo_serial(const System& system, double delta, std::span<const GlobalEvent> sigma,
                                const McOptions& options) {
  check(delta, options);
  const Scenario scenario{std::vector<GlobalEvent>(sigma.begin(), sigma.end())};
  std::vector<RunRecord> records(options.runs);
  for (std::size_t k = 0; k < options.runs; ++k) records[k] = simulate_one(system, delta, scenario, options, k);
  return summarize(records, options.traces);
}

McResult run_monte_carlo(const System& system, double delta, std::span<const GlobalEvent> sigma,
                         const McOptions& options) {
  check(delta, options);
  const Scenario scenario{std::vector<GlobalEvent>(sigma.begin(), sigma.end())};
  std::vector<RunRecord> records(options.runs);
  const auto count = static_cast<long long>(options.runs);
#pragma omp parallel for schedule(static)
  for (long long k = 0; k < count; ++k) {
    records[k] = simulate_one(system, delta, scenario, options, static_cast<std::size_t>(k));
  }
  return summarize(records, options.traces);
}

}  // namespace protoforge
