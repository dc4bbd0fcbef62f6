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

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <cstring>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "protoforge/error.hpp"
#include "protoforge/semantics.hpp"

namespace protoforge {

namespace {

constexpr double kSatisfactionSlack = 1e-12;

void put_int(std::string& key, long long v) {
  char buf[sizeof v];
  std::memcpy(buf, &v, sizeof v);
  key.append(buf, sizeof v);
}

void put_str(std::string& key, const std::string& s) {
  put_int(key, static_cast<long long>(s.size()));
  key += s;
}

std::string config_key(const GlobalConfig& cfg) {
  std::string key;
  key.reserve(64);
  for (const auto& local : cfg.locals) {
    put_int(key, local.state);
    for (int v : local.valuation) put_int(key, v);
  }
  put_int(key, static_cast<long long>(cfg.priority));
  for (std::size_t c : cfg.calls_made) put_int(key, static_cast<long long>(c));
  for (bool p : cfg.participated) key.push_back(p ? '1' : '0');
  const auto& pr = cfg.projection;
  put_int(key, static_cast<long long>(pr.matched));
  key.push_back(static_cast<char>(pr.pending | (pr.sealed << 1) | (pr.dead << 2)));
  if (!cfg.rho.empty() && cfg.rho.back().kind == TraceItem::Kind::Broadcast) {
    const Message& m = cfg.rho.back().message;
    key.push_back('!');
    put_str(key, m.id);
    put_str(key, m.src.name);
    put_str(key, m.dst.name);
    key.push_back(m.data ? '+' : '-');
    if (m.data) put_str(key, *m.data);
  }
  return key;
}

struct Value {
  double success = 0.0;
  double absorbed = 0.0;
};

struct Frame {
  std::string key;
  std::vector<GlobalSuccessor> successors;
  std::size_t next = 0;
  Value acc;
};

}  // namespace

std::size_t budget_from_env() {
  const char* raw = std::getenv("PROTOFORGE_BUDGET");
  if (raw == nullptr || *raw == '\0') return kDefaultBudget;
  std::size_t value = 0;
  const char* end = raw + std::strlen(raw);
  auto [ptr, ec] = std::from_chars(raw, end, value);
  if (ec != std::errc() || ptr != end || value == 0) return kDefaultBudget;
  return value;
}

SyncProbReport explore_sync_prob(const System& system, double delta, std::span<const GlobalEvent> sigma,
                                 std::size_t budget) {
  if (!(delta >= 0.0 && delta <= 1.0)) {
    throw Error(ErrorCode::InvalidParams, "drop probability must lie in [0,1]");
  }
  const Scenario scenario{std::vector<GlobalEvent>(sigma.begin(), sigma.end())};

  std::unordered_map<std::string, Value> memo;
  std::unordered_set<std::string> on_stack;
  std::vector<Frame> stack;

  auto overflow = [&] {
    throw Error(ErrorCode::DivergenceDetected,
                "exploration exceeded the budget of " + std::to_string(budget) + " configurations");
  };

  // Returns true when the value of `cfg` is already known and stored in `out`.
  auto enter = [&](GlobalConfig cfg, Value& out) {
    cfg.prob = 1.0;
    std::string key = config_key(cfg);
    if (auto it = memo.find(key); it != memo.end()) {
      out = it->second;
      return true;
    }
    if (on_stack.count(key)) {
      throw Error(ErrorCode::DivergenceDetected, "the configuration graph contains a cycle");
    }
    if (memo.size() + stack.size() >= budget) overflow();
    auto successors = system.global_steps(delta, cfg, scenario);
    if (successors.empty()) {
      const bool ok = cfg.projection.complete(sigma.size()) && system.globally_final(cfg);
      out = Value{ok ? 1.0 : 0.0, 1.0};
      memo.emplace(std::move(key), out);
      return true;
    }
    on_stack.insert(key);
    stack.push_back(Frame{std::move(key), std::move(successors), 0, {}});
    return false;
  };

  Value root;
  bool done = enter(system.initial(scenario, false), root);
  while (!done) {
    Frame& top = stack.back();
    if (top.next == top.successors.size()) {
      Value v = top.acc;
      on_stack.erase(top.key);
      memo.emplace(std::move(top.key), v);
      stack.pop_back();
      if (stack.empty()) {
        root = v;
        done = true;
      } else {
        Frame& parent = stack.back();
        const double w = parent.successors[parent.next].config.prob;
        parent.acc.success += w * v.success;
        parent.acc.absorbed += w * v.absorbed;
        ++parent.next;
      }
      continue;
    }
    Value child;
    GlobalConfig next = top.successors[top.next].config;
    if (enter(std::move(next), child)) {
      Frame& parent = stack.back();
      const double w = parent.successors[parent.next].config.prob;
      parent.acc.success += w * child.success;
      parent.acc.absorbed += w * child.absorbed;
      ++parent.next;
    }
  }
  return SyncProbReport{root.success, root.absorbed, memo.size()};
}

double compute_sync_prob(const System& system, double delta, std::span<const GlobalEvent> sigma,
                         std::size_t budget) {
  return explore_sync_prob(system, delta, sigma, budget).probability;
}

CorrectnessReport check_correctness(const System& system, double delta, const ProtocolSpec& spec,
                                    std::size_t budget) {
  CorrectnessReport report;
  for (auto& required : enumerate_sequences(spec)) {
    SequenceVerdict v;
    v.achieved = compute_sync_prob(system, delta, required.events, budget);
    v.margin = v.achieved - required.p;
    PSequence achieved{required.events, std::min(1.0, v.achieved + kSatisfactionSlack)};
    v.ok = satisfies(achieved, spec);
    v.required = std::move(required);
    report.verdict = report.verdict && v.ok;
    report.sequences.push_back(std::move(v));
  }
  return report;
}

}  // namespace protoforge
