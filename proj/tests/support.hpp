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

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "protoforge/csa.hpp"
#include "protoforge/qos.hpp"
#include "protoforge/semantics.hpp"
#include "protoforge/spec.hpp"
#include "protoforge/synthesis.hpp"

namespace pftest {

using namespace protoforge;

inline const char* const kExample = "delta 0.35; cars A B; snd A->B(d) . (ack B->A : 0.7 | nack B->A : 0.8)\n";
inline const char* const kExampleStrict = "delta 0.35; cars A B; snd A->B(d) . (ack B->A : 0.9 | nack B->A : 0.9)\n";

inline GlobalEvent ev(const std::string& name, const std::string& src, const std::string& dst,
                      std::optional<std::string> data = std::nullopt) {
  return GlobalEvent{name, CarId{src}, CarId{dst}, std::move(data)};
}

inline LocalEvent env_ev(const std::string& name, const std::string& peer, std::optional<std::string> data = {}) {
  return LocalEvent{name, CarId{peer}, std::move(data), Trigger::Env, Special::None};
}

inline LocalEvent sys_ev(const std::string& name, const std::string& peer, std::optional<std::string> data = {},
                         Special special = Special::None) {
  return LocalEvent{name, CarId{peer}, std::move(data), Trigger::Sys, special};
}

inline Condition le(const std::string& v, int n) { return Condition{v, Condition::Op::Le, n}; }
inline Condition gt(const std::string& v, int n) { return Condition{v, Condition::Op::Gt, n}; }

// Hand-built sender of the snd/ack/nack dialogue, with its own names for
// messages (a, b, c), counters (nu1..nu3) and states (1..6).
inline Csa reference_sender(int n1) {
  const Message a{"a", CarId{"A"}, CarId{"B"}, "d"};
  const Message b{"b", CarId{"B"}, CarId{"A"}, std::nullopt};
  const Message c{"c", CarId{"B"}, CarId{"A"}, std::nullopt};
  Csa m;
  m.owner = CarId{"A"};
  m.states = {1, 2, 3, 4, 5, 6};
  m.vars = {"nu1"};
  m.init = 1;
  m.finals = {5, 6};
  m.add_transition(1, label::Env{env_ev("snd", "B", "d")}, 2);
  m.add_transition(2, label::SysCond{sys_ev("fail1", "B", {}, Special::Fail), gt("nu1", n1)}, 4);
  m.add_transition(2, label::BroadcastCond{a, le("nu1", n1)}, 3);
  m.add_transition(3, label::TimeoutUpd{"nu1"}, 2);
  m.add_transition(3, label::RecvSys{b, sys_ev("ack", "B")}, 5);
  m.add_transition(3, label::RecvSys{c, sys_ev("nack", "B")}, 6);
  return m;
}

// Hand-built receiver of the same dialogue, states 1..10.
inline Csa reference_receiver(int n2, int n3) {
  const Message a{"a", CarId{"A"}, CarId{"B"}, "d"};
  const Message b{"b", CarId{"B"}, CarId{"A"}, std::nullopt};
  const Message c{"c", CarId{"B"}, CarId{"A"}, std::nullopt};
  Csa m;
  m.owner = CarId{"B"};
  m.states = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  m.vars = {"nu2", "nu3"};
  m.init = 1;
  m.finals = {6, 10};
  m.add_transition(1, label::RecvSys{a, sys_ev("snd", "A", "d")}, 2);
  m.add_transition(2, label::Env{env_ev("ack", "A")}, 3);
  m.add_transition(2, label::Env{env_ev("nack", "A")}, 7);
  m.add_transition(3, label::BroadcastCond{b, le("nu2", n2)}, 5);
  m.add_transition(3, label::SysCond{sys_ev("fail2", "A", {}, Special::Fail), gt("nu2", n2)}, 4);
  m.add_transition(5, label::RecvUpd{a, "nu2"}, 3);
  m.add_transition(5, label::TimeoutSys{sys_ev("success2", "A", {}, Special::Success)}, 6);
  m.add_transition(7, label::BroadcastCond{c, le("nu3", n3)}, 9);
  m.add_transition(7, label::SysCond{sys_ev("fail3", "A", {}, Special::Fail), gt("nu3", n3)}, 8);
  m.add_transition(9, label::RecvUpd{a, "nu3"}, 7);
  m.add_transition(9, label::TimeoutSys{sys_ev("success3", "A", {}, Special::Success)}, 10);
  return m;
}

// Probability of synchronizing snd.ack read off the hand deduction of the
// dialogue: p31 is the state right after the first broadcast of snd, p35
// the state right after the broadcast of ack.
inline double hand_deduction_two(int n1, int n2, double delta) {
  const double rho = 1.0 - delta;
  std::function<double(int, int)> p35 = [&](int a, int b) {
    return rho + delta * ((a == 0 || b == 0) ? 0.0 : rho * p35(a - 1, b - 1));
  };
  std::function<double(int, int)> p31 = [&](int a, int b) {
    return rho * p35(a, b) + delta * (a == 0 ? 0.0 : p31(a - 1, b));
  };
  return p31(n1, n2);
}

inline std::vector<Csa> synthesize_cars(const FullSpec& spec, const BoundsVector& bounds) {
  std::vector<Csa> out;
  for (const auto& car : spec.cars) out.push_back(synthesize_for_car(spec.protocol, car, bounds));
  return out;
}

// A linear dialogue e0 A->B . e1 B->A . ... with `length` events.
inline FullSpec chain_spec(int length, double p = 0.5, double delta = 0.3) {
  std::string text = "delta " + std::to_string(delta) + "; cars A B; ";
  for (int k = 0; k < length; ++k) {
    text += "e" + std::to_string(k) + (k % 2 == 0 ? " A->B" : " B->A");
    text += k + 1 < length ? " . " : " : " + std::to_string(p);
  }
  return parse_spec(text);
}

inline BoundsVector chain_bounds(const std::vector<int>& n) {
  BoundsVector b;
  for (std::size_t k = 0; k < n.size(); ++k) b["e" + std::to_string(k)] = n[k];
  return b;
}

// Random well-posed two-party tree with distinct event names.
class SpecGen {
 public:
  explicit SpecGen(std::uint64_t seed) : rng_(seed) {}

  ProtocolSpec make(int max_depth = 5) {
    counter_ = 0;
    return node(true, 0, max_depth);
  }

  double prob() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_); }
  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  std::mt19937_64& rng() { return rng_; }

 private:
  GlobalEvent fresh(bool a_to_b) {
    std::optional<std::string> data;
    if (uniform(0, 2) == 0) data = "d" + std::to_string(uniform(0, 3));
    return GlobalEvent{"e" + std::to_string(counter_++), CarId{a_to_b ? "A" : "B"}, CarId{a_to_b ? "B" : "A"},
                       data};
  }

  double round_prob() { return std::round(prob() * 1000.0) / 1000.0; }

  ProtocolSpec node(bool a_to_b, int depth, int max_depth) {
    const int choice = uniform(0, 9);
    if (choice < 2 && depth < max_depth) {
      return ProtocolSpec::disj(node(a_to_b, depth + 1, max_depth), node(a_to_b, depth + 1, max_depth));
    }
    GlobalEvent e = fresh(a_to_b);
    // The last event of a path follows at least one other event.
    if (depth + 1 >= max_depth) {
      return ProtocolSpec::seq(e, ProtocolSpec::leaf(fresh(!a_to_b), round_prob()));
    }
    if (choice < 5) return ProtocolSpec::seq(e, ProtocolSpec::leaf(fresh(!a_to_b), round_prob()));
    return ProtocolSpec::seq(e, node(!a_to_b, depth + 1, max_depth));
  }

  std::mt19937_64 rng_;
  int counter_ = 0;
};

// Minimal-sum, then lexicographically smallest, bounds vector found by
// trying every vector with components up to `limit`.
inline std::optional<std::vector<int>> brute_force_opt(const ProtocolSpec& spec, double delta, int limit) {
  const auto events = event_order(spec);
  const auto seqs = enumerate_sequences(spec);
  const std::size_t k = events.size();
  std::vector<int> v(k, 0);
  std::optional<std::vector<int>> best;
  int best_sum = 0;
  for (;;) {
    BoundsVector b;
    for (std::size_t j = 0; j < k; ++j) b[events[j].name] = v[j];
    bool ok = true;
    for (const auto& s : seqs) {
      if (sync_prob(bounds_along(b, s.events), delta) < s.p) {
        ok = false;
        break;
      }
    }
    if (ok) {
      int sum = 0;
      for (int x : v) sum += x;
      if (!best || sum < best_sum || (sum == best_sum && v < *best)) {
        best = v;
        best_sum = sum;
      }
    }
    std::size_t j = k;
    while (j > 0) {
      --j;
      if (v[j] < limit) {
        ++v[j];
        std::fill(v.begin() + static_cast<long>(j) + 1, v.end(), 0);
        break;
      }
      if (j == 0) return best;
    }
    if (k == 0) return best;
  }
}

}  // namespace pftest
