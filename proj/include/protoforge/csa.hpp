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

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "protoforge/spec.hpp"

namespace protoforge {

using StateId = int;

// ν ⋈ n with ⋈ ∈ {≤, >}.
struct Condition {
  enum class Op { Le, Gt };

  std::string var;
  Op op = Op::Le;
  int bound = 0;

  bool holds(int value) const { return op == Op::Le ? value <= bound : value > bound; }

  auto operator<=>(const Condition&) const = default;
};

// !!m_{src→dst}(d) / ?m_{dst←src}(d)
struct Message {
  std::string id;
  CarId src;
  CarId dst;
  std::optional<std::string> data;

  auto operator<=>(const Message&) const = default;
};

enum class Trigger { Env, Sys };
enum class Special { None, Fail, Success };

struct LocalEvent {
  std::string name;
  CarId peer;
  std::optional<std::string> data;
  Trigger trigger = Trigger::Env;
  Special special = Special::None;

  auto operator<=>(const LocalEvent&) const = default;
};

namespace label {

struct Env {
  LocalEvent event;
  auto operator<=>(const Env&) const = default;
};
struct SysCond {
  LocalEvent event;
  Condition cond;
  auto operator<=>(const SysCond&) const = default;
};
struct TimeoutSys {
  LocalEvent event;
  auto operator<=>(const TimeoutSys&) const = default;
};
struct TimeoutUpd {
  std::string var;
  auto operator<=>(const TimeoutUpd&) const = default;
};
struct BroadcastCond {
  Message message;
  Condition cond;
  auto operator<=>(const BroadcastCond&) const = default;
};
struct RecvSys {
  Message message;
  LocalEvent event;
  auto operator<=>(const RecvSys&) const = default;
};
struct RecvUpd {
  Message message;
  std::string var;
  auto operator<=>(const RecvUpd&) const = default;
};

}  // namespace label

/// The seven transition-label kinds, in declaration order.
using TransitionLabel = std::variant<label::Env, label::SysCond, label::TimeoutSys, label::TimeoutUpd,
                                     label::BroadcastCond, label::RecvSys, label::RecvUpd>;

enum class LabelKind { Env, SysCond, TimeoutSys, TimeoutUpd, BroadcastCond, RecvSys, RecvUpd };

inline LabelKind kind_of(const TransitionLabel& l) { return static_cast<LabelKind>(l.index()); }

const char* kind_name(LabelKind kind);
std::string to_string(const LocalEvent& e, const CarId& owner);
std::string to_string(const Message& m, bool reception);
std::string to_string(const Condition& c);
std::string to_string(const TransitionLabel& l, const CarId& owner);

struct TransitionKey {
  StateId from;
  TransitionLabel label;

  auto operator<=>(const TransitionKey&) const = default;
};

/// Communication service automaton ⟨S, V, s_init, S_f, T⟩ owned by one car.
///
/// T is a partial function; add_transition rejects a second target for the
/// same (state, label) pair. Counter valuations are not part of the states,
/// they live in the runtime configurations of the semantics.
struct Csa {
  CarId owner;
  std::set<StateId> states;
  std::set<std::string> vars;
  StateId init = 0;
  std::set<StateId> finals;
  std::map<TransitionKey, StateId> transitions;

  bool is_final(StateId s) const { return finals.count(s) != 0; }

  // Throws Error(NonDeterministic) on a conflicting target.
  void add_transition(StateId from, TransitionLabel label, StateId to);

  bool operator==(const Csa&) const = default;
};

struct ValidationReport {
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

ValidationReport validate(const Csa& csa);

/// Equality up to a bijective renaming of states, message ids, counters and
/// the names of fail/success events.
bool isomorphic(const Csa& a, const Csa& b);

std::string export_dot(const Csa& csa);
std::string export_json(const Csa& csa);
// Throws Error(InvalidCsa) on schema violations.
Csa import_json(const std::string& text);

}  // namespace protoforge
