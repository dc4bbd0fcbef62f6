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
#include <deque>
#include <functional>

#include "protoforge/csa.hpp"
#include "protoforge/error.hpp"

namespace protoforge {

const char* kind_name(LabelKind kind) {
  switch (kind) {
    case LabelKind::Env: return "env";
    case LabelKind::SysCond: return "sys_cond";
    case LabelKind::TimeoutSys: return "timeout_sys";
    case LabelKind::TimeoutUpd: return "timeout_upd";
    case LabelKind::BroadcastCond: return "broadcast_cond";
    case LabelKind::RecvSys: return "recv_sys";
    case LabelKind::RecvUpd: return "recv_upd";
  }
  return "?";
}

namespace {

std::string data_suffix(const std::optional<std::string>& d) { return d ? "(" + *d + ")" : ""; }

}  // namespace

std::string to_string(const LocalEvent& e, const CarId& owner) {
  if (e.trigger == Trigger::Env) return "env " + e.name + " " + owner.name + "->" + e.peer.name + data_suffix(e.data);
  return "sys " + e.name + " " + owner.name + "<-" + e.peer.name + data_suffix(e.data);
}

std::string to_string(const Message& m, bool reception) {
  if (reception) return "?" + m.id + " " + m.dst.name + "<-" + m.src.name + data_suffix(m.data);
  return "!!" + m.id + " " + m.src.name + "->" + m.dst.name + data_suffix(m.data);
}

std::string to_string(const Condition& c) {
  return c.var + (c.op == Condition::Op::Le ? " <= " : " > ") + std::to_string(c.bound);
}

std::string to_string(const TransitionLabel& l, const CarId& owner) {
  return std::visit(
      [&](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, label::Env>) {
          return to_string(v.event, owner);
        } else if constexpr (std::is_same_v<T, label::SysCond>) {
          return to_string(v.event, owner) + " [" + to_string(v.cond) + "]";
        } else if constexpr (std::is_same_v<T, label::TimeoutSys>) {
          return "T.O. / " + to_string(v.event, owner);
        } else if constexpr (std::is_same_v<T, label::TimeoutUpd>) {
          return "T.O. / " + v.var + "++";
        } else if constexpr (std::is_same_v<T, label::BroadcastCond>) {
          return to_string(v.message, false) + " [" + to_string(v.cond) + "]";
        } else if constexpr (std::is_same_v<T, label::RecvSys>) {
          return to_string(v.message, true) + " / " + to_string(v.event, owner);
        } else {
          return to_string(v.message, true) + " / " + v.var + "++";
        }
      },
      l);
}

void Csa::add_transition(StateId from, TransitionLabel label, StateId to) {
  TransitionKey key{from, std::move(label)};
  auto [it, inserted] = transitions.emplace(key, to);
  if (!inserted && it->second != to) {
    throw Error(ErrorCode::NonDeterministic,
                "state s" + std::to_string(from) + " has two targets (s" +
                    std::to_string(it->second) + ", s" + std::to_string(to) + ") for label '" +
                    to_string(key.label, owner) + "'");
  }
}

ValidationReport validate(const Csa& csa) {
  ValidationReport report;
  auto& v = report.violations;
  auto state_name = [](StateId s) { return "s" + std::to_string(s); };

  if (!csa.states.count(csa.init)) v.push_back("initial state " + state_name(csa.init) + " is not declared");
  for (StateId f : csa.finals) {
    if (!csa.states.count(f)) v.push_back("final state " + state_name(f) + " is not declared");
  }

  auto check_var = [&](const std::string& var, const std::string& where) {
    if (!csa.vars.count(var)) v.push_back("counter '" + var + "' used in " + where + " is not declared");
  };
  auto check_event = [&](const LocalEvent& e, const std::string& where) {
    if (e.peer == csa.owner) v.push_back("event '" + e.name + "' in " + where + " is addressed to its own car");
    if (e.special != Special::None && e.trigger != Trigger::Sys) {
      v.push_back("fail/success event '" + e.name + "' in " + where + " must be system-triggered");
    }
  };

  for (const auto& [key, to] : csa.transitions) {
    const std::string where = state_name(key.from) + " -> " + state_name(to);
    if (!csa.states.count(key.from)) v.push_back("transition " + where + " leaves undeclared state " + state_name(key.from));
    if (!csa.states.count(to)) v.push_back("transition " + where + " enters undeclared state " + state_name(to));
    std::visit(
        [&](const auto& l) {
          using T = std::decay_t<decltype(l)>;
          if constexpr (std::is_same_v<T, label::Env>) {
            check_event(l.event, where);
            if (l.event.trigger != Trigger::Env) v.push_back("env label on " + where + " carries a system-triggered event");
          } else if constexpr (std::is_same_v<T, label::SysCond>) {
            check_event(l.event, where);
            check_var(l.cond.var, where);
            if (l.event.trigger != Trigger::Sys) v.push_back("sys_cond label on " + where + " carries an environment-triggered event");
          } else if constexpr (std::is_same_v<T, label::TimeoutSys>) {
            check_event(l.event, where);
            if (l.event.trigger != Trigger::Sys) v.push_back("timeout_sys label on " + where + " carries an environment-triggered event");
          } else if constexpr (std::is_same_v<T, label::TimeoutUpd>) {
            check_var(l.var, where);
          } else if constexpr (std::is_same_v<T, label::BroadcastCond>) {
            check_var(l.cond.var, where);
            if (l.message.src != csa.owner) v.push_back("broadcast '" + l.message.id + "' on " + where + " does not originate at the owner");
          } else if constexpr (std::is_same_v<T, label::RecvSys>) {
            check_event(l.event, where);
            if (l.message.dst != csa.owner) v.push_back("reception '" + l.message.id + "' on " + where + " is not addressed to the owner");
          } else {
            check_var(l.var, where);
            if (l.message.dst != csa.owner) v.push_back("reception '" + l.message.id + "' on " + where + " is not addressed to the owner");
          }
        },
        key.label);
  }
  return report;
}

namespace {

class Renaming {
 public:
  bool unify_message(const std::string& a, const std::string& b) { return unify(msgs_, a, b); }
  bool unify_var(const std::string& a, const std::string& b) { return unify(vars_, a, b); }
  bool unify_event(const std::string& a, const std::string& b) { return unify(events_, a, b); }

 private:
  struct Bimap {
    std::map<std::string, std::string> fwd, bwd;
  };

  static bool unify(Bimap& m, const std::string& a, const std::string& b) {
    auto f = m.fwd.find(a);
    auto r = m.bwd.find(b);
    if (f != m.fwd.end() || r != m.bwd.end()) {
      return f != m.fwd.end() && r != m.bwd.end() && f->second == b && r->second == a;
    }
    m.fwd.emplace(a, b);
    m.bwd.emplace(b, a);
    return true;
  }

  Bimap msgs_, vars_, events_;
};

bool unify(const LocalEvent& a, const LocalEvent& b, Renaming& r) {
  if (a.peer != b.peer || a.data != b.data || a.trigger != b.trigger || a.special != b.special) return false;
  if (a.special == Special::None) return a.name == b.name;
  return r.unify_event(a.name, b.name);
}

bool unify(const Message& a, const Message& b, Renaming& r) {
  return a.src == b.src && a.dst == b.dst && a.data == b.data && r.unify_message(a.id, b.id);
}

bool unify(const Condition& a, const Condition& b, Renaming& r) {
  return a.op == b.op && a.bound == b.bound && r.unify_var(a.var, b.var);
}

bool unify(const TransitionLabel& a, const TransitionLabel& b, Renaming& r) {
  if (a.index() != b.index()) return false;
  return std::visit(
      [&](const auto& la) -> bool {
        using T = std::decay_t<decltype(la)>;
        const auto& lb = std::get<T>(b);
        if constexpr (std::is_same_v<T, label::Env> || std::is_same_v<T, label::TimeoutSys>) {
          return unify(la.event, lb.event, r);
        } else if constexpr (std::is_same_v<T, label::SysCond>) {
          return unify(la.event, lb.event, r) && unify(la.cond, lb.cond, r);
        } else if constexpr (std::is_same_v<T, label::TimeoutUpd>) {
          return r.unify_var(la.var, lb.var);
        } else if constexpr (std::is_same_v<T, label::BroadcastCond>) {
          return unify(la.message, lb.message, r) && unify(la.cond, lb.cond, r);
        } else if constexpr (std::is_same_v<T, label::RecvSys>) {
          return unify(la.message, lb.message, r) && unify(la.event, lb.event, r);
        } else {
          return unify(la.message, lb.message, r) && r.unify_var(la.var, lb.var);
        }
      },
      a);
}

struct Edge {
  StateId from;
  const TransitionLabel* label;
  StateId to;
};

struct Signature {
  bool final;
  bool init;
  std::vector<int> out_kinds;
  std::vector<int> in_kinds;

  bool operator==(const Signature&) const = default;
};

std::map<StateId, Signature> signatures(const Csa& c) {
  std::map<StateId, Signature> sig;
  for (StateId s : c.states) sig[s] = Signature{c.is_final(s), s == c.init, {}, {}};
  for (const auto& [key, to] : c.transitions) {
    sig[key.from].out_kinds.push_back(static_cast<int>(key.label.index()));
    sig[to].in_kinds.push_back(static_cast<int>(key.label.index()));
  }
  for (auto& [s, g] : sig) {
    std::sort(g.out_kinds.begin(), g.out_kinds.end());
    std::sort(g.in_kinds.begin(), g.in_kinds.end());
  }
  return sig;
}

// Matches every edge of `a` to a distinct edge of `b` under one consistent
// renaming, backtracking over label choices.
bool match_edges(const std::vector<Edge>& a, const std::vector<Edge>& b, std::vector<bool>& used,
                 std::size_t idx, const Renaming& r) {
  if (idx == a.size()) return true;
  for (std::size_t j = 0; j < b.size(); ++j) {
    if (used[j] || b[j].from != a[idx].from || b[j].to != a[idx].to) continue;
    Renaming next = r;
    if (!unify(*a[idx].label, *b[j].label, next)) continue;
    used[j] = true;
    if (match_edges(a, b, used, idx + 1, next)) return true;
    used[j] = false;
  }
  return false;
}

}  // namespace

bool isomorphic(const Csa& a, const Csa& b) {
  if (a.states.size() != b.states.size() || a.finals.size() != b.finals.size() ||
      a.transitions.size() != b.transitions.size() || a.vars.size() != b.vars.size()) {
    return false;
  }

  // BFS order from the initial state keeps the search mostly forced.
  std::vector<StateId> order;
  std::set<StateId> seen{a.init};
  std::deque<StateId> queue{a.init};
  while (!queue.empty()) {
    StateId s = queue.front();
    queue.pop_front();
    order.push_back(s);
    for (const auto& [key, to] : a.transitions) {
      if (key.from == s && seen.insert(to).second) queue.push_back(to);
    }
  }
  for (StateId s : a.states) {
    if (seen.insert(s).second) order.push_back(s);
  }

  const auto sig_a = signatures(a);
  const auto sig_b = signatures(b);
  std::map<StateId, StateId> phi;
  std::set<StateId> used_b;

  auto edges_consistent = [&](StateId s) {
    // Every a-edge between mapped states needs some b-edge with compatible kind.
    for (const auto& [key, to] : a.transitions) {
      if (key.from != s && to != s) continue;
      auto f = phi.find(key.from);
      auto t = phi.find(to);
      if (f == phi.end() || t == phi.end()) continue;
      bool found = false;
      for (const auto& [kb, tb] : b.transitions) {
        if (kb.from == f->second && tb == t->second && kb.label.index() == key.label.index()) {
          found = true;
          break;
        }
      }
      if (!found) return false;
    }
    return true;
  };

  std::function<bool(std::size_t)> assign = [&](std::size_t idx) -> bool {
    if (idx == order.size()) {
      std::vector<Edge> ea, eb;
      for (const auto& [key, to] : a.transitions) ea.push_back({phi.at(key.from), &key.label, phi.at(to)});
      for (const auto& [key, to] : b.transitions) eb.push_back({key.from, &key.label, to});
      std::vector<bool> used(eb.size(), false);
      return match_edges(ea, eb, used, 0, Renaming{});
    }
    const StateId s = order[idx];
    for (StateId t : b.states) {
      if (used_b.count(t) || !(sig_a.at(s) == sig_b.at(t))) continue;
      phi[s] = t;
      used_b.insert(t);
      if (edges_consistent(s) && assign(idx + 1)) return true;
      phi.erase(s);
      used_b.erase(t);
    }
    return false;
  };
  return assign(0);
}

}  // namespace protoforge
