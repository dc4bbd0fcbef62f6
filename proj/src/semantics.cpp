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

#include "protoforge/semantics.hpp"

#include <algorithm>

#include "protoforge/error.hpp"

namespace protoforge {

RuleClass rule_class(LocalRule rule) {
  switch (rule) {
    case LocalRule::Env:
    case LocalRule::SysC:
    case LocalRule::BC:
      return RuleClass::E;
    case LocalRule::ToSys:
    case LocalRule::ToUpd:
      return RuleClass::T;
    case LocalRule::RSys:
    case LocalRule::RUpd:
      return RuleClass::R;
  }
  return RuleClass::E;
}

const char* rule_name(LocalRule rule) {
  switch (rule) {
    case LocalRule::Env: return "env";
    case LocalRule::SysC: return "sys-c";
    case LocalRule::ToSys: return "to-sys";
    case LocalRule::ToUpd: return "to-upd";
    case LocalRule::BC: return "b-c";
    case LocalRule::RSys: return "r-sys";
    case LocalRule::RUpd: return "r-upd";
  }
  return "?";
}

const char* rule_name(GlobalRule rule) {
  switch (rule) {
    case GlobalRule::Trans: return "trans";
    case GlobalRule::Drop: return "drop";
    case GlobalRule::Nacc: return "nacc";
    case GlobalRule::PrE: return "pr-e";
    case GlobalRule::PrT: return "pr-t";
    case GlobalRule::Npr: return "npr";
  }
  return "?";
}

std::string to_string(const TraceItem& item) {
  switch (item.kind) {
    case TraceItem::Kind::Env:
    case TraceItem::Kind::Sys:
      return to_string(item.event, item.car);
    case TraceItem::Kind::Timeout:
      return "T.O. " + item.car.name;
    case TraceItem::Kind::Broadcast:
      return to_string(item.message, false);
    case TraceItem::Kind::Reception:
      return to_string(item.message, true);
  }
  return "?";
}

// ---------------------------------------------------------------------------

CompiledCsa::CompiledCsa(Csa csa) : csa_(std::move(csa)), index_(csa_.states.begin(), csa_.states.end()) {
  out_.resize(index_.size());
  auto slot = [&](const std::string& var) {
    auto it = csa_.vars.find(var);
    if (it == csa_.vars.end()) {
      throw Error(ErrorCode::InvalidCsa, "counter '" + var + "' of CSA " + csa_.owner.name + " is not declared");
    }
    return static_cast<int>(std::distance(csa_.vars.begin(), it));
  };
  for (const auto& [key, to] : csa_.transitions) {
    auto pos = std::lower_bound(index_.begin(), index_.end(), key.from);
    if (pos == index_.end() || *pos != key.from || !csa_.states.count(to)) {
      throw Error(ErrorCode::InvalidCsa, "CSA " + csa_.owner.name + " has a transition between undeclared states");
    }
    int var = -1;
    std::visit(
        [&](const auto& l) {
          using T = std::decay_t<decltype(l)>;
          if constexpr (std::is_same_v<T, label::SysCond> || std::is_same_v<T, label::BroadcastCond>) {
            var = slot(l.cond.var);
          } else if constexpr (std::is_same_v<T, label::TimeoutUpd> || std::is_same_v<T, label::RecvUpd>) {
            var = slot(l.var);
          }
        },
        key.label);
    out_[pos - index_.begin()].push_back(Out{&key.label, to, var});
  }
  if (!csa_.states.count(csa_.init)) {
    throw Error(ErrorCode::InvalidCsa, "CSA " + csa_.owner.name + " has an undeclared initial state");
  }
}

std::span<const CompiledCsa::Out> CompiledCsa::outgoing(StateId s) const {
  auto pos = std::lower_bound(index_.begin(), index_.end(), s);
  if (pos == index_.end() || *pos != s) return {};
  return out_[pos - index_.begin()];
}

LocalConfig CompiledCsa::initial() const {
  return LocalConfig{csa_.init, Valuation(csa_.vars.size(), 0)};
}

std::vector<LocalStep> local_steps(const CompiledCsa& compiled, const LocalConfig& cfg,
                                   const std::optional<Message>& reception) {
  const CarId& owner = compiled.csa().owner;
  std::vector<LocalStep> steps;

  auto moved = [&](StateId to) { return LocalConfig{to, cfg.valuation}; };
  auto bumped = [&](StateId to, int var) {
    LocalConfig next{to, cfg.valuation};
    ++next.valuation[var];
    return next;
  };
  auto event_item = [&](const LocalEvent& e) {
    TraceItem t;
    t.kind = e.trigger == Trigger::Env ? TraceItem::Kind::Env : TraceItem::Kind::Sys;
    t.car = owner;
    t.event = e;
    return t;
  };
  TraceItem timeout;
  timeout.kind = TraceItem::Kind::Timeout;
  timeout.car = owner;

  for (const auto& out : compiled.outgoing(cfg.state)) {
    std::visit(
        [&](const auto& l) {
          using T = std::decay_t<decltype(l)>;
          if constexpr (std::is_same_v<T, label::Env>) {
            steps.push_back({LocalRule::Env, {event_item(l.event)}, moved(out.to)});
          } else if constexpr (std::is_same_v<T, label::SysCond>) {
            if (l.cond.holds(cfg.valuation[out.var])) {
              steps.push_back({LocalRule::SysC, {event_item(l.event)}, moved(out.to)});
            }
          } else if constexpr (std::is_same_v<T, label::TimeoutSys>) {
            steps.push_back({LocalRule::ToSys, {timeout, event_item(l.event)}, moved(out.to)});
          } else if constexpr (std::is_same_v<T, label::TimeoutUpd>) {
            steps.push_back({LocalRule::ToUpd, {timeout}, bumped(out.to, out.var)});
          } else if constexpr (std::is_same_v<T, label::BroadcastCond>) {
            if (l.cond.holds(cfg.valuation[out.var])) {
              TraceItem b;
              b.kind = TraceItem::Kind::Broadcast;
              b.car = owner;
              b.message = l.message;
              steps.push_back({LocalRule::BC, {b}, moved(out.to)});
            }
          } else if constexpr (std::is_same_v<T, label::RecvSys>) {
            if (reception && *reception == l.message) {
              steps.push_back({LocalRule::RSys, {event_item(l.event)}, moved(out.to)});
            }
          } else {
            if (reception && *reception == l.message) {
              steps.push_back({LocalRule::RUpd, {}, bumped(out.to, out.var)});
            }
          }
        },
        *out.label);
  }
  return steps;
}

// ---------------------------------------------------------------------------

namespace {

bool same_event(const GlobalEvent& g, const CarId& src, const CarId& dst, const LocalEvent& e) {
  return g.name == e.name && g.src == src && g.dst == dst && g.data == e.data;
}

}  // namespace

std::vector<ProjectedItem> project(std::span<const TraceItem> rho) {
  std::vector<ProjectedItem> out;
  bool sealed = false;
  for (const auto& item : rho) {
    if (item.kind == TraceItem::Kind::Env) {
      out.push_back({false, GlobalEvent{item.event.name, item.car, item.event.peer, item.event.data}});
      sealed = false;
    } else if (item.kind == TraceItem::Kind::Sys) {
      if (out.empty() || out.back().synchronized || sealed) continue;
      const GlobalEvent& env = out.back().event;
      if (item.event.special == Special::None && same_event(env, item.event.peer, item.car, item.event)) {
        out.back().synchronized = true;
      } else {
        sealed = true;
      }
    }
  }
  return out;
}

void ProjectionState::append(const TraceItem& item, std::span<const GlobalEvent> sigma) {
  if (dead) return;
  if (item.kind == TraceItem::Kind::Env) {
    if (pending || matched >= sigma.size() || !same_event(sigma[matched], item.car, item.event.peer, item.event)) {
      dead = true;
      return;
    }
    pending = true;
    sealed = false;
  } else if (item.kind == TraceItem::Kind::Sys) {
    if (!pending || sealed) return;
    if (item.event.special == Special::None &&
        same_event(sigma[matched], item.event.peer, item.car, item.event)) {
      pending = false;
      ++matched;
    } else {
      sealed = true;
    }
  }
}

// ---------------------------------------------------------------------------

System::System(std::vector<Csa> csas) {
  csas_.reserve(csas.size());
  for (auto& c : csas) {
    for (const auto& existing : csas_) {
      if (existing.csa().owner == c.owner) {
        throw Error(ErrorCode::InvalidCsa, "two CSAs for car " + c.owner.name);
      }
    }
    csas_.emplace_back(std::move(c));
  }
}

std::optional<std::size_t> System::index_of(const CarId& car) const {
  for (std::size_t i = 0; i < csas_.size(); ++i) {
    if (csas_[i].csa().owner == car) return i;
  }
  return std::nullopt;
}

GlobalConfig System::initial(const Scenario& scenario, bool record) const {
  GlobalConfig cfg;
  cfg.record = record;
  for (const auto& c : csas_) cfg.locals.push_back(c.initial());
  cfg.calls_made.assign(csas_.size(), 0);
  cfg.participated.assign(csas_.size(), false);
  if (!scenario.sequence.empty()) {
    if (auto idx = index_of(scenario.sequence.front().src)) cfg.priority = *idx;
  }
  return cfg;
}

std::vector<LocalStep> System::enabled(std::size_t idx, const GlobalConfig& cfg, const Scenario& scenario,
                                       bool e_class, bool t_class) const {
  std::vector<LocalStep> steps = local_steps(csas_[idx], cfg.locals[idx]);
  const CarId& owner = csas_[idx].csa().owner;

  // The ASC of `owner` only issues the next call of the scenario.
  const GlobalEvent* next_call = nullptr;
  std::size_t seen = 0;
  for (const auto& e : scenario.sequence) {
    if (e.src != owner) continue;
    if (seen++ == cfg.calls_made[idx]) {
      next_call = &e;
      break;
    }
  }

  std::erase_if(steps, [&](const LocalStep& s) {
    const RuleClass rc = rule_class(s.rule);
    if (rc == RuleClass::E && !e_class) return true;
    if (rc == RuleClass::T && !t_class) return true;
    if (s.rule == LocalRule::Env) {
      const LocalEvent& ev = s.emitted.front().event;
      return next_call == nullptr || !same_event(*next_call, owner, ev.peer, ev);
    }
    return false;
  });
  return steps;
}

GlobalConfig System::apply(const GlobalConfig& cfg, std::size_t idx, const LocalStep& step,
                           const Scenario& scenario) const {
  GlobalConfig next = cfg;
  next.locals[idx] = step.next;
  next.participated[idx] = true;
  if (step.rule == LocalRule::Env) ++next.calls_made[idx];
  for (const auto& item : step.emitted) {
    next.projection.append(item, scenario.sequence);
    if (!next.record) next.rho.clear();
    next.rho.push_back(item);
  }
  return next;
}

std::vector<GlobalSuccessor> System::global_steps(double delta, const GlobalConfig& cfg,
                                                  const Scenario& scenario) const {
  std::vector<GlobalSuccessor> out;

  if (!cfg.rho.empty() && cfg.rho.back().kind == TraceItem::Kind::Broadcast) {
    // The medium acts on the pending broadcast: [trans], [drop] or [nacc].
    const Message msg = cfg.rho.back().message;
    GlobalConfig base = cfg;
    base.rho.pop_back();

    const auto dst = index_of(msg.dst);
    std::vector<LocalStep> receptions;
    if (dst) {
      for (auto& s : local_steps(csas_[*dst], cfg.locals[*dst], msg)) {
        if (rule_class(s.rule) == RuleClass::R) receptions.push_back(std::move(s));
      }
    }

    if (receptions.empty()) {
      base.priority = dst.value_or(cfg.priority);
      out.push_back({GlobalRule::Nacc, std::move(base)});
      return out;
    }

    TraceItem rx;
    rx.kind = TraceItem::Kind::Reception;
    rx.car = msg.dst;
    rx.message = msg;
    if (delta < 1.0) {
      for (const auto& step : receptions) {
        GlobalConfig c = base;
        if (!c.record) c.rho.clear();
        c.rho.push_back(rx);
        c = apply(c, *dst, step, scenario);
        c.priority = *dst;
        c.prob *= 1.0 - delta;
        out.push_back({GlobalRule::Trans, std::move(c)});
      }
    }
    if (delta > 0.0) {
      base.priority = *dst;
      base.prob *= delta;
      out.push_back({GlobalRule::Drop, std::move(base)});
    }
    return out;
  }

  const std::size_t y = cfg.priority;
  auto steps = enabled(y, cfg, scenario, true, false);
  GlobalRule rule = GlobalRule::PrE;
  if (steps.empty()) {
    steps = enabled(y, cfg, scenario, false, true);
    rule = GlobalRule::PrT;
  }
  if (!steps.empty()) {
    for (const auto& s : steps) {
      GlobalConfig c = apply(cfg, y, s, scenario);
      c.priority = y;
      out.push_back({rule, std::move(c)});
    }
    return out;
  }

  // [npr]: the prioritized CSA is stuck, any other CSA may move.
  for (std::size_t x = 0; x < csas_.size(); ++x) {
    if (x == y) continue;
    for (const auto& s : enabled(x, cfg, scenario, true, true)) {
      GlobalConfig c = apply(cfg, x, s, scenario);
      c.priority = x;
      out.push_back({GlobalRule::Npr, std::move(c)});
    }
  }
  return out;
}

bool System::globally_final(const GlobalConfig& cfg) const {
  for (std::size_t i = 0; i < csas_.size(); ++i) {
    if (cfg.participated[i] && !csas_[i].csa().is_final(cfg.locals[i].state)) return false;
  }
  return true;
}

bool System::synchronized(const GlobalConfig& cfg, const Scenario& scenario) const {
  return cfg.projection.complete(scenario.sequence.size()) && globally_final(cfg) &&
         global_steps(0.5, cfg, scenario).empty();
}

}  // namespace protoforge
