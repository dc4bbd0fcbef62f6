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

#include "protoforge/synthesis.hpp"

#include <map>
#include <utility>

#include "protoforge/error.hpp"

namespace protoforge {

std::string message_id(const std::string& event) { return "m_" + event; }
std::string counter_name(const std::string& event) { return "nu_" + event; }
std::string fail_name(const std::string& event) { return "fail_" + event; }
std::string success_name(const std::string& event) { return "success_" + event; }

namespace {

// Last message stored per direction (src, dst).
using MessageStore = std::map<std::pair<std::string, std::string>, Message>;

struct Partial {
  Csa csa;
  int next;
};

class Synthesizer {
 public:
  Synthesizer(const CarId& car, const BoundsVector& bounds) : car_(car), bounds_(bounds) {}

  Partial run(const ProtocolSpec& phi, int i, MessageStore store) const {
    if (const auto* node = phi.as_or()) return disjunction(*node, i, store);
    if (const auto* node = phi.as_seq()) return sequence(*node, i, std::move(store));
    return leaf(*phi.as_leaf(), i, store);
  }

 private:
  static Message message_of(const GlobalEvent& e) { return Message{message_id(e.name), e.src, e.dst, e.data}; }

  static LocalEvent local(const GlobalEvent& e, const CarId& peer, Trigger trigger) {
    return LocalEvent{e.name, peer, e.data, trigger, Special::None};
  }

  static LocalEvent special(std::string name, const CarId& peer, Special kind) {
    return LocalEvent{std::move(name), peer, std::nullopt, Trigger::Sys, kind};
  }

  int bound(const GlobalEvent& e) const {
    auto it = bounds_.find(e.name);
    if (it == bounds_.end()) throw Error(ErrorCode::MissingBound, "no retransmission bound for event '" + e.name + "'");
    if (it->second < 0) throw Error(ErrorCode::InvalidParams, "negative bound for event '" + e.name + "'");
    return it->second;
  }

  Csa empty() const {
    Csa m;
    m.owner = car_;
    return m;
  }

  Partial disjunction(const OrNode& node, int i, const MessageStore& store) const {
    Partial left = run(node.left, i, store);
    Partial right = run(node.right, left.next, store);
    Csa& m = left.csa;
    const StateId keep = m.init;
    const StateId gone = right.csa.init;
    auto sub = [&](StateId s) { return s == gone ? keep : s; };
    for (StateId s : right.csa.states) m.states.insert(sub(s));
    for (StateId s : right.csa.finals) m.finals.insert(sub(s));
    m.vars.insert(right.csa.vars.begin(), right.csa.vars.end());
    for (const auto& [key, to] : right.csa.transitions) m.add_transition(sub(key.from), key.label, sub(to));
    return Partial{std::move(m), right.next};
  }

  Partial sequence(const SeqNode& node, int i, MessageStore store) const {
    const GlobalEvent& e = node.event;
    store.insert_or_assign({e.src.name, e.dst.name}, message_of(e));

    if (car_ == e.src) {
      Partial rest = run(node.rest, i + 3, std::move(store));
      Csa& m = rest.csa;
      const std::string nu = counter_name(e.name);
      const int n = bound(e);
      const StateId sub_init = m.init;
      m.states.insert({i, i + 1, i + 2});
      m.vars.insert(nu);
      m.add_transition(i, label::Env{local(e, e.dst, Trigger::Env)}, i + 1);
      m.add_transition(i + 1, label::BroadcastCond{message_of(e), Condition{nu, Condition::Op::Le, n}}, sub_init);
      m.add_transition(i + 1,
                       label::SysCond{special(fail_name(e.name), e.dst, Special::Fail),
                                      Condition{nu, Condition::Op::Gt, n}},
                       i + 2);
      m.add_transition(sub_init, label::TimeoutUpd{nu}, i + 1);
      m.init = i;
      return rest;
    }
    if (car_ == e.dst) {
      Partial rest = run(node.rest, i + 1, std::move(store));
      Csa& m = rest.csa;
      const StateId sub_init = m.init;
      m.states.insert(i);
      Message rx = message_of(e);
      m.add_transition(i, label::RecvSys{rx, local(e, e.src, Trigger::Sys)}, sub_init);
      m.init = i;
      return rest;
    }
    return run(node.rest, i, std::move(store));
  }

  Partial leaf(const LeafNode& node, int i, const MessageStore& store) const {
    const GlobalEvent& e = node.event;
    Csa m = empty();
    if (car_ == e.src) {
      auto it = store.find({e.dst.name, e.src.name});
      if (it == store.end()) {
        throw Error(ErrorCode::Internal,
                    "no earlier message from " + e.dst.name + " to " + e.src.name + " to trigger retransmissions of '" +
                        e.name + "'");
      }
      const std::string nu = counter_name(e.name);
      const int n = bound(e);
      m.states = {i, i + 1, i + 2, i + 3, i + 4};
      m.vars = {nu};
      m.init = i;
      m.finals = {i + 4};
      m.add_transition(i, label::Env{local(e, e.dst, Trigger::Env)}, i + 1);
      m.add_transition(i + 1, label::BroadcastCond{message_of(e), Condition{nu, Condition::Op::Le, n}}, i + 2);
      m.add_transition(i + 1,
                       label::SysCond{special(fail_name(e.name), e.dst, Special::Fail),
                                      Condition{nu, Condition::Op::Gt, n}},
                       i + 3);
      m.add_transition(i + 2, label::RecvUpd{it->second, nu}, i + 1);
      m.add_transition(i + 2, label::TimeoutSys{special(success_name(e.name), e.dst, Special::Success)}, i + 4);
      return Partial{std::move(m), i + 5};
    }
    if (car_ == e.dst) {
      m.states = {i, i + 1};
      m.init = i;
      m.finals = {i + 1};
      m.add_transition(i, label::RecvSys{message_of(e), local(e, e.src, Trigger::Sys)}, i + 1);
      return Partial{std::move(m), i + 2};
    }
    m.states = {i};
    m.init = i;
    m.finals = {i};
    return Partial{std::move(m), i + 1};
  }

  CarId car_;
  const BoundsVector& bounds_;
};

}  // namespace

Csa synthesize_for_car(const ProtocolSpec& spec, const CarId& car, const BoundsVector& bounds) {
  const auto report = well_posed(spec);
  if (!report.ok()) throw Error(ErrorCode::NotWellPosed, report.describe());
  return Synthesizer(car, bounds).run(spec, 0, {}).csa;
}

Synthesis synthesize_all(const FullSpec& spec, int cap) {
  const auto report = well_posed(spec.protocol);
  if (!report.ok()) throw Error(ErrorCode::NotWellPosed, report.describe());
  const auto opt = solve_opt(spec.protocol, spec.delta, cap);
  if (opt.status != OptStatus::Optimal) throw Error(ErrorCode::Unrealizable, opt.reason);
  Synthesis out;
  out.bounds = opt.bounds;
  for (const auto& car : spec.cars) out.csas.push_back(synthesize_for_car(spec.protocol, car, out.bounds));
  return out;
}

}  // namespace protoforge
