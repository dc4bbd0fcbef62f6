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

#include <sstream>

#include <json.hpp>

#include "protoforge/csa.hpp"
#include "protoforge/error.hpp"

namespace protoforge {

namespace {

using json = nlohmann::ordered_json;

std::string escape_dot(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

json to_json(const std::optional<std::string>& d) { return d ? json(*d) : json(nullptr); }

json to_json(const LocalEvent& e) {
  json j;
  j["name"] = e.name;
  j["peer"] = e.peer.name;
  j["data"] = to_json(e.data);
  j["trigger"] = e.trigger == Trigger::Env ? "env" : "sys";
  j["special"] = e.special == Special::None ? "none" : e.special == Special::Fail ? "fail" : "success";
  return j;
}

json to_json(const Message& m) {
  json j;
  j["id"] = m.id;
  j["src"] = m.src.name;
  j["dst"] = m.dst.name;
  j["data"] = to_json(m.data);
  return j;
}

json to_json(const Condition& c) {
  json j;
  j["var"] = c.var;
  j["op"] = c.op == Condition::Op::Le ? "<=" : ">";
  j["bound"] = c.bound;
  return j;
}

json to_json(const TransitionLabel& l) {
  json j;
  j["kind"] = kind_name(kind_of(l));
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, label::Env> || std::is_same_v<T, label::TimeoutSys>) {
          j["event"] = to_json(v.event);
        } else if constexpr (std::is_same_v<T, label::SysCond>) {
          j["event"] = to_json(v.event);
          j["cond"] = to_json(v.cond);
        } else if constexpr (std::is_same_v<T, label::TimeoutUpd>) {
          j["var"] = v.var;
        } else if constexpr (std::is_same_v<T, label::BroadcastCond>) {
          j["message"] = to_json(v.message);
          j["cond"] = to_json(v.cond);
        } else if constexpr (std::is_same_v<T, label::RecvSys>) {
          j["message"] = to_json(v.message);
          j["event"] = to_json(v.event);
        } else {
          j["message"] = to_json(v.message);
          j["var"] = v.var;
        }
      },
      l);
  return j;
}

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::InvalidCsa, "invalid CSA JSON: " + what); }

std::optional<std::string> data_from(const json& j) {
  if (!j.contains("data") || j.at("data").is_null()) return std::nullopt;
  return j.at("data").get<std::string>();
}

LocalEvent event_from(const json& j) {
  LocalEvent e;
  e.name = j.at("name").get<std::string>();
  e.peer = CarId{j.at("peer").get<std::string>()};
  e.data = data_from(j);
  const auto trigger = j.at("trigger").get<std::string>();
  if (trigger == "env") e.trigger = Trigger::Env;
  else if (trigger == "sys") e.trigger = Trigger::Sys;
  else bad("unknown trigger '" + trigger + "'");
  const auto special = j.value("special", std::string("none"));
  if (special == "none") e.special = Special::None;
  else if (special == "fail") e.special = Special::Fail;
  else if (special == "success") e.special = Special::Success;
  else bad("unknown special '" + special + "'");
  return e;
}

Message message_from(const json& j) {
  return Message{j.at("id").get<std::string>(), CarId{j.at("src").get<std::string>()},
                 CarId{j.at("dst").get<std::string>()}, data_from(j)};
}

Condition cond_from(const json& j) {
  Condition c;
  c.var = j.at("var").get<std::string>();
  const auto op = j.at("op").get<std::string>();
  if (op == "<=") c.op = Condition::Op::Le;
  else if (op == ">") c.op = Condition::Op::Gt;
  else bad("unknown condition operator '" + op + "'");
  c.bound = j.at("bound").get<int>();
  if (c.bound < 0) bad("negative bound");
  return c;
}

TransitionLabel label_from(const json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "env") return label::Env{event_from(j.at("event"))};
  if (kind == "sys_cond") return label::SysCond{event_from(j.at("event")), cond_from(j.at("cond"))};
  if (kind == "timeout_sys") return label::TimeoutSys{event_from(j.at("event"))};
  if (kind == "timeout_upd") return label::TimeoutUpd{j.at("var").get<std::string>()};
  if (kind == "broadcast_cond") return label::BroadcastCond{message_from(j.at("message")), cond_from(j.at("cond"))};
  if (kind == "recv_sys") return label::RecvSys{message_from(j.at("message")), event_from(j.at("event"))};
  if (kind == "recv_upd") return label::RecvUpd{message_from(j.at("message")), j.at("var").get<std::string>()};
  bad("unknown label kind '" + kind + "'");
}

}  // namespace

std::string export_dot(const Csa& csa) {
  std::ostringstream out;
  out << "digraph \"" << escape_dot(csa.owner.name) << "\" {\n";
  out << "  node [shape=circle];\n";
  for (StateId s : csa.states) {
    out << "  s" << s << " [label=\"s" << s << "\"";
    if (s == csa.init) out << ", shape=doublecircle";
    if (csa.is_final(s)) out << ", style=dotted";
    out << "];\n";
  }
  for (const auto& [key, to] : csa.transitions) {
    out << "  s" << key.from << " -> s" << to << " [label=\"" << escape_dot(to_string(key.label, csa.owner))
        << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

std::string export_json(const Csa& csa) {
  json j;
  j["owner"] = csa.owner.name;
  j["states"] = json::array();
  for (StateId s : csa.states) j["states"].push_back(json{{"id", s}, {"final", csa.is_final(s)}});
  j["init"] = csa.init;
  j["vars"] = json::array();
  for (const auto& v : csa.vars) j["vars"].push_back(v);
  j["transitions"] = json::array();
  for (const auto& [key, to] : csa.transitions) {
    j["transitions"].push_back(json{{"from", key.from}, {"to", to}, {"label", to_json(key.label)}});
  }
  return j.dump(2) + "\n";
}

Csa import_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    Csa csa;
    csa.owner = CarId{j.at("owner").get<std::string>()};
    for (const auto& s : j.at("states")) {
      const StateId id = s.at("id").get<StateId>();
      if (!csa.states.insert(id).second) bad("duplicate state s" + std::to_string(id));
      if (s.value("final", false)) csa.finals.insert(id);
    }
    csa.init = j.at("init").get<StateId>();
    for (const auto& v : j.at("vars")) csa.vars.insert(v.get<std::string>());
    for (const auto& t : j.at("transitions")) {
      csa.add_transition(t.at("from").get<StateId>(), label_from(t.at("label")), t.at("to").get<StateId>());
    }
    return csa;
  } catch (const json::exception& e) {
    bad(e.what());
  }
}

}  // namespace protoforge
