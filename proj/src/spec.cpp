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

#include "protoforge/spec.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>

#include "protoforge/error.hpp"

namespace protoforge {

namespace {

std::string format_probability(double p) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, p);
  return std::string(buf, end);
}

void collect_sequences(const ProtocolSpec& spec, std::vector<GlobalEvent>& prefix,
                       std::vector<PSequence>& out) {
  if (const auto* leaf = spec.as_leaf()) {
    PSequence s{prefix, leaf->p};
    s.events.push_back(leaf->event);
    if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(std::move(s));
  } else if (const auto* seq = spec.as_seq()) {
    prefix.push_back(seq->event);
    collect_sequences(seq->rest, prefix, out);
    prefix.pop_back();
  } else {
    const auto& disj = *spec.as_or();
    collect_sequences(disj.left, prefix, out);
    collect_sequences(disj.right, prefix, out);
  }
}

bool satisfies_from(const PSequence& s, std::size_t k, const ProtocolSpec& spec) {
  if (const auto* leaf = spec.as_leaf()) {
    return k + 1 == s.events.size() && s.events[k] == leaf->event && s.p >= leaf->p;
  }
  if (const auto* seq = spec.as_seq()) {
    return k + 1 < s.events.size() && s.events[k] == seq->event &&
           satisfies_from(s, k + 1, seq->rest);
  }
  const auto& disj = *spec.as_or();
  return satisfies_from(s, k, disj.left) || satisfies_from(s, k, disj.right);
}

// Every root-to-leaf path, as event lists.
void collect_paths(const ProtocolSpec& spec, std::vector<GlobalEvent>& prefix,
                   std::vector<std::vector<GlobalEvent>>& out) {
  if (const auto* leaf = spec.as_leaf()) {
    out.push_back(prefix);
    out.back().push_back(leaf->event);
  } else if (const auto* seq = spec.as_seq()) {
    prefix.push_back(seq->event);
    collect_paths(seq->rest, prefix, out);
    prefix.pop_back();
  } else {
    collect_paths(spec.as_or()->left, prefix, out);
    collect_paths(spec.as_or()->right, prefix, out);
  }
}

std::string path_name(const std::vector<GlobalEvent>& path) {
  std::string out;
  for (const auto& e : path) {
    if (!out.empty()) out += '.';
    out += e.name;
  }
  return out;
}

void visit_events(const ProtocolSpec& spec, const auto& fn) {
  if (const auto* leaf = spec.as_leaf()) {
    fn(leaf->event);
  } else if (const auto* seq = spec.as_seq()) {
    fn(seq->event);
    visit_events(seq->rest, fn);
  } else {
    visit_events(spec.as_or()->left, fn);
    visit_events(spec.as_or()->right, fn);
  }
}

std::string print_node(const ProtocolSpec& spec) {
  if (const auto* leaf = spec.as_leaf()) {
    return to_string(leaf->event) + " : " + format_probability(leaf->p);
  }
  if (const auto* seq = spec.as_seq()) {
    std::string rest = print_node(seq->rest);
    if (seq->rest.as_or()) rest = "(" + rest + ")";
    return to_string(seq->event) + " . " + rest;
  }
  const auto& disj = *spec.as_or();
  std::string left = print_node(disj.left);
  if (!disj.left.as_leaf()) left = "(" + left + ")";
  return left + " | " + print_node(disj.right);
}

}  // namespace

std::string to_string(const GlobalEvent& e) {
  std::string out = e.name + " " + e.src.name + "->" + e.dst.name;
  if (e.data) out += "(" + *e.data + ")";
  return out;
}

std::string to_string(const PSequence& s) {
  std::string out = "(";
  for (std::size_t i = 0; i < s.events.size(); ++i) {
    if (i) out += " . ";
    out += to_string(s.events[i]);
  }
  return out + ")^" + format_probability(s.p);
}

ProtocolSpec ProtocolSpec::leaf(GlobalEvent event, double p) {
  return ProtocolSpec(std::make_shared<const Node>(LeafNode{std::move(event), p}));
}

ProtocolSpec ProtocolSpec::seq(GlobalEvent event, ProtocolSpec rest) {
  return ProtocolSpec(std::make_shared<const Node>(SeqNode{std::move(event), std::move(rest)}));
}

ProtocolSpec ProtocolSpec::disj(ProtocolSpec left, ProtocolSpec right) {
  return ProtocolSpec(std::make_shared<const Node>(OrNode{std::move(left), std::move(right)}));
}

const LeafNode* ProtocolSpec::as_leaf() const { return std::get_if<LeafNode>(node_.get()); }
const SeqNode* ProtocolSpec::as_seq() const { return std::get_if<SeqNode>(node_.get()); }
const OrNode* ProtocolSpec::as_or() const { return std::get_if<OrNode>(node_.get()); }

bool operator==(const ProtocolSpec& a, const ProtocolSpec& b) {
  if (a.node_ == b.node_) return true;
  if (const auto* la = a.as_leaf()) {
    const auto* lb = b.as_leaf();
    return lb && la->event == lb->event && la->p == lb->p;
  }
  if (const auto* sa = a.as_seq()) {
    const auto* sb = b.as_seq();
    return sb && sa->event == sb->event && sa->rest == sb->rest;
  }
  const auto* ob = b.as_or();
  return ob && a.as_or()->left == ob->left && a.as_or()->right == ob->right;
}

std::string print_protocol(const ProtocolSpec& spec) { return print_node(spec); }

std::string print_spec(const FullSpec& spec) {
  std::string out = "delta " + format_probability(spec.delta) + ";\ncars";
  for (const auto& car : spec.cars) out += " " + car.name;
  out += ";\n" + print_node(spec.protocol) + "\n";
  return out;
}

std::vector<PSequence> enumerate_sequences(const ProtocolSpec& spec) {
  std::vector<PSequence> out;
  std::vector<GlobalEvent> prefix;
  collect_sequences(spec, prefix, out);
  return out;
}

bool satisfies(const PSequence& pseq, const ProtocolSpec& spec) {
  if (pseq.events.empty()) return false;
  return satisfies_from(pseq, 0, spec);
}

std::vector<GlobalEvent> event_order(const ProtocolSpec& spec) {
  std::vector<GlobalEvent> out;
  std::set<std::string> seen;
  visit_events(spec, [&](const GlobalEvent& e) {
    if (seen.insert(e.name).second) out.push_back(e);
  });
  return out;
}

std::vector<CarId> cars_of(const ProtocolSpec& spec) {
  std::set<CarId> cars;
  visit_events(spec, [&](const GlobalEvent& e) {
    cars.insert(e.src);
    cars.insert(e.dst);
  });
  return {cars.begin(), cars.end()};
}

std::size_t leaf_count(const ProtocolSpec& spec) {
  if (spec.as_leaf()) return 1;
  if (const auto* seq = spec.as_seq()) return leaf_count(seq->rest);
  return leaf_count(spec.as_or()->left) + leaf_count(spec.as_or()->right);
}

std::string WellPosednessReport::describe() const {
  if (ok()) return "well-posed";
  std::string out;
  for (const auto& v : violations) {
    if (!out.empty()) out += '\n';
    out += "path " + v.path + ": " + v.message;
  }
  return out;
}

WellPosednessReport well_posed(const ProtocolSpec& spec) {
  std::vector<std::vector<GlobalEvent>> paths;
  std::vector<GlobalEvent> prefix;
  collect_paths(spec, prefix, paths);

  WellPosednessReport report;
  std::set<std::string> reported;
  auto add = [&](WellPosednessViolation::Kind kind, std::string path, std::string message) {
    if (reported.insert(path + "\n" + message).second) {
      report.violations.push_back({kind, std::move(path), std::move(message)});
    }
  };

  for (const auto& path : paths) {
    const std::string name = path_name(path);
    if (path.size() < 2) {
      add(WellPosednessViolation::Kind::PathTooShort, name,
          "path length " + std::to_string(path.size()) +
              " < 2 (there must be at least two events on each path)");
    }
    for (std::size_t k = 0; k + 1 < path.size(); ++k) {
      const auto& cur = path[k];
      const auto& next = path[k + 1];
      if (next.src == cur.dst && next.dst == cur.src) continue;
      std::string detail;
      if (next.src == cur.src) {
        detail = cur.src.name + " triggers twice (" + cur.name + ", " + next.name + ")";
      } else {
        detail = next.name + " " + next.src.name + "->" + next.dst.name + " does not answer " +
                 cur.name + " " + cur.src.name + "->" + cur.dst.name;
      }
      add(WellPosednessViolation::Kind::TurnTaking, name,
          "turn-taking: " + detail + " (two ASCs must take turns in triggering the events)");
    }
  }
  return report;
}

void check_event_identity(const ProtocolSpec& spec) {
  std::map<std::string, GlobalEvent> by_name;
  visit_events(spec, [&](const GlobalEvent& e) {
    auto [it, inserted] = by_name.emplace(e.name, e);
    if (!inserted && !(it->second == e)) {
      throw Error(ErrorCode::InconsistentEvent,
                  "event '" + e.name + "' is used as both " + to_string(it->second) + " and " +
                      to_string(e));
    }
  });

  std::vector<std::vector<GlobalEvent>> paths;
  std::vector<GlobalEvent> prefix;
  collect_paths(spec, prefix, paths);
  for (const auto& path : paths) {
    std::set<std::string> names;
    for (const auto& e : path) {
      if (!names.insert(e.name).second) {
        throw Error(ErrorCode::DuplicateEventOnPath,
                    "event '" + e.name + "' occurs twice on path " + path_name(path));
      }
    }
  }
}

}  // namespace protoforge
