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
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace protoforge {

struct CarId {
  std::string name;

  auto operator<=>(const CarId&) const = default;
};

// ε_{src→dst}(data). An absent data term stands for ⊥.
struct GlobalEvent {
  std::string name;
  CarId src;
  CarId dst;
  std::optional<std::string> data;

  auto operator<=>(const GlobalEvent&) const = default;
};

std::string to_string(const GlobalEvent& e);

struct LeafNode;
struct SeqNode;
struct OrNode;

/// Protocol specification tree: `e^p | e -> next(phi) | phi or phi`.
///
/// Nodes are immutable and shared, so copies are cheap and the type is safe
/// to hand across threads.
class ProtocolSpec {
 public:
  using Node = std::variant<LeafNode, SeqNode, OrNode>;

  static ProtocolSpec leaf(GlobalEvent event, double p);
  static ProtocolSpec seq(GlobalEvent event, ProtocolSpec rest);
  static ProtocolSpec disj(ProtocolSpec left, ProtocolSpec right);

  const Node& node() const;

  const LeafNode* as_leaf() const;
  const SeqNode* as_seq() const;
  const OrNode* as_or() const;

  friend bool operator==(const ProtocolSpec& a, const ProtocolSpec& b);

 private:
  explicit ProtocolSpec(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

struct LeafNode {
  GlobalEvent event;
  double p;
};

struct SeqNode {
  GlobalEvent event;
  ProtocolSpec rest;
};

struct OrNode {
  ProtocolSpec left;
  ProtocolSpec right;
};

inline const ProtocolSpec::Node& ProtocolSpec::node() const { return *node_; }

/// A sequence of global events tagged with a probability, written (σ)^p.
struct PSequence {
  std::vector<GlobalEvent> events;
  double p = 0.0;

  bool operator==(const PSequence&) const = default;
};

std::string to_string(const PSequence& s);

/// Protocol plus the environment assumption that the drop probability never
/// exceeds `delta`.
struct FullSpec {
  ProtocolSpec protocol;
  double delta = 0.0;
  std::vector<CarId> cars;
};

// Parses the `.psl` text format. Throws ParseError.
FullSpec parse_spec(std::string_view text);

// Canonical text; parse_spec(print_spec(s)) reproduces s.
std::string print_spec(const FullSpec& spec);
std::string print_protocol(const ProtocolSpec& spec);

/// One p-sequence per leaf, in depth-first leaf order, exact duplicates removed.
std::vector<PSequence> enumerate_sequences(const ProtocolSpec& spec);

bool satisfies(const PSequence& pseq, const ProtocolSpec& spec);

/// Distinct global events in depth-first preorder of the tree.
std::vector<GlobalEvent> event_order(const ProtocolSpec& spec);

/// Cars mentioned by any event, sorted.
std::vector<CarId> cars_of(const ProtocolSpec& spec);

std::size_t leaf_count(const ProtocolSpec& spec);

struct WellPosednessViolation {
  enum class Kind { PathTooShort, TurnTaking };

  Kind kind;
  std::string path;  // event names joined by '.'
  std::string message;
};

struct WellPosednessReport {
  std::vector<WellPosednessViolation> violations;

  bool ok() const { return violations.empty(); }
  std::string describe() const;
};

WellPosednessReport well_posed(const ProtocolSpec& spec);

/// Throws Error(DuplicateEventOnPath) or Error(InconsistentEvent) when the
/// tree breaks the one-message-per-event rule. parse_spec runs this already.
void check_event_identity(const ProtocolSpec& spec);

}  // namespace protoforge
