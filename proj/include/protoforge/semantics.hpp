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

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "protoforge/csa.hpp"
#include "protoforge/spec.hpp"

namespace protoforge {

// ---------------------------------------------------------------------------
// Local semantics

enum class LocalRule { Env, SysC, ToSys, ToUpd, BC, RSys, RUpd };

// The superscripts e/t/r used by the global rules.
enum class RuleClass { E, T, R };

RuleClass rule_class(LocalRule rule);
const char* rule_name(LocalRule rule);

/// Counter values, indexed in the (sorted) order of Csa::vars.
using Valuation = std::vector<int>;

struct LocalConfig {
  StateId state = 0;
  Valuation valuation;

  bool operator==(const LocalConfig&) const = default;
};

/// One element of a deduced label sequence ρ.
struct TraceItem {
  enum class Kind { Env, Sys, Timeout, Broadcast, Reception };

  Kind kind = Kind::Env;
  CarId car;          // CSA that produced the item
  LocalEvent event;   // Env / Sys
  Message message;    // Broadcast / Reception

  bool operator==(const TraceItem&) const = default;
};

std::string to_string(const TraceItem& item);

struct LocalStep {
  LocalRule rule;
  std::vector<TraceItem> emitted;  // appended to ρ by this step
  LocalConfig next;
};

/// A CSA with per-state outgoing transitions and resolved counter slots.
class CompiledCsa {
 public:
  struct Out {
    const TransitionLabel* label;
    StateId to;
    int var;  // counter slot read or updated by the label, -1 if none
  };

  explicit CompiledCsa(Csa csa);

  CompiledCsa(const CompiledCsa&) = delete;
  CompiledCsa& operator=(const CompiledCsa&) = delete;
  CompiledCsa(CompiledCsa&&) = default;

  const Csa& csa() const { return csa_; }
  std::span<const Out> outgoing(StateId s) const;
  LocalConfig initial() const;

 private:
  Csa csa_;
  std::vector<StateId> index_;           // sorted states
  std::vector<std::vector<Out>> out_;    // parallel to index_
};

/// Every local successor of `cfg`. [r-sys]/[r-upd] only
/// fire for the given incoming reception.
std::vector<LocalStep> local_steps(const CompiledCsa& csa, const LocalConfig& cfg,
                                   const std::optional<Message>& reception = std::nullopt);

// ---------------------------------------------------------------------------
// Projection ⌊ρ⌋

struct ProjectedItem {
  bool synchronized = false;  // false: an environment-triggered event still waiting
  GlobalEvent event;

  bool operator==(const ProjectedItem&) const = default;
};

/// Appends env events, fuses a trailing env event with its matching sys
/// event, and drops everything else. A sys event that does not match the
/// trailing env event seals it, so it can no longer be fused.
std::vector<ProjectedItem> project(std::span<const TraceItem> rho);

/// Incremental projection compared against a target σ.
struct ProjectionState {
  std::size_t matched = 0;  // global events of σ already produced
  bool pending = false;     // env side of σ[matched] emitted, not yet fused
  bool sealed = false;
  bool dead = false;        // ⌊ρ⌋ can no longer equal σ

  bool operator==(const ProjectionState&) const = default;

  void append(const TraceItem& item, std::span<const GlobalEvent> sigma);
  bool complete(std::size_t sigma_size) const { return !dead && !pending && matched == sigma_size; }
};

// ---------------------------------------------------------------------------
// Global semantics

enum class GlobalRule { Trans, Drop, Nacc, PrE, PrT, Npr };

const char* rule_name(GlobalRule rule);

/// The ASC calls needed to generate σ: car x calls the env side of every
/// event of σ whose source is x, in order.
struct Scenario {
  std::vector<GlobalEvent> sequence;
};

struct GlobalConfig {
  std::vector<TraceItem> rho;  // whole ρ, or only its last item when !record
  bool record = true;
  std::vector<LocalConfig> locals;
  std::size_t priority = 0;
  double prob = 1.0;
  std::vector<std::size_t> calls_made;
  std::vector<bool> participated;
  ProjectionState projection;
};

struct GlobalSuccessor {
  GlobalRule rule;
  GlobalConfig config;
};

/// The CSAs 𝓜 executed together.
class System {
 public:
  explicit System(std::vector<Csa> csas);

  std::size_t size() const { return csas_.size(); }
  const CompiledCsa& at(std::size_t i) const { return csas_[i]; }
  std::optional<std::size_t> index_of(const CarId& car) const;

  /// All CSAs in their initial states with ρ = •, p = 1, and the source of
  /// σ's first event prioritized.
  GlobalConfig initial(const Scenario& scenario, bool record = true) const;

  /// One application of any global rule. Zero-probability branches are pruned.
  std::vector<GlobalSuccessor> global_steps(double delta, const GlobalConfig& cfg,
                                            const Scenario& scenario) const;

  /// Every CSA that took at least one transition rests in a final state.
  bool globally_final(const GlobalConfig& cfg) const;

  /// Terminal, globally final and ⌊ρ⌋ = σ.
  bool synchronized(const GlobalConfig& cfg, const Scenario& scenario) const;

 private:
  std::vector<LocalStep> enabled(std::size_t idx, const GlobalConfig& cfg, const Scenario& scenario,
                                 bool e_class, bool t_class) const;
  GlobalConfig apply(const GlobalConfig& cfg, std::size_t idx, const LocalStep& step,
                     const Scenario& scenario) const;

  std::vector<CompiledCsa> csas_;
};

// ---------------------------------------------------------------------------
// Exact evaluation

inline constexpr std::size_t kDefaultBudget = 10'000'000;

/// PROTOFORGE_BUDGET if set and valid, otherwise kDefaultBudget.
std::size_t budget_from_env();

struct SyncProbReport {
  double probability = 0.0;    // r(σ, δ, 𝓜)
  double absorbed = 0.0;       // total mass reaching terminal configurations
  std::size_t configurations = 0;
};

/// Sums the probabilities of all deductions that end terminal, globally final
/// and with ⌊ρ⌋ = σ. Throws Error(DivergenceDetected) when the configuration
/// graph has a cycle or outgrows `budget`.
SyncProbReport explore_sync_prob(const System& system, double delta,
                                 std::span<const GlobalEvent> sigma,
                                 std::size_t budget = kDefaultBudget);

double compute_sync_prob(const System& system, double delta, std::span<const GlobalEvent> sigma,
                         std::size_t budget = kDefaultBudget);

struct SequenceVerdict {
  PSequence required;
  double achieved = 0.0;
  double margin = 0.0;  // achieved - required.p
  bool ok = false;
};

struct CorrectnessReport {
  bool verdict = true;
  std::vector<SequenceVerdict> sequences;
};

CorrectnessReport check_correctness(const System& system, double delta, const ProtocolSpec& spec,
                                    std::size_t budget = kDefaultBudget);

}  // namespace protoforge
