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

#include "protoforge/qos.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "protoforge/error.hpp"

namespace protoforge {

double sync_prob_two(int n1, int n2, double delta) {
  if (n1 < 0 || n2 < 0) throw Error(ErrorCode::InvalidParams, "retransmission bounds must be nonnegative");
  const double rho = 1.0 - delta;
  const double dr = delta * rho;
  double sum = 0.0;
  for (int i = 1; i <= n1; ++i) {
    const int m = std::min(n1 + 1 - i, n2);
    sum += std::pow(delta, i) * (1.0 - std::pow(dr, m));
  }
  return rho * (1.0 - std::pow(delta, n1 + 1)) + rho * rho * rho / (1.0 - dr) * sum;
}

double sync_prob(std::span<const int> bounds, double delta) {
  const std::size_t l = bounds.size();
  if (l < 2) {
    throw Error(ErrorCode::SequenceTooShort, "a sequence needs at least two retransmission bounds");
  }
  for (int n : bounds) {
    if (n < 0) throw Error(ErrorCode::InvalidParams, "retransmission bounds must be nonnegative");
  }
  if (l == 2) return sync_prob_two(bounds[0], bounds[1], delta);

  const double rho = 1.0 - delta;
  // f[b]: probability that events k..l-1 synchronize when b retries of
  // event k-1 remain available to repeat the trigger of event k.
  std::vector<double> f(static_cast<std::size_t>(bounds[l - 2]) + 1);
  {
    const int n = bounds[l - 1];
    double acc = 0.0, term = 1.0;
    for (int b = 0; b < static_cast<int>(f.size()); ++b) {
      if (b <= n) {
        acc += term;
        term *= delta * rho;
      }
      f[b] = rho * acc;
    }
  }
  for (std::size_t k = l - 2; k >= 1; --k) {
    const int n = bounds[k];
    std::vector<double> g(static_cast<std::size_t>(bounds[k - 1]) + 1);
    for (int b = 0; b < static_cast<int>(g.size()); ++b) {
      double acc = 0.0, dt = 1.0;
      for (int t = 0; t <= std::min(b, n); ++t) {
        acc += dt * f[n - t];
        dt *= delta;
      }
      g[b] = rho * acc;
    }
    f = std::move(g);
  }
  double acc = 0.0, di = 1.0;
  for (int i = 0; i <= bounds[0]; ++i) {
    acc += di * f[bounds[0] - i];
    di *= delta;
  }
  return rho * acc;
}

double sup_sync_prob_two(double delta) {
  const double rho = 1.0 - delta;
  return rho / (1.0 - delta * rho);
}

const char* to_string(OptStatus status) {
  switch (status) {
    case OptStatus::Optimal: return "optimal";
    case OptStatus::Infeasible: return "infeasible";
    case OptStatus::InfeasibleWithinCap: return "infeasible-within-cap";
  }
  return "?";
}

std::vector<int> bounds_along(const BoundsVector& bounds, std::span<const GlobalEvent> sequence) {
  std::vector<int> out;
  out.reserve(sequence.size());
  for (const auto& e : sequence) {
    auto it = bounds.find(e.name);
    if (it == bounds.end()) throw Error(ErrorCode::MissingBound, "no retransmission bound for event '" + e.name + "'");
    out.push_back(it->second);
  }
  return out;
}

namespace {

struct Constraint {
  std::vector<std::size_t> vars;  // variable index per position
  double p;
  std::size_t last = 0;           // largest variable index used
};

class Solver {
 public:
  Solver(std::vector<Constraint> constraints, std::size_t nvars, double delta, int cap)
      : cons_(std::move(constraints)), nvars_(nvars), delta_(delta), cap_(cap), value_(nvars, 0) {}

  bool satisfied(const Constraint& c, const std::vector<int>& v) const {
    std::vector<int> b;
    b.reserve(c.vars.size());
    for (auto j : c.vars) b.push_back(v[j]);
    return sync_prob(b, delta_) >= c.p;
  }

  bool all_satisfied(const std::vector<int>& v) const {
    return std::all_of(cons_.begin(), cons_.end(), [&](const Constraint& c) { return satisfied(c, v); });
  }

  // Smallest value of variable j with every other variable at cap.
  int lower_bound(std::size_t j) const {
    std::vector<int> v(nvars_, cap_);
    int lo = 0, hi = cap_;
    while (lo < hi) {
      const int mid = lo + (hi - lo) / 2;
      v[j] = mid;
      bool ok = true;
      for (const auto& c : cons_) {
        if (std::find(c.vars.begin(), c.vars.end(), j) != c.vars.end() && !satisfied(c, v)) {
          ok = false;
          break;
        }
      }
      if (ok) hi = mid; else lo = mid + 1;
    }
    return lo;
  }

  std::vector<int> solve() {
    lb_.resize(nvars_);
    for (std::size_t j = 0; j < nvars_; ++j) lb_[j] = lower_bound(j);
    suffix_lb_.assign(nvars_ + 1, 0);
    for (std::size_t j = nvars_; j-- > 0;) suffix_lb_[j] = suffix_lb_[j + 1] + lb_[j];
    const long long max_sum = static_cast<long long>(cap_) * static_cast<long long>(nvars_);
    for (long long total = suffix_lb_[0]; total <= max_sum; ++total) {
      if (assign(0, total)) return value_;
    }
    return {};
  }

 private:
  bool assign(std::size_t j, long long remaining) {
    if (j == nvars_) return remaining == 0;
    const long long hi = std::min<long long>(cap_, remaining - suffix_lb_[j + 1]);
    for (long long x = lb_[j]; x <= hi; ++x) {
      value_[j] = static_cast<int>(x);
      if (!promising(j, remaining - x)) continue;
      if (assign(j + 1, remaining - x)) return true;
    }
    return false;
  }

  // Checks every constraint with unassigned variables raised to the most the
  // remaining budget allows.
  bool promising(std::size_t j, long long remaining) const {
    std::vector<int> v = value_;
    const int top = static_cast<int>(std::min<long long>(cap_, remaining));
    for (std::size_t k = j + 1; k < nvars_; ++k) v[k] = std::max(top, lb_[k]);
    for (const auto& c : cons_) {
      if (std::find(c.vars.begin(), c.vars.end(), j) == c.vars.end() && c.last > j) continue;
      if (!satisfied(c, v)) return false;
    }
    return true;
  }

  std::vector<Constraint> cons_;
  std::size_t nvars_;
  double delta_;
  int cap_;
  std::vector<int> value_;
  std::vector<int> lb_;
  std::vector<long long> suffix_lb_;
};

}  // namespace

OptResult solve_opt(const ProtocolSpec& spec, double delta, int cap) {
  if (!(delta >= 0.0 && delta <= 1.0)) throw Error(ErrorCode::InvalidParams, "drop probability must lie in [0,1]");
  if (cap < 0) throw Error(ErrorCode::InvalidParams, "cap must be nonnegative");
  const auto report = well_posed(spec);
  if (!report.ok()) throw Error(ErrorCode::NotWellPosed, report.describe());

  const auto events = event_order(spec);
  auto index = [&](const std::string& name) {
    for (std::size_t j = 0; j < events.size(); ++j) {
      if (events[j].name == name) return j;
    }
    throw Error(ErrorCode::Internal, "event '" + name + "' missing from the event order");
  };

  const double sup = sup_sync_prob_two(delta);
  std::vector<Constraint> constraints;
  for (const auto& seq : enumerate_sequences(spec)) {
    if (seq.p > sup || (delta > 0.0 && delta < 1.0 && seq.p >= sup)) {
      OptResult r;
      r.status = OptStatus::Infeasible;
      r.reason = "sequence " + to_string(seq) + " requires " + std::to_string(seq.p) +
                 " but no bounds exceed the supremum " + std::to_string(sup);
      return r;
    }
    Constraint c{{}, seq.p, 0};
    for (const auto& e : seq.events) {
      c.vars.push_back(index(e.name));
      c.last = std::max(c.last, c.vars.back());
    }
    constraints.push_back(std::move(c));
  }

  Solver solver(constraints, events.size(), delta, cap);
  if (!solver.all_satisfied(std::vector<int>(events.size(), cap))) {
    OptResult r;
    r.status = OptStatus::InfeasibleWithinCap;
    r.reason = "no bounds up to the cap " + std::to_string(cap) + " satisfy every sequence";
    return r;
  }
  const auto best = solver.solve();
  OptResult r;
  r.status = OptStatus::Optimal;
  for (std::size_t j = 0; j < events.size(); ++j) r.bounds[events[j].name] = best[j];
  return r;
}

bool realizable(const FullSpec& spec, int cap) {
  if (!well_posed(spec.protocol).ok()) return false;
  return solve_opt(spec.protocol, spec.delta, cap).status == OptStatus::Optimal;
}

}  // namespace protoforge
