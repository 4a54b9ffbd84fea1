// Copyright 2026 The rcds Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Exact optimal adaptive policy value on small instances by memoized
// expectimax over belief states, plus the partition inequality check built on
// it.
//
// A belief state is (chosen nodes still live, consistent scenarios). Nodes
// outside the live set are certainly inactive or certainly cut off from the
// root, so they never affect feasibility or cost and are dropped from the key.
// Values are kept unnormalized as sum over scenarios of k(psi) * weight, in
// units of 1/D where D is the common weight denominator, so the search is
// pure integer arithmetic.

#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rcds/bitset.hpp"
#include "rcds/error.hpp"
#include "rcds/graph.hpp"
#include "rcds/polymatroid.hpp"
#include "rcds/rational.hpp"
#include "rcds/scenario.hpp"

namespace rcds {

struct OracleLimits {
  int max_nodes = 12;
  int max_scenarios = 8;
  bool memoize = true;
};

struct OracleReport {
  Rational value = 0;
  std::int64_t states = 0;  // expectimax nodes evaluated
};

namespace detail {

class Expectimax {
 public:
  Expectimax(const Instance& inst, FeedbackModel model, bool memoize)
      : inst_(inst), g_(inst.graph()), model_(model), memoize_(memoize) {
    den_ = 1;
    for (const auto& w : g_.weights()) den_ = lcm_checked(den_, w.denominator());
    w_.reserve(static_cast<std::size_t>(g_.size()));
    for (const auto& w : g_.weights()) w_.push_back(w.numerator() * (den_ / w.denominator()));
  }

  OracleReport solve() {
    const ScenarioSet& s = inst_.scenarios();
    const NodeId r = g_.root();
    NodeSet u;
    u.insert(r);
    std::int64_t total = 0;
    if (model_ == FeedbackModel::Full) {
      total = chance(u, s.all(), g_.closed(r));
    } else {
      total = value(u, s.all());
    }
    OracleReport rep;
    rep.value = g_.weight(r) + Rational(total, s.denominator() * den_);
    rep.states = states_;
    return rep;
  }

 private:
  struct Key {
    NodeSet chosen;
    ScenarioMask mask;
    friend bool operator==(const Key&, const Key&) = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const { return k.chosen.hash() * 31 + k.mask.hash(); }
  };

  // Splits `mask` by the states of `revealed` and sums the children's values.
  std::int64_t chance(const NodeSet& chosen, const ScenarioMask& mask, const NodeSet& revealed) {
    const ScenarioSet& s = inst_.scenarios();
    std::vector<std::pair<NodeSet, ScenarioMask>> groups;
    mask.for_each([&](int i) {
      const NodeSet key = s[i].state.active & revealed;
      for (auto& [k, m] : groups) {
        if (k == key) {
          m.insert(i);
          return;
        }
      }
      ScenarioMask m;
      m.insert(i);
      groups.emplace_back(key, m);
    });
    std::int64_t total = 0;
    for (const auto& [_, m] : groups) total += value(chosen, m);
    return total;
  }

  std::int64_t value(const NodeSet& chosen_all, const ScenarioMask& mask) {
    ++states_;
    const ScenarioSet& s = inst_.scenarios();
    const NodeSet live = inst_.live_nodes(mask);
    const NodeSet chosen = chosen_all & live;
    // Live chosen nodes are exactly the active chosen ones.
    const NodeSet covered = dominated_set(g_, chosen);
    if (live.is_subset_of(covered)) return 0;
    const Key key{chosen, mask};
    if (memoize_) {
      if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    }
    const std::int64_t mass = s.mass(mask);
    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    ((covered & live) - chosen).for_each([&](int a) {
      const std::int64_t here = w_[static_cast<std::size_t>(a)] * mass;
      if (here >= best) return;
      NodeSet next = chosen;
      next.insert(a);
      std::int64_t sub = 0;
      if (model_ == FeedbackModel::Full) {
        // a is known active here; its whole closed neighborhood is revealed.
        sub = chance(next, mask, g_.closed(a));
      } else {
        sub = value(next, mask & inst_.active_in(a)) + value(next, mask - inst_.active_in(a));
      }
      best = std::min(best, here + sub);
    });
    if (best == std::numeric_limits<std::int64_t>::max()) {
      throw Error("expectimax found no feasible action in a non-terminal state");
    }
    if (memoize_) memo_.emplace(key, best);
    return best;
  }

  const Instance& inst_;
  const Graph& g_;
  FeedbackModel model_;
  bool memoize_;
  std::int64_t den_ = 1;
  std::vector<std::int64_t> w_;
  std::unordered_map<Key, std::int64_t, KeyHash> memo_;
  std::int64_t states_ = 0;
};

}  // namespace detail

inline void check_oracle_guard(const Instance& inst, const OracleLimits& limits) {
  if (inst.graph().size() > limits.max_nodes) {
    throw SizeGuardError("oracle refuses n = " + std::to_string(inst.graph().size()) +
                         " (limit " + std::to_string(limits.max_nodes) + " nodes)");
  }
  if (inst.scenarios().size() > limits.max_scenarios) {
    throw SizeGuardError("oracle refuses |Psi| = " + std::to_string(inst.scenarios().size()) +
                         " (limit " + std::to_string(limits.max_scenarios) + " scenarios)");
  }
}

// Minimum over adaptive policies of the expected chosen weight (root
// included). In the full model the candidate actions are the known-active
// nodes; in the local model, nodes dominated by an active chosen node.
inline OracleReport optimal_wavg_report(const Instance& inst, FeedbackModel model,
                                        const OracleLimits& limits = {}) {
  check_oracle_guard(inst, limits);
  return detail::Expectimax(inst, model, limits.memoize).solve();
}

inline Rational optimal_wavg(const Instance& inst, FeedbackModel model,
                             const OracleLimits& limits = {}) {
  return optimal_wavg_report(inst, model, limits).value;
}

struct PartitionCheck {
  Rational lhs = 0;  // sum_i p_i * opt(Psi_i)
  Rational rhs = 0;  // opt(Psi)
  bool holds = false;
};

// `parts` must partition the stored scenarios.
inline PartitionCheck check_partition_inequality(const Instance& inst, FeedbackModel model,
                                                 const std::vector<ScenarioMask>& parts,
                                                 const OracleLimits& limits = {}) {
  const ScenarioSet& s = inst.scenarios();
  ScenarioMask seen;
  for (const auto& p : parts) {
    if (p.empty()) throw PreconditionError("partition has an empty part");
    if (p.intersects(seen)) throw PreconditionError("partition parts overlap");
    seen |= p;
  }
  if (seen != s.all()) throw PreconditionError("partition does not cover every scenario");
  PartitionCheck out;
  out.rhs = optimal_wavg(inst, model, limits);
  for (const auto& p : parts) {
    const Instance sub(inst.graph(), s.conditioned_on(p, inst.graph().root()));
    out.lhs += Rational(s.mass(p), s.denominator()) * optimal_wavg(sub, model, limits);
  }
  out.holds = out.lhs <= out.rhs;
  return out;
}

}  // namespace rcds
