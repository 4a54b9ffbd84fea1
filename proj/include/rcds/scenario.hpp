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

// Probability model over node states: full realizations with exact rational
// probabilities k/M, partial observations, and conditioning.

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "rcds/bitset.hpp"
#include "rcds/error.hpp"
#include "rcds/graph.hpp"
#include "rcds/rational.hpp"

namespace rcds {

enum class Obs : std::uint8_t { Inactive, Active, Unknown };

// Complete active/inactive assignment; `active` is A_psi.
struct FullRealization {
  NodeSet active;
  bool state(NodeId v) const { return active.contains(v); }
  friend bool operator==(const FullRealization&, const FullRealization&) = default;
};

// Partial observation vector over V.
class Realization {
 public:
  Realization() = default;
  explicit Realization(int n) : n_(n) {}

  // Only the root observed (active).
  static Realization initial(const Graph& g) {
    Realization phi(g.size());
    phi.set(g.root(), true);
    return phi;
  }

  int size() const { return n_; }
  Obs at(NodeId v) const {
    if (!known_.contains(v)) return Obs::Unknown;
    return active_.contains(v) ? Obs::Active : Obs::Inactive;
  }
  void set(NodeId v, bool active) {
    known_.insert(v);
    if (active) {
      active_.insert(v);
    } else {
      active_.erase(v);
    }
  }
  void set(NodeId v, Obs o) {
    if (o == Obs::Unknown) {
      known_.erase(v);
      active_.erase(v);
    } else {
      set(v, o == Obs::Active);
    }
  }

  // supp(phi)
  const NodeSet& support() const { return known_; }
  const NodeSet& observed_active() const { return active_; }
  NodeSet observed_inactive() const { return known_ - active_; }

  friend bool operator==(const Realization&, const Realization&) = default;

 private:
  int n_ = 0;
  NodeSet known_;
  NodeSet active_;
};

// psi agrees with phi on supp(phi).
inline bool extends(const FullRealization& psi, const Realization& phi) {
  return (psi.active & phi.support()) == phi.observed_active();
}

// Realization-to-realization refinement: `finer` agrees with `coarser` on
// supp(coarser).
inline bool extends(const Realization& finer, const Realization& coarser) {
  if (!coarser.support().is_subset_of(finer.support())) return false;
  return (finer.observed_active() & coarser.support()) == coarser.observed_active();
}

struct Scenario {
  FullRealization state;
  std::int64_t k = 0;  // probability numerator over the set's M
};

// The finite support Psi with probabilities k/M, M minimal.
class ScenarioSet {
 public:
  ScenarioSet() = default;

  // Duplicates are merged; zero or negative numerators are rejected; the
  // common denominator is reduced to its minimal value.
  ScenarioSet(int n, NodeId root, std::vector<std::pair<NodeSet, std::int64_t>> entries,
              std::int64_t denominator)
      : n_(n) {
    if (denominator <= 0) throw PreconditionError("scenario denominator must be positive");
    if (entries.empty()) throw PreconditionError("scenario set is empty");
    std::map<std::vector<int>, std::size_t> index;
    for (auto& [active, k] : entries) {
      if (k <= 0) throw PreconditionError("scenario probabilities must be positive");
      if (!active.is_subset_of(NodeSet::range(n))) {
        throw InvalidNodeError("scenario mentions a node outside the graph");
      }
      if (!active.contains(root)) throw PreconditionError("the root must be active in every scenario");
      auto key = active.members();
      if (auto it = index.find(key); it != index.end()) {
        scenarios_[it->second].k += k;
      } else {
        index.emplace(std::move(key), scenarios_.size());
        scenarios_.push_back({FullRealization{active}, k});
      }
    }
    if (scenarios_.size() > kMaxScenarios) {
      throw PreconditionError("at most " + std::to_string(kMaxScenarios) + " distinct scenarios supported");
    }
    std::int64_t total = 0;
    std::int64_t g = denominator;
    for (const auto& s : scenarios_) {
      total += s.k;
      g = std::gcd(g, s.k);
    }
    if (total != denominator) {
      throw PreconditionError("scenario probabilities sum to " + std::to_string(total) + "/" +
                              std::to_string(denominator) + ", not 1");
    }
    for (auto& s : scenarios_) s.k /= g;
    m_ = denominator / g;
  }

  static ScenarioSet from_probabilities(int n, NodeId root,
                                        const std::vector<std::pair<NodeSet, Rational>>& probs) {
    std::int64_t den = 1;
    for (const auto& [_, p] : probs) den = lcm_checked(den, p.denominator());
    std::vector<std::pair<NodeSet, std::int64_t>> entries;
    for (const auto& [s, p] : probs) entries.emplace_back(s, p.numerator() * (den / p.denominator()));
    return ScenarioSet(n, root, std::move(entries), den);
  }

  int node_count() const { return n_; }
  int size() const { return static_cast<int>(scenarios_.size()); }
  const Scenario& operator[](int i) const { return scenarios_[static_cast<std::size_t>(i)]; }
  const std::vector<Scenario>& scenarios() const { return scenarios_; }
  std::int64_t denominator() const { return m_; }
  Rational probability(int i) const { return Rational((*this)[i].k, m_); }

  // delta = min p(psi)
  Rational delta() const {
    std::int64_t lo = scenarios_.front().k;
    for (const auto& s : scenarios_) lo = std::min(lo, s.k);
    return Rational(lo, m_);
  }

  ScenarioMask all() const { return ScenarioMask::range(size()); }

  // Sum of numerators over a mask (probability mass times M).
  std::int64_t mass(const ScenarioMask& mask) const {
    std::int64_t total = 0;
    mask.for_each([&](int i) { total += scenarios_[static_cast<std::size_t>(i)].k; });
    return total;
  }

  // Scenarios extending phi.
  ScenarioMask consistent_mask(const Realization& phi) const {
    ScenarioMask mask;
    for (int i = 0; i < size(); ++i)
      if (extends(scenarios_[static_cast<std::size_t>(i)].state, phi)) mask.insert(i);
    return mask;
  }

  // Restriction to a sub-collection, renormalized.
  ScenarioSet conditioned_on(const ScenarioMask& part, NodeId root) const {
    std::vector<std::pair<NodeSet, std::int64_t>> entries;
    part.for_each([&](int i) { entries.emplace_back((*this)[i].state.active, (*this)[i].k); });
    const std::int64_t total = mass(part);
    if (total == 0) throw ZeroMassError("conditioning on an empty scenario collection");
    return ScenarioSet(n_, root, std::move(entries), total);
  }

 private:
  int n_ = 0;
  std::int64_t m_ = 1;
  std::vector<Scenario> scenarios_;
};

inline std::vector<int> consistent_set(const ScenarioSet& s, const Realization& phi) {
  return s.consistent_mask(phi).members();
}

inline Rational realization_prob(const ScenarioSet& s, const Realization& phi) {
  return Rational(s.mass(s.consistent_mask(phi)), s.denominator());
}

// p(psi | phi) for the stored scenario at `index`.
inline Rational conditional_prob(const ScenarioSet& s, int index, const Realization& phi) {
  const ScenarioMask mask = s.consistent_mask(phi);
  const std::int64_t total = s.mass(mask);
  if (total == 0) throw ZeroMassError("no stored scenario extends the observation");
  if (!mask.contains(index)) throw PreconditionError("scenario does not extend the observation");
  return Rational(s[index].k, total);
}

inline Rational active_prob(const ScenarioSet& s, NodeId v, const Realization& phi) {
  const ScenarioMask mask = s.consistent_mask(phi);
  const std::int64_t total = s.mass(mask);
  if (total == 0) throw ZeroMassError("no stored scenario extends the observation");
  std::int64_t on = 0;
  mask.for_each([&](int i) {
    if (s[i].state.state(v)) on += s[i].k;
  });
  return Rational(on, total);
}

// v ~_psi r: v active and in the root's component of G[A_psi].
inline bool same_component_as_root(const Graph& g, const FullRealization& psi, NodeId v) {
  g.check(v);
  if (!psi.state(v) || !psi.state(g.root())) return false;
  return connected_component(g, psi.active, g.root()).contains(v);
}

// A graph together with its scenario set and per-node scenario indexes that
// the policies and the oracle query constantly.
class Instance {
 public:
  Instance() = default;
  Instance(Graph graph, ScenarioSet scenarios)
      : graph_(std::move(graph)), scenarios_(std::move(scenarios)) {
    if (scenarios_.node_count() != graph_.size()) {
      throw PreconditionError("scenario set and graph disagree on node count");
    }
    const int n = graph_.size();
    active_in_.assign(static_cast<std::size_t>(n), {});
    linked_in_.assign(static_cast<std::size_t>(n), {});
    components_.reserve(static_cast<std::size_t>(scenarios_.size()));
    for (int i = 0; i < scenarios_.size(); ++i) {
      const auto& act = scenarios_[i].state.active;
      if (!act.contains(graph_.root())) throw PreconditionError("root inactive in a scenario");
      components_.push_back(connected_component(graph_, act, graph_.root()));
      act.for_each([&](int v) { active_in_[v].insert(i); });
      components_.back().for_each([&](int v) { linked_in_[v].insert(i); });
    }
  }

  const Graph& graph() const { return graph_; }
  const ScenarioSet& scenarios() const { return scenarios_; }

  // Root component of G[A_psi] for scenario i.
  const NodeSet& root_component(int i) const { return components_[static_cast<std::size_t>(i)]; }
  // Scenarios in which v is active.
  const ScenarioMask& active_in(NodeId v) const { return active_in_[v]; }
  // Scenarios in which v ~ r.
  const ScenarioMask& linked_in(NodeId v) const { return linked_in_[v]; }

  // Psi_phi as a mask, using the per-node indexes.
  ScenarioMask consistent(const Realization& phi) const {
    ScenarioMask mask = scenarios_.all();
    phi.support().for_each([&](int v) {
      if (phi.observed_active().contains(v)) {
        mask &= active_in_[v];
      } else {
        mask -= active_in_[v];
      }
    });
    return mask;
  }

  // Nodes that lie in the root component for at least one scenario of the
  // mask; everything else is certainly inactive or certainly cut off.
  NodeSet live_nodes(const ScenarioMask& mask) const {
    NodeSet live;
    mask.for_each([&](int i) { live |= components_[static_cast<std::size_t>(i)]; });
    return live;
  }

 private:
  Graph graph_;
  ScenarioSet scenarios_;
  std::vector<NodeSet> components_;
  std::vector<ScenarioMask> active_in_;
  std::vector<ScenarioMask> linked_in_;
};

}  // namespace rcds
