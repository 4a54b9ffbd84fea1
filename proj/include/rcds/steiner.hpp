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

// Exact solvers for the node-weighted polymatroid Steiner tree problem and
// the minimum-weight connected dominating set, plus the node-to-edge weight
// reduction and an exact edge-weighted counterpart.
//
// Node-weighted search: branch and bound over connected supersets of {root}.
// Each search node fixes a connected set S and an excluded set X; branching
// includes or excludes one boundary node, so every connected set is visited
// at most once. The lower bound is admissible: any feasible T containing S
// only uses nodes whose node-weighted distance from S is at most w(T)-w(S),
// so the smallest distance threshold whose ball completes f bounds w(T)-w(S).
//
// Ties are broken by (weight, cardinality, lexicographic member list). The
// cardinality component is folded into the integer weights used by the search
// (every non-root node costs one extra unit below the weight resolution).

#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "rcds/bitset.hpp"
#include "rcds/error.hpp"
#include "rcds/graph.hpp"
#include "rcds/rational.hpp"

namespace rcds {

struct SolverLimits {
  std::int64_t max_explored = 50'000'000;
};

struct SolverReport {
  NodeSet solution;
  Rational objective = 0;
  Rational alpha = 1;
  std::int64_t nodes_explored = 0;
};

struct EdgeSolverReport : SolverReport {
  std::vector<std::pair<NodeId, NodeId>> tree_edges;
};

// Node-weighted polymatroid Steiner instance on G[domain]. `f` maps a node
// set to a nonnegative integer and must be monotone and submodular; the
// solution must reach f(S) >= target.
template <class F>
struct SteinerInstance {
  const Graph* graph = nullptr;
  NodeSet domain;
  NodeId root = 0;
  std::vector<Rational> node_weights;  // indexed by NodeId
  F f;
  std::int64_t target = 0;
};

namespace detail {

struct ScaledWeights {
  std::vector<std::int64_t> value;  // weight * den
  std::int64_t den = 1;
};

inline ScaledWeights scale_weights(const std::vector<Rational>& w, const NodeSet& domain) {
  ScaledWeights out;
  domain.for_each([&](int v) { out.den = lcm_checked(out.den, w[static_cast<std::size_t>(v)].denominator()); });
  out.value.assign(w.size(), 0);
  domain.for_each([&](int v) {
    const Rational& x = w[static_cast<std::size_t>(v)];
    const __int128 scaled = static_cast<__int128>(x.numerator()) * (out.den / x.denominator());
    if (scaled > INT64_MAX / 1024) throw Error("node weight too large for exact search");
    out.value[static_cast<std::size_t>(v)] = static_cast<std::int64_t>(scaled);
  });
  return out;
}

// Node-weighted shortest distances from `from` (costs of nodes in `from`
// excluded) over `allowed`. Unreached nodes get -1.
inline void node_distances(const Graph& g, const NodeSet& from, const NodeSet& allowed,
                           const std::vector<std::int64_t>& cost, std::vector<std::int64_t>& dist,
                           std::vector<NodeId>& order, std::vector<NodeId>* parent = nullptr) {
  const int n = g.size();
  dist.assign(static_cast<std::size_t>(n), -1);
  if (parent) parent->assign(static_cast<std::size_t>(n), -1);
  order.clear();
  using Item = std::pair<std::int64_t, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  std::vector<char> done(static_cast<std::size_t>(n), 0);
  from.for_each([&](int s) {
    done[s] = 1;
    for (int u : g.neighbors(s)) {
      if (!allowed.contains(u) || from.contains(u)) continue;
      if (dist[u] < 0 || cost[u] < dist[u]) {
        dist[u] = cost[u];
        if (parent) (*parent)[u] = s;
        pq.emplace(cost[u], u);
      }
    }
  });
  while (!pq.empty()) {
    auto [d, v] = pq.top();
    pq.pop();
    if (done[v] || d != dist[v]) continue;
    done[v] = 1;
    order.push_back(v);
    for (int u : g.neighbors(v)) {
      if (!allowed.contains(u) || done[u]) continue;
      const std::int64_t nd = d + cost[u];
      if (dist[u] < 0 || nd < dist[u]) {
        dist[u] = nd;
        if (parent) (*parent)[u] = v;
        pq.emplace(nd, u);
      }
    }
  }
}

template <class F>
class NodeSteinerSearch {
 public:
  NodeSteinerSearch(const SteinerInstance<F>& inst, const SolverLimits& limits)
      : inst_(inst), g_(*inst.graph), limits_(limits) {
    const auto scaled = scale_weights(inst.node_weights, inst.domain);
    const std::int64_t card_unit = 1;
    const std::int64_t mult = g_.size() + 1;
    cost_.assign(static_cast<std::size_t>(g_.size()), 0);
    inst.domain.for_each([&](int v) {
      cost_[v] = v == inst.root ? 0 : scaled.value[v] * mult + card_unit;
    });
  }

  SolverReport run() {
    const NodeId r = inst_.root;
    if (!inst_.domain.contains(r)) throw PreconditionError("root outside the solver domain");
    NodeSet start;
    start.insert(r);
    const NodeSet reach = connected_component(g_, inst_.domain, r);
    if (inst_.f(reach) < inst_.target) {
      throw InfeasibleError("target value is not reachable from the root");
    }
    incumbent(start, reach);
    search(start, NodeSet{}, 0);
    SolverReport rep;
    rep.solution = best_;
    rep.objective = 0;
    best_.for_each([&](int v) {
      if (v != r) rep.objective += inst_.node_weights[static_cast<std::size_t>(v)];
    });
    rep.nodes_explored = explored_;
    return rep;
  }

 private:
  std::int64_t f(const NodeSet& s) { return inst_.f(s); }

  std::int64_t cost_of(const NodeSet& s) const {
    std::int64_t c = 0;
    s.for_each([&](int v) { c += cost_[v]; });
    return c;
  }

  void offer(const NodeSet& s, std::int64_t c) {
    if (!have_best_ || c < best_cost_ || (c == best_cost_ && lex_less(s, best_))) {
      have_best_ = true;
      best_cost_ = c;
      best_ = s;
    }
  }

  // Greedy shortest-path augmentation followed by redundant-node removal.
  void incumbent(NodeSet s, const NodeSet& reach) {
    std::vector<std::int64_t> dist;
    std::vector<NodeId> order, parent;
    while (f(s) < inst_.target) {
      const std::int64_t base = f(s);
      node_distances(g_, s, inst_.domain, cost_, dist, order, &parent);
      NodeSet best_path;
      std::int64_t best_gain = 0, best_d = 1;
      for (NodeId v : order) {
        NodeSet path;
        for (NodeId x = v; x >= 0 && !s.contains(x); x = parent[x]) path.insert(x);
        const std::int64_t gain = f(s | path) - base;
        const std::int64_t d = std::max<std::int64_t>(dist[v], 1);
        if (gain > 0 && (best_path.empty() || static_cast<__int128>(gain) * best_d >
                                                   static_cast<__int128>(best_gain) * d)) {
          best_gain = gain;
          best_d = d;
          best_path = path;
        }
      }
      if (best_path.empty()) {
        s |= reach;
        break;
      }
      s |= best_path;
    }
    std::vector<NodeId> members = s.members();
    std::stable_sort(members.begin(), members.end(),
                     [&](NodeId a, NodeId b) { return cost_[a] > cost_[b]; });
    for (NodeId v : members) {
      if (v == inst_.root) continue;
      NodeSet t = s;
      t.erase(v);
      if (is_connected(g_, t) && f(t) >= inst_.target) s = t;
    }
    offer(s, cost_of(s));
  }

  void search(const NodeSet& s, const NodeSet& excluded, std::int64_t cost) {
    if (++explored_ > limits_.max_explored) {
      throw SolverLimitError("polymatroid Steiner search exceeded " +
                             std::to_string(limits_.max_explored) + " explored nodes");
    }
    const std::int64_t fs = f(s);
    if (fs >= inst_.target) {
      offer(s, cost);
      return;
    }
    if (cost > best_cost_) return;
    const NodeSet allowed = inst_.domain - excluded;
    std::vector<std::int64_t> dist;
    std::vector<NodeId> order;
    node_distances(g_, s, allowed, cost_, dist, order);
    NodeSet ball = s;
    for (NodeId v : order) ball.insert(v);
    if (f(ball) < inst_.target) return;
    // Smallest prefix of `order` completing f.
    std::size_t lo = 0, hi = order.size();  // answer in [lo, hi)
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      NodeSet t = s;
      for (std::size_t i = 0; i < mid; ++i) t.insert(order[i]);
      if (f(t) >= inst_.target) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    // prefix of length hi completes; of length lo (if lo < hi) does not.
    {
      NodeSet t = s;
      for (std::size_t i = 0; i < lo; ++i) t.insert(order[i]);
      const std::size_t need = f(t) >= inst_.target ? lo : hi;
      const std::int64_t bound = cost + (need == 0 ? 0 : dist[order[need - 1]]);
      if (bound > best_cost_) return;
    }
    // Branch on the boundary node with the best marginal gain per cost.
    NodeId pick = -1;
    std::int64_t pick_gain = -1, pick_cost = 1;
    NodeSet boundary;
    s.for_each([&](int v) { boundary |= g_.closed(v); });
    boundary &= allowed;
    boundary -= s;
    boundary.for_each([&](int v) {
      NodeSet t = s;
      t.insert(v);
      const std::int64_t gain = f(t) - fs;
      const std::int64_t c = std::max<std::int64_t>(cost_[v], 1);
      if (pick < 0 || static_cast<__int128>(gain) * pick_cost > static_cast<__int128>(pick_gain) * c) {
        pick = v;
        pick_gain = gain;
        pick_cost = c;
      }
    });
    if (pick < 0) return;
    NodeSet with = s;
    with.insert(pick);
    search(with, excluded, cost + cost_[pick]);
    NodeSet without = excluded;
    without.insert(pick);
    search(s, without, cost);
  }

  const SteinerInstance<F>& inst_;
  const Graph& g_;
  SolverLimits limits_;
  std::vector<std::int64_t> cost_;
  NodeSet best_;
  std::int64_t best_cost_ = std::numeric_limits<std::int64_t>::max();
  bool have_best_ = false;
  std::int64_t explored_ = 0;
};

}  // namespace detail

// Minimum-w' connected node set containing the root with f(S) = target.
// The "tree" is reported as its spanned node set.
template <class F>
SolverReport solve_polymatroid_steiner(const SteinerInstance<F>& inst,
                                       const SolverLimits& limits = {}) {
  return detail::NodeSteinerSearch<F>(inst, limits).run();
}

// Minimum-weight CDS of G[within] under the given weights (root included).
inline SolverReport solve_min_weight_cds(const Graph& g, const NodeSet& within,
                                         const std::vector<Rational>& weights,
                                         const SolverLimits& limits = {}) {
  if (!within.contains(g.root())) throw PreconditionError("root outside the graph view");
  if (!is_connected(g, within)) {
    throw PreconditionError("graph view is disconnected; prune to the root component first");
  }
  auto dominated = [&g, within](const NodeSet& s) -> std::int64_t {
    return (dominated_set(g, s) & within).size();
  };
  SteinerInstance<decltype(dominated)> inst{&g, within, g.root(), weights, dominated,
                                            within.size()};
  SolverReport rep = solve_polymatroid_steiner(inst, limits);
  rep.objective = weight_of(g.with_weights(weights), rep.solution);
  return rep;
}

inline SolverReport solve_min_weight_cds(const Graph& g, const SolverLimits& limits = {}) {
  return solve_min_weight_cds(g, g.nodes(), g.weights(), limits);
}

using EdgeWeights = std::map<std::pair<NodeId, NodeId>, Rational>;

// w'(uv) = w(u) + w(v), keyed by (min, max).
inline EdgeWeights reduce_node_to_edge_weights(const Graph& g) {
  EdgeWeights out;
  for (auto [u, v] : g.edges()) out[{u, v}] = g.weight(u) + g.weight(v);
  return out;
}

namespace detail {

// Minimum spanning tree of G[s] under integer edge costs; returns the cost and
// fills `edges`. `s` must be connected.
inline std::int64_t mst(const Graph& g, const NodeSet& s,
                        const std::map<std::pair<NodeId, NodeId>, std::int64_t>& w,
                        std::vector<std::pair<NodeId, NodeId>>* edges) {
  const int first = s.first();
  if (first < 0) return 0;
  NodeSet in;
  in.insert(first);
  std::int64_t total = 0;
  while (!(in == s)) {
    std::int64_t best = -1;
    std::pair<NodeId, NodeId> be{-1, -1};
    in.for_each([&](int u) {
      for (int v : g.neighbors(u)) {
        if (!s.contains(v) || in.contains(v)) continue;
        const std::int64_t c = w.at({std::min(u, v), std::max(u, v)});
        if (best < 0 || c < best) {
          best = c;
          be = {std::min(u, v), std::max(u, v)};
        }
      }
    });
    if (best < 0) throw PreconditionError("spanning tree requested on a disconnected set");
    total += best;
    in.insert(be.first);
    in.insert(be.second);
    if (edges) edges->push_back(be);
  }
  return total;
}

}  // namespace detail

inline constexpr int kEdgeSolverMaxDomain = 22;

// Exact edge-weighted polymatroid Steiner tree: the cheapest tree is the MST
// of its spanned set, so the search enumerates connected root sets and bounds
// by node weight (every tree edge carries both endpoint weights, and every
// spanned node other than a lone root touches an edge).
template <class F>
EdgeSolverReport solve_edge_weighted_steiner(const Graph& g, const NodeSet& domain, const F& f,
                                             std::int64_t target, const EdgeWeights& edge_weights,
                                             const SolverLimits& limits = {}) {
  const NodeId r = g.root();
  if (domain.size() > kEdgeSolverMaxDomain) {
    throw SizeGuardError("edge-weighted exact search limited to " +
                         std::to_string(kEdgeSolverMaxDomain) + " nodes");
  }
  if (!domain.contains(r)) throw PreconditionError("root outside the solver domain");
  if (f(connected_component(g, domain, r)) < target) {
    throw InfeasibleError("target value is not reachable from the root");
  }
  std::int64_t den = 1;
  for (const auto& [e, c] : edge_weights) den = lcm_checked(den, c.denominator());
  std::map<std::pair<NodeId, NodeId>, std::int64_t> ew;
  for (const auto& [e, c] : edge_weights) ew[e] = c.numerator() * (den / c.denominator());
  // Per-node lower-bound weight: the cheapest incident edge in the domain is
  // at least the node weight under the reduction, and in general any tree
  // edge at v costs at least min incident edge.
  std::vector<std::int64_t> lb(static_cast<std::size_t>(g.size()), 0);
  domain.for_each([&](int v) {
    std::int64_t m = -1;
    for (int u : g.neighbors(v)) {
      if (!domain.contains(u)) continue;
      const std::int64_t c = ew.at({std::min(u, v), std::max(u, v)});
      if (m < 0 || c < m) m = c;
    }
    lb[v] = std::max<std::int64_t>(m, 0);
  });

  EdgeSolverReport rep;
  bool have = false;
  std::int64_t best_cost = 0;
  NodeSet best;
  std::int64_t explored = 0;
  // Half the sum of per-node cheapest incident edges never exceeds a
  // spanning tree's cost (each tree edge is counted from at most two ends).
  std::function<void(const NodeSet&, const NodeSet&, std::int64_t)> rec =
      [&](const NodeSet& s, const NodeSet& excluded, std::int64_t lbsum) {
        if (++explored > limits.max_explored) throw SolverLimitError("edge-weighted search budget exhausted");
        if (have && lbsum > 2 * best_cost) return;
        const NodeSet allowed = domain - excluded;
        if (f(s) >= target) {
          const std::int64_t c = detail::mst(g, s, ew, nullptr);
          const bool better = !have || c < best_cost ||
                              (c == best_cost && (s.size() < best.size() ||
                                                  (s.size() == best.size() && lex_less(s, best))));
          if (better) {
            have = true;
            best_cost = c;
            best = s;
          }
        }
        if (f(connected_component(g, allowed, r)) < target && f(s) < target) return;
        NodeSet boundary;
        s.for_each([&](int v) { boundary |= g.closed(v); });
        boundary &= allowed;
        boundary -= s;
        const int v = boundary.first();
        if (v < 0) return;
        NodeSet with = s;
        with.insert(v);
        rec(with, excluded, lbsum + lb[v] + (s.size() == 1 ? lb[r] : 0));
        NodeSet without = excluded;
        without.insert(v);
        rec(s, without, lbsum);
      };
  NodeSet start;
  start.insert(r);
  rec(start, NodeSet{}, 0);
  rep.solution = best;
  rep.nodes_explored = explored;
  detail::mst(g, best, ew, &rep.tree_edges);
  rep.objective = Rational(best_cost, den);
  return rep;
}

}  // namespace rcds
