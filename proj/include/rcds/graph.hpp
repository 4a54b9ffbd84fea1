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

// Undirected node-weighted graph with a distinguished root, plus the
// neighborhood, domination and connectivity primitives. Induced subgraphs are
// never materialized: callers pass a restriction NodeSet instead.

#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rcds/bitset.hpp"
#include "rcds/error.hpp"
#include "rcds/rational.hpp"

namespace rcds {

using NodeId = int;

struct Point {
  Rational x;
  Rational y;
  friend bool operator==(const Point&, const Point&) = default;
};

class Graph {
 public:
  Graph() = default;

  Graph(int n, const std::vector<std::pair<NodeId, NodeId>>& edges,
        std::vector<Rational> weights, NodeId root,
        std::optional<std::vector<Point>> positions = std::nullopt)
      : n_(n), root_(root), weights_(std::move(weights)), positions_(std::move(positions)) {
    if (n < 1 || static_cast<std::size_t>(n) > kMaxNodes) {
      throw PreconditionError("graph size must be in [1, " + std::to_string(kMaxNodes) + "]");
    }
    if (root < 0 || root >= n) throw InvalidNodeError("root out of range");
    if (weights_.size() != static_cast<std::size_t>(n)) {
      throw PreconditionError("expected one weight per node");
    }
    for (const auto& w : weights_) {
      if (w < 0) throw PreconditionError("node weights must be nonnegative");
    }
    if (positions_ && positions_->size() != static_cast<std::size_t>(n)) {
      throw PreconditionError("expected one position per node");
    }
    adjacency_.assign(static_cast<std::size_t>(n), {});
    closed_.assign(static_cast<std::size_t>(n), NodeSet{});
    for (int v = 0; v < n; ++v) closed_[v].insert(v);
    for (auto [u, v] : edges) {
      check(u);
      check(v);
      if (u == v) throw PreconditionError("self-loop at node " + std::to_string(u));
      if (closed_[u].contains(v)) continue;
      closed_[u].insert(v);
      closed_[v].insert(u);
    }
    for (int v = 0; v < n; ++v) {
      closed_[v].for_each([&](int u) {
        if (u != v) adjacency_[v].push_back(u);
      });
    }
  }

  int size() const { return n_; }
  NodeId root() const { return root_; }
  NodeSet nodes() const { return NodeSet::range(n_); }

  const std::vector<NodeId>& neighbors(NodeId v) const {
    check(v);
    return adjacency_[v];
  }
  // N[v] as a bitset; the hot-path accessor.
  const NodeSet& closed(NodeId v) const { return closed_[v]; }
  bool adjacent(NodeId u, NodeId v) const { return u != v && closed_[u].contains(v); }

  const Rational& weight(NodeId v) const { return weights_[v]; }
  const std::vector<Rational>& weights() const { return weights_; }
  const std::optional<std::vector<Point>>& positions() const { return positions_; }

  std::vector<std::pair<NodeId, NodeId>> edges() const {
    std::vector<std::pair<NodeId, NodeId>> out;
    for (int u = 0; u < n_; ++u)
      for (int v : adjacency_[u])
        if (u < v) out.emplace_back(u, v);
    return out;
  }

  Graph with_weights(std::vector<Rational> weights) const {
    return Graph(n_, edges(), std::move(weights), root_, positions_);
  }

  void check(NodeId v) const {
    if (v < 0 || v >= n_) {
      throw InvalidNodeError("node " + std::to_string(v) + " not in graph of size " +
                             std::to_string(n_));
    }
  }

 private:
  int n_ = 0;
  NodeId root_ = 0;
  std::vector<Rational> weights_;
  std::optional<std::vector<Point>> positions_;
  std::vector<std::vector<NodeId>> adjacency_;
  std::vector<NodeSet> closed_;
};

inline NodeSet closed_neighborhood(const Graph& g, NodeId v) {
  g.check(v);
  return g.closed(v);
}

inline NodeSet dominated_set(const Graph& g, const NodeSet& u) {
  NodeSet out;
  u.for_each([&](int v) { out |= g.closed(v); });
  return out;
}

// Component of `seed` in G[restrict].
inline NodeSet connected_component(const Graph& g, const NodeSet& restrict, NodeId seed) {
  g.check(seed);
  if (!restrict.contains(seed)) {
    throw PreconditionError("seed " + std::to_string(seed) + " is outside the restriction");
  }
  NodeSet seen;
  seen.insert(seed);
  NodeSet frontier = seen;
  while (!frontier.empty()) {
    NodeSet next;
    frontier.for_each([&](int v) { next |= g.closed(v); });
    next &= restrict;
    next -= seen;
    seen |= next;
    frontier = next;
  }
  return seen;
}

inline bool is_connected(const Graph& g, const NodeSet& s) {
  const int first = s.first();
  if (first < 0) return true;
  return connected_component(g, s, first) == s;
}

// CDS of G[within]: contains the root, connected, dominates every node of
// `within`.
inline bool is_cds(const Graph& g, const NodeSet& u, const NodeSet& within) {
  if (!u.contains(g.root()) || !u.is_subset_of(within)) return false;
  if (!is_connected(g, u)) return false;
  return within.is_subset_of(dominated_set(g, u));
}

inline bool is_cds(const Graph& g, const NodeSet& u) { return is_cds(g, u, g.nodes()); }

inline Rational weight_of(const Graph& g, const NodeSet& s) {
  Rational total = 0;
  s.for_each([&](int v) { total += g.weight(v); });
  return total;
}

}  // namespace rcds
