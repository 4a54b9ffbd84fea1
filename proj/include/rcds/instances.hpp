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

// Instance generators: unit disk, bidirectional disk and Erdos-Renyi graphs
// with clustered failures, plus small hand-built fixtures.
//
// Coordinates, radii, thresholds and weights are integers over 2^20, so every
// geometric predicate is an exact integer comparison and every weight is an
// exact rational. Randomness comes from raw mt19937_64 output only (the
// standard distributions are implementation-defined), which keeps generation
// byte-identical across toolchains.

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "rcds/bitset.hpp"
#include "rcds/error.hpp"
#include "rcds/graph.hpp"
#include "rcds/polymatroid.hpp"
#include "rcds/rational.hpp"
#include "rcds/scenario.hpp"

namespace rcds {

enum class Family { UnitDisk, BidirectionalDisk, ErdosRenyi };

inline const char* to_string(Family f) {
  switch (f) {
    case Family::UnitDisk: return "unit-disk";
    case Family::BidirectionalDisk: return "bidirectional-disk";
    case Family::ErdosRenyi: return "erdos-renyi";
  }
  return "?";
}

inline std::optional<Family> parse_family(const std::string& s) {
  if (s == "unit-disk") return Family::UnitDisk;
  if (s == "bidirectional-disk") return Family::BidirectionalDisk;
  if (s == "erdos-renyi") return Family::ErdosRenyi;
  return std::nullopt;
}

inline constexpr std::int64_t kGridBits = 20;
inline constexpr std::int64_t kGrid = std::int64_t{1} << kGridBits;

struct GeneratorConfig {
  Family family = Family::UnitDisk;
  int n = 40;
  int m_scenarios = 30;
  std::uint64_t seed = 0;
  // Failure threshold range [0, threshold_max]; defaults per family when unset.
  std::optional<Rational> threshold_max;
  int failure_points = 7;
  int max_retries = 100;
  // Disk graphs at radius 1/sqrt(n) are almost never connected. When no
  // retry is connected the base seed's graph is kept and the root is placed
  // in its largest component, unless connectivity is required.
  bool require_connected = false;
};

inline Rational default_threshold_max(Family f) {
  return f == Family::ErdosRenyi ? Rational(1, 4) : Rational(1, 3);
}

namespace detail {

class GridRng {
 public:
  explicit GridRng(std::uint64_t seed) : rng_(seed) {}
  // Uniform integer in [0, bound] by rejection on raw 64-bit output.
  std::int64_t below_or_equal(std::int64_t bound) {
    const std::uint64_t span = static_cast<std::uint64_t>(bound) + 1;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t x;
    do {
      x = rng_();
    } while (x >= limit);
    return static_cast<std::int64_t>(x % span);
  }
  // Uniform grid coordinate in [0, 1).
  std::int64_t coord() { return static_cast<std::int64_t>(rng_() >> (64 - kGridBits)); }

 private:
  std::mt19937_64 rng_;
};

struct GridPoint {
  std::int64_t x, y;
};

inline std::int64_t dist2(const GridPoint& a, const GridPoint& b) {
  const std::int64_t dx = a.x - b.x, dy = a.y - b.y;
  return dx * dx + dy * dy;
}

// Largest grid integer t with t / 2^20 <= bound.
inline std::int64_t grid_floor(const Rational& bound) {
  return static_cast<std::int64_t>(static_cast<__int128>(bound.numerator()) * kGrid /
                                   bound.denominator());
}

// Smallest id of maximum degree inside the largest component (ties go to
// the component holding the smaller id).
inline NodeId max_degree_root(const Graph& g) {
  NodeSet pending = g.nodes(), largest;
  while (!pending.empty()) {
    const NodeSet comp = connected_component(g, g.nodes(), pending.first());
    if (comp.size() > largest.size()) largest = comp;
    pending -= comp;
  }
  NodeId best = largest.first();
  largest.for_each([&](int v) {
    if (g.neighbors(v).size() > g.neighbors(best).size()) best = v;
  });
  return best;
}

}  // namespace detail

// Generates a connected instance; attempt i uses seed cfg.seed + i.
inline Instance generate_instance(const GeneratorConfig& cfg) {
  if (cfg.n < 2) throw PreconditionError("generator needs n >= 2");
  if (static_cast<std::size_t>(cfg.n) > kMaxNodes) throw PreconditionError("n exceeds node capacity");
  if (cfg.m_scenarios < 1) throw PreconditionError("generator needs at least one scenario");
  if (cfg.failure_points < 0) throw PreconditionError("failure point count must be nonnegative");
  const Rational tmax = cfg.threshold_max.value_or(default_threshold_max(cfg.family));
  if (tmax < 0 || tmax > 2) throw PreconditionError("threshold range must lie in [0, 2]");
  const std::int64_t tmax_grid = detail::grid_floor(tmax);
  const int n = cfg.n;

  // attempt -1 re-runs the base seed without the connectivity requirement
  for (int attempt = 0;; attempt = attempt < cfg.max_retries ? attempt + 1 : -1) {
    const bool fallback = attempt < 0;
    if (fallback && cfg.require_connected) break;
    detail::GridRng rng(cfg.seed + static_cast<std::uint64_t>(fallback ? 0 : attempt));
    std::vector<detail::GridPoint> pts(static_cast<std::size_t>(n));
    for (auto& p : pts) {
      p.x = rng.coord();
      p.y = rng.coord();
    }
    std::vector<std::int64_t> radius;
    if (cfg.family == Family::BidirectionalDisk) {
      const std::int64_t rmax = detail::grid_floor(Rational(1, 3));
      for (int v = 0; v < n; ++v) radius.push_back(rng.below_or_equal(rmax));
    }
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (int u = 0; u < n; ++u) {
      for (int v = u + 1; v < n; ++v) {
        bool edge = false;
        switch (cfg.family) {
          case Family::UnitDisk:
            // d <= 1/sqrt(n)  <=>  d^2 * n <= 1
            edge = detail::dist2(pts[u], pts[v]) * n <= kGrid * kGrid;
            break;
          case Family::BidirectionalDisk: {
            const std::int64_t rmin = std::min(radius[u], radius[v]);
            edge = detail::dist2(pts[u], pts[v]) <= rmin * rmin;
            break;
          }
          case Family::ErdosRenyi:
            edge = rng.coord() * 10 < kGrid;
            break;
        }
        if (edge) edges.emplace_back(u, v);
      }
    }
    std::vector<Rational> weights;
    for (int v = 0; v < n; ++v) weights.emplace_back(rng.below_or_equal(kGrid), kGrid);
    std::vector<Point> positions;
    for (const auto& p : pts) positions.push_back({Rational(p.x, kGrid), Rational(p.y, kGrid)});

    const Graph probe(n, edges, weights, 0);
    if (!fallback && !is_connected(probe, probe.nodes())) continue;
    const NodeId root = detail::max_degree_root(probe);
    Graph g(n, edges, std::move(weights), root, std::move(positions));

    const NodeSet forced = g.closed(root);
    std::vector<std::pair<NodeSet, std::int64_t>> entries;
    for (int i = 0; i < cfg.m_scenarios; ++i) {
      std::vector<std::pair<detail::GridPoint, std::int64_t>> fails;
      for (int j = 0; j < cfg.failure_points; ++j) {
        detail::GridPoint c{rng.coord(), rng.coord()};
        fails.emplace_back(c, rng.below_or_equal(tmax_grid));
      }
      NodeSet active;
      for (int v = 0; v < n; ++v) {
        bool down = false;
        for (const auto& [c, t] : fails)
          if (detail::dist2(pts[v], c) <= t * t) down = true;
        if (!down || forced.contains(v)) active.insert(v);
      }
      entries.emplace_back(active, 1);
    }
    return Instance(std::move(g), ScenarioSet(n, root, std::move(entries), cfg.m_scenarios));
  }
  throw InfeasibleError("no connected " + std::string(to_string(cfg.family)) + " graph within " +
                        std::to_string(cfg.max_retries) + " retries from seed " +
                        std::to_string(cfg.seed));
}

inline Instance gen_unit_disk(GeneratorConfig cfg) {
  cfg.family = Family::UnitDisk;
  return generate_instance(cfg);
}
inline Instance gen_bidirectional_disk(GeneratorConfig cfg) {
  cfg.family = Family::BidirectionalDisk;
  return generate_instance(cfg);
}
inline Instance gen_erdos_renyi(GeneratorConfig cfg) {
  cfg.family = Family::ErdosRenyi;
  return generate_instance(cfg);
}

// Node ids of the worked-example fixture.
namespace three_branch {
inline constexpr NodeId r = 0, a = 1, b = 2, c = 3, d = 4, a2 = 5, b2 = 6, c2 = 7;
}

// Three branches r-a-a', r-b-b', r-c-c' joined at d; exactly one of a', b',
// c' is active, each with probability 1/3.
inline Instance fixture_three_branch(const Rational& wa, const Rational& wb, const Rational& wc) {
  if (!(wa < wb && wb < wc)) throw PreconditionError("fixture expects w(a) < w(b) < w(c)");
  using namespace three_branch;
  const std::vector<std::pair<NodeId, NodeId>> edges{{r, a},  {r, b},  {r, c},  {a, a2}, {b, b2},
                                                     {c, c2}, {a2, d}, {b2, d}, {c2, d}};
  std::vector<Rational> w(8, Rational(0));
  w[a] = wa;
  w[b] = wb;
  w[c] = wc;
  Graph g(8, edges, std::move(w), r);
  NodeSet base;
  for (NodeId v : {r, a, b, c, d}) base.insert(v);
  std::vector<std::pair<NodeSet, std::int64_t>> entries;
  for (NodeId p : {a2, b2, c2}) {
    NodeSet s = base;
    s.insert(p);
    entries.emplace_back(s, 1);
  }
  return Instance(std::move(g), ScenarioSet(8, r, std::move(entries), 3));
}

// Deterministic instance on which the greedy policy pays n' against an
// optimum of 1 + eps. Ids: r=0, v=1, u=2, u'=3, hub-side nodes 4..n'+3.
inline Instance fixture_greedy_bad(int n_prime, const Rational& eps) {
  if (n_prime < 1) throw PreconditionError("n' must be at least 1");
  if (eps <= 0) throw PreconditionError("eps must be positive");
  const int n = n_prime + 4;
  std::vector<std::pair<NodeId, NodeId>> edges{{0, 1}, {0, 2}, {2, 3}};
  for (int x = 4; x < n; ++x) {
    edges.emplace_back(1, x);
    edges.emplace_back(3, x);
  }
  std::vector<Rational> w(static_cast<std::size_t>(n), Rational(0));
  w[1] = n_prime;
  w[2] = 1 + eps;
  Graph g(n, edges, std::move(w), 0);
  return Instance(g, ScenarioSet(n, 0, {{NodeSet::range(n), 1}}, 1));
}

// Instance on which the CDS-based policy pays about k against an optimum of
// about 1 + eps (eps = 1/10). Local variant ids: r=0, v=1, x=2, u_i=2+i.
// Full variant appends u'_i = k+2+i subdividing r-u_i.
inline Instance fixture_cds_bad(int k, const Rational& delta, FeedbackModel model) {
  if (k < 1) throw PreconditionError("k must be at least 1");
  if (delta <= 0 || delta * k >= 1) throw PreconditionError("cds-bad fixture needs 0 < k*delta < 1");
  const Rational eps(1, 10);
  const bool full = model == FeedbackModel::Full;
  const int n = full ? 2 * k + 3 : k + 3;
  std::vector<std::pair<NodeId, NodeId>> edges{{0, 1}, {2, 1}};
  std::vector<Rational> w(static_cast<std::size_t>(n), Rational(0));
  w[1] = 1 + eps;
  NodeSet always;
  for (NodeId v : {0, 1, 2}) always.insert(v);
  for (int i = 1; i <= k; ++i) {
    const NodeId u = 2 + i;
    edges.emplace_back(2, u);
    if (full) {
      const NodeId up = k + 2 + i;
      edges.emplace_back(0, up);
      edges.emplace_back(up, u);
      w[static_cast<std::size_t>(up)] = 1;
      always.insert(up);
    } else {
      edges.emplace_back(0, u);
      w[static_cast<std::size_t>(u)] = 1;
    }
  }
  Graph g(n, edges, std::move(w), 0);
  std::vector<std::pair<NodeSet, Rational>> probs;
  for (int i = 1; i <= k; ++i) {
    NodeSet s = always;
    s.insert(2 + i);
    probs.emplace_back(s, delta);
  }
  probs.emplace_back(always, 1 - delta * k);
  return Instance(g, ScenarioSet::from_probabilities(n, 0, probs));
}

// r - x - y with weights 0, 1, 2 and every node always active.
inline Instance fixture_path3() {
  Graph g(3, {{0, 1}, {1, 2}}, {Rational(0), Rational(1), Rational(2)}, 0);
  return Instance(g, ScenarioSet(3, 0, {{NodeSet::range(3), 1}}, 1));
}

}  // namespace rcds
