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

// Shared test helpers: small random instances and reference implementations
// written directly from the definitions, independent of the library's
// indexed and integer-scaled fast paths.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "rcds.hpp"

namespace rcds::testing {

// Random connected graph: a random spanning tree plus extra edges.
inline Graph random_graph(std::mt19937_64& rng, int n, double extra_edge_prob,
                          int weight_den = 4, int weight_max_num = 8) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (int v = 1; v < n; ++v) {
    edges.emplace_back(static_cast<NodeId>(rng() % static_cast<std::uint64_t>(v)), v);
  }
  std::uniform_real_distribution<double> coin(0, 1);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (coin(rng) < extra_edge_prob) edges.emplace_back(u, v);
  std::vector<Rational> w;
  for (int v = 0; v < n; ++v) {
    w.emplace_back(static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(weight_max_num + 1)),
                   weight_den);
  }
  const NodeId root = static_cast<NodeId>(rng() % static_cast<std::uint64_t>(n));
  return Graph(n, edges, std::move(w), root);
}

// Up to `max_scenarios` random full realizations (root always active; the
// root's neighbors too when `protect_root_neighbors`), integer weights summing
// to at most `max_m`.
inline ScenarioSet random_scenarios(std::mt19937_64& rng, const Graph& g, int max_scenarios,
                                    int max_m, double active_prob,
                                    bool protect_root_neighbors = false) {
  const int count = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_scenarios));
  std::uniform_real_distribution<double> coin(0, 1);
  std::vector<std::pair<NodeSet, std::int64_t>> entries;
  std::int64_t total = 0;
  for (int i = 0; i < count; ++i) {
    NodeSet s;
    for (int v = 0; v < g.size(); ++v)
      if (coin(rng) < active_prob) s.insert(v);
    s.insert(g.root());
    if (protect_root_neighbors) s |= g.closed(g.root());
    const std::int64_t room = max_m - total - (count - 1 - i);
    const std::int64_t k = i + 1 == count ? std::max<std::int64_t>(room, 1)
                                          : 1 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(std::max<std::int64_t>(1, room / 2)));
    total += k;
    entries.emplace_back(s, k);
  }
  return ScenarioSet(g.size(), g.root(), std::move(entries), total);
}

inline Instance random_instance(std::mt19937_64& rng, int n, int max_scenarios, int max_m,
                                double extra_edge_prob = 0.25, double active_prob = 0.7) {
  Graph g = random_graph(rng, n, extra_edge_prob);
  ScenarioSet s = random_scenarios(rng, g, max_scenarios, max_m, active_prob);
  return Instance(std::move(g), std::move(s));
}

// ---------------------------------------------------------------------------
// Reference model of one planning round, from the definitions.

struct RefRound {
  const Instance* inst;
  Realization phi;
  FeedbackModel model;
  std::vector<int> consistent;  // scenario indices extending phi
  NodeSet v;                    // node set of the pruned graph
  NodeSet u;                    // chosen nodes in the pruned graph
  NodeSet h, r, domain;
};

inline bool ref_linked(const Instance& inst, int scenario, NodeId v) {
  return same_component_as_root(inst.graph(), inst.scenarios()[scenario].state, v);
}

inline RefRound ref_round(const Instance& inst, const Realization& phi, const NodeSet& chosen,
                          FeedbackModel model) {
  const Graph& g = inst.graph();
  const ScenarioSet& s = inst.scenarios();
  RefRound rr{&inst, phi, model, {}, {}, {}, {}, {}, {}};
  for (int i = 0; i < s.size(); ++i)
    if (extends(s[i].state, phi)) rr.consistent.push_back(i);
  for (int i : rr.consistent)
    for (NodeId x = 0; x < g.size(); ++x)
      if (ref_linked(inst, i, x)) rr.v.insert(x);
  rr.u = chosen & rr.v;
  Rational total = 0;
  for (int i : rr.consistent) total += s.probability(i);
  for (NodeId x = 0; x < g.size(); ++x) {
    if (!rr.v.contains(x) || rr.u.contains(x)) continue;
    Rational on = 0;
    for (int i : rr.consistent)
      if (s[i].state.state(x)) on += s.probability(i);
    if (on / total > Rational(1, 2)) rr.h.insert(x);
  }
  rr.r = connected_component(g, (rr.h | rr.u) & rr.v, g.root());
  rr.domain = model == FeedbackModel::Full ? rr.r : (dominated_set(g, rr.r) & rr.v);
  return rr;
}

// psi agrees with xi_x, where xi_x sets unobserved live neighbours (full) or
// x itself (local) to their H-membership.
inline bool ref_agrees_with_xi(const RefRound& rr, int scenario, NodeId x) {
  const Graph& g = rr.inst->graph();
  const FullRealization& psi = rr.inst->scenarios()[scenario].state;
  if (rr.model == FeedbackModel::Local) return psi.state(x) == rr.h.contains(x);
  bool ok = true;
  g.closed(x).for_each([&](int y) {
    if (!rr.v.contains(y) || rr.phi.support().contains(y)) return;
    if (psi.state(y) != rr.h.contains(y)) ok = false;
  });
  return ok;
}

inline std::vector<int> ref_hypothesis(const RefRound& rr, const NodeSet& x) {
  const NodeSet rel = rr.model == FeedbackModel::Full ? (x & rr.h) : (x - rr.u);
  std::vector<int> out;
  for (int i : rr.consistent) {
    bool ok = true;
    rel.for_each([&](int y) {
      if (!ref_agrees_with_xi(rr, i, y)) ok = false;
    });
    if (ok) out.push_back(i);
  }
  return out;
}

inline Rational ref_f_plt(const RefRound& rr, const NodeSet& x) {
  const Graph& g = rr.inst->graph();
  const ScenarioSet& s = rr.inst->scenarios();
  const auto hyp = ref_hypothesis(rr, x);
  const NodeSet unobserved = rr.v - rr.phi.support();
  NodeSet covered;
  NodeSet tail;
  if (rr.model == FeedbackModel::Full) {
    covered = dominated_set(g, x) & unobserved;
    tail = unobserved - covered;
  } else {
    covered = dominated_set(g, x & rr.r) & unobserved;
    tail = rr.v - dominated_set(g, rr.r);
  }
  Rational total = covered.size();
  tail.for_each([&](int y) {
    Rational linked = 0;
    for (int i : hyp)
      if (ref_linked(*rr.inst, i, y)) linked += s.probability(i);
    total += 1 - linked;
  });
  return total;
}

inline Rational ref_f_plr(const RefRound& rr, const NodeSet& x) {
  const ScenarioSet& s = rr.inst->scenarios();
  Rational total = 0, kept = 0;
  for (int i : rr.consistent) total += s.probability(i);
  for (int i : ref_hypothesis(rr, x)) kept += s.probability(i);
  return std::min(Rational(1, 2), 1 - kept / total);
}

// ---------------------------------------------------------------------------
// Exhaustive solvers.

// Minimum of sum of weights over S \ {root} for connected S with root in S,
// S within domain and f(S) >= target. Domain at most ~16 nodes.
template <class F>
std::optional<Rational> brute_min_connected(const Graph& g, const NodeSet& domain,
                                            const std::vector<Rational>& w, F&& f,
                                            std::int64_t target) {
  const auto members = domain.members();
  const std::size_t k = members.size();
  std::optional<Rational> best;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << k); ++bits) {
    NodeSet s;
    for (std::size_t i = 0; i < k; ++i)
      if (bits >> i & 1) s.insert(members[i]);
    if (!s.contains(g.root()) || !is_connected(g, s)) continue;
    if (f(s) < target) continue;
    Rational c = 0;
    s.for_each([&](int v) {
      if (v != g.root()) c += w[static_cast<std::size_t>(v)];
    });
    if (!best || c < *best) best = c;
  }
  return best;
}

inline Rational brute_min_cds(const Graph& g, const NodeSet& within) {
  auto dominated = [&](const NodeSet& s) -> std::int64_t {
    return (dominated_set(g, s) & within).size();
  };
  auto best = brute_min_connected(g, within, g.weights(), dominated, within.size());
  return *best + g.weight(g.root());
}

// ---------------------------------------------------------------------------
// Trace checks.

// Empty string when the trace is valid for the hidden scenario.
inline std::string check_trace(const Instance& inst, int hidden, FeedbackModel model,
                               const PolicyTrace& t) {
  const Graph& g = inst.graph();
  const NodeSet act = inst.scenarios()[hidden].state.active;
  if (t.chosen.empty() || t.chosen.front() != g.root()) return "root not chosen first";
  NodeSet seen;
  seen.insert(g.root());
  Rational total = g.weight(g.root()), active_w = g.weight(g.root());
  for (std::size_t i = 1; i < t.chosen.size(); ++i) {
    const NodeId v = t.chosen[i];
    if (seen.contains(v)) return "node chosen twice";
    if (!dominated_set(g, seen & act).contains(v)) return "choice not dominated by active chosen nodes";
    seen.insert(v);
    total += g.weight(v);
    if (act.contains(v)) active_w += g.weight(v);
  }
  if (total != t.total_weight) return "total weight mismatch";
  if (active_w != t.active_weight) return "active weight mismatch";
  if (model == FeedbackModel::Full && !seen.is_subset_of(act)) return "inactive node chosen in full model";
  const NodeSet comp = connected_component(g, act, g.root());
  if (!is_cds(g, seen & act, comp)) return "active chosen nodes are not a CDS of the root component";
  return {};
}

// ---------------------------------------------------------------------------
// Reachable planning states and set-function property checks.

struct PlanningState {
  Realization phi;
  NodeSet chosen;
};

// Starts like a policy (full model observes N[r]) and makes `steps` random
// feasible choices against a random hidden scenario.
inline PlanningState random_planning_state(std::mt19937_64& rng, const Instance& inst,
                                           FeedbackModel model, int steps) {
  const Graph& g = inst.graph();
  const int hidden = static_cast<int>(rng() % static_cast<std::uint64_t>(inst.scenarios().size()));
  const Environment env(inst, hidden, model);
  PlanningState st{Realization::initial(g), NodeSet{}};
  st.chosen.insert(g.root());
  if (model == FeedbackModel::Full) env.reveal(g.root(), st.phi);
  for (int i = 0; i < steps; ++i) {
    const NodeSet live = prune(inst, st.phi);
    const NodeSet options = (dominated_set(g, st.chosen & st.phi.observed_active()) & live) - st.chosen;
    if (options.empty()) break;
    const auto m = options.members();
    const NodeId v = m[rng() % m.size()];
    st.chosen.insert(v);
    env.reveal(v, st.phi);
  }
  return st;
}

struct PropertyStats {
  std::int64_t checks = 0;
  std::int64_t violations = 0;
  std::string first_failure;
  void fail(const std::string& what) {
    ++violations;
    if (first_failure.empty()) first_failure = what;
  }
};

inline NodeSet subset_from_bits(const std::vector<int>& members, std::uint64_t bits) {
  NodeSet s;
  for (std::size_t i = 0; i < members.size(); ++i)
    if (bits >> i & 1) s.insert(members[i]);
  return s;
}

// Monotonicity, submodularity, properness (plr), integrality of the scaled
// forms, agreement of the scaled path with the rational route, and agreement
// with the reference definitions, on (X, Y, u) triples with X within Y.
// Exhaustive when the ground set has at most `exhaustive_max` nodes,
// otherwise `samples` random triples.
inline void check_round_properties(const RoundContext& ctx, const RefRound& rr, std::mt19937_64& rng,
                                   PropertyStats& stats, int samples = 200, int exhaustive_max = 7) {
  const auto ground = ctx.domain().members();
  const std::size_t k = ground.size();
  const ScenarioSet& sc = ctx.instance().scenarios();
  for (PolymatroidKind kind : {PolymatroidKind::Plt, PolymatroidKind::Plr}) {
    const char* name = kind == PolymatroidKind::Plt ? "f_plt" : "f_plr";
    const SubmodularFn f = ctx.as_function(kind);
    const IntegerPolymatroid ip = to_integer_polymatroid(f, kind, sc, ctx.phi());
    const ScaledPolymatroid scaled(ctx, kind);
    auto ref = [&](const NodeSet& x) {
      return kind == PolymatroidKind::Plt ? ref_f_plt(rr, x) : ref_f_plr(rr, x);
    };
    auto check_point = [&](const NodeSet& x) {
      ++stats.checks;
      const Rational v = f(x);
      if (v != ref(x)) stats.fail(std::string(name) + " disagrees with the reference definition");
      if (kind == PolymatroidKind::Plr && v > Rational(1, 2)) stats.fail("f_plr exceeds 1/2");
      try {
        const std::int64_t iv = ip(x);
        if (iv < 0) stats.fail(std::string(name) + " polymatroid negative");
        if (iv != scaled(x)) stats.fail(std::string(name) + " scaled path disagrees with rational route");
      } catch (const Error& e) {
        stats.fail(std::string(name) + ": " + e.what());
      }
    };
    auto check_triple = [&](const NodeSet& x, const NodeSet& y, int u) {
      ++stats.checks;
      const Rational fx = f(x), fy = f(y);
      if (fx > fy) stats.fail(std::string(name) + " not monotone");
      if (u >= 0) {
        NodeSet xu = x, yu = y;
        xu.insert(u);
        yu.insert(u);
        if (f(xu) - fx < f(yu) - fy) stats.fail(std::string(name) + " not submodular");
      }
    };
    ++stats.checks;
    if (ip(NodeSet{}) != 0) stats.fail(std::string(name) + " polymatroid not proper");
    if (kind == PolymatroidKind::Plr && !is_zero(f(NodeSet{}))) stats.fail("f_plr(empty) != 0");
    if (k <= static_cast<std::size_t>(exhaustive_max)) {
      const std::uint64_t all = std::uint64_t{1} << k;
      for (std::uint64_t yb = 0; yb < all; ++yb) {
        const NodeSet y = subset_from_bits(ground, yb);
        check_point(y);
        // X ranges over subsets of Y.
        for (std::uint64_t xb = yb;; xb = (xb - 1) & yb) {
          const NodeSet x = subset_from_bits(ground, xb);
          check_triple(x, y, -1);
          for (std::size_t i = 0; i < k; ++i)
            if (!(yb >> i & 1)) check_triple(x, y, ground[i]);
          if (xb == 0) break;
        }
      }
    } else {
      for (int t = 0; t < samples; ++t) {
        const std::uint64_t yb = rng() & ((std::uint64_t{1} << k) - 1);
        const std::uint64_t xb = yb & rng();
        const NodeSet x = subset_from_bits(ground, xb), y = subset_from_bits(ground, yb);
        std::vector<int> outside;
        for (std::size_t i = 0; i < k; ++i)
          if (!(yb >> i & 1)) outside.push_back(ground[i]);
        check_point(x);
        check_point(y);
        check_triple(x, y, outside.empty() ? -1 : outside[rng() % outside.size()]);
      }
    }
  }
}

}  // namespace rcds::testing
