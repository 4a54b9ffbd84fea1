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

// Adaptive policies for the robust CDS problem, each run against an
// environment that holds one hidden full realization:
//
//   * polymatroid: per round, solve the exploitation and exploration Steiner
//     instances exactly and walk the lighter one until feedback contradicts
//     the most-likely observations (full and local feedback variants);
//   * greedy: best expected newly dominated active nodes per unit weight;
//   * cds-based: follow a minimum-weight CDS of the current graph and
//     recompute it whenever an inactive node shows up;
//   * borgs: the weight-ratio variant of the two-hop local algorithm.
//
// After every planning step the graph is pruned to the nodes that belong to
// the root's active component in at least one scenario still consistent with
// the observations.

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "rcds/bitset.hpp"
#include "rcds/error.hpp"
#include "rcds/graph.hpp"
#include "rcds/parallel.hpp"
#include "rcds/polymatroid.hpp"
#include "rcds/rational.hpp"
#include "rcds/scenario.hpp"
#include "rcds/steiner.hpp"

namespace rcds {

enum class Algorithm { Polymatroid, Greedy, CdsBased, Borgs };

inline const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Polymatroid: return "polymatroid";
    case Algorithm::Greedy: return "greedy";
    case Algorithm::CdsBased: return "cds-based";
    case Algorithm::Borgs: return "borgs";
  }
  return "?";
}

inline std::optional<Algorithm> parse_algorithm(const std::string& s) {
  if (s == "polymatroid") return Algorithm::Polymatroid;
  if (s == "greedy") return Algorithm::Greedy;
  if (s == "cds-based" || s == "cds") return Algorithm::CdsBased;
  if (s == "borgs") return Algorithm::Borgs;
  return std::nullopt;
}

inline std::optional<FeedbackModel> parse_model(const std::string& s) {
  if (s == "full") return FeedbackModel::Full;
  if (s == "local") return FeedbackModel::Local;
  return std::nullopt;
}

struct Observation {
  NodeId node;
  bool active;
  friend bool operator==(const Observation&, const Observation&) = default;
};

// Per-round planning record of the polymatroid policy.
struct RoundRecord {
  NodeSet h_plt;
  std::optional<NodeSet> h_plr;  // empty when f_plr(ground) < 1/2
  Rational w_plt = 0;
  std::optional<Rational> w_plr;
  bool picked_plt = true;
};

struct PolicyTrace {
  std::vector<NodeId> chosen;                     // root first
  std::vector<std::vector<Observation>> revealed;  // parallel to `chosen`
  std::vector<std::size_t> round_starts;           // index into `chosen`
  std::vector<RoundRecord> plans;                  // polymatroid policy only
  Rational total_weight = 0;
  Rational active_weight = 0;
  int rounds = 0;

  NodeSet chosen_set() const {
    NodeSet s;
    for (NodeId v : chosen) s.insert(v);
    return s;
  }

  std::string to_string() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < chosen.size(); ++i) {
      out << chosen[i] << ":";
      for (const auto& o : revealed[i]) out << " " << o.node << (o.active ? "+" : "-");
      out << "\n";
    }
    out << "rounds " << rounds << " starts";
    for (auto s : round_starts) out << " " << s;
    out << "\nweight " << rcds::to_string(total_weight) << " active " << rcds::to_string(active_weight)
        << "\n";
    return out.str();
  }
};

// Feedback oracle over a hidden full realization.
class Environment {
 public:
  Environment(const Instance& inst, int hidden_index, FeedbackModel model)
      : inst_(&inst), hidden_(inst.scenarios()[hidden_index].state), model_(model) {}

  const FullRealization& hidden() const { return hidden_; }
  FeedbackModel model() const { return model_; }

  // States revealed by choosing v that were not already in phi. In the full
  // model an active v reveals N[v]; otherwise only v itself is revealed.
  std::vector<Observation> reveal(NodeId v, Realization& phi) const {
    std::vector<Observation> out;
    auto show = [&](NodeId u) {
      if (phi.at(u) != Obs::Unknown) return;
      const bool on = hidden_.state(u);
      phi.set(u, on);
      out.push_back({u, on});
    };
    show(v);
    if (model_ == FeedbackModel::Full && hidden_.state(v)) {
      inst_->graph().closed(v).for_each([&](int u) { show(u); });
    }
    return out;
  }

 private:
  const Instance* inst_;
  FullRealization hidden_;
  FeedbackModel model_;
};

// Node set of the pruned graph for observation phi.
inline NodeSet prune(const Instance& inst, const Realization& phi) {
  const ScenarioMask mask = inst.consistent(phi);
  if (mask.empty()) throw ZeroMassError("no scenario extends the observation");
  return inst.live_nodes(mask);
}

struct PolicyOptions {
  SolverLimits limits;
  std::uint64_t seed = 0;
};

namespace detail {

// Shared bookkeeping for one policy execution.
class PolicyRun {
 public:
  PolicyRun(const Instance& inst, int hidden_index, FeedbackModel model)
      : inst_(inst), env_(inst, hidden_index, model), phi_(Realization::initial(inst.graph())) {
    const NodeId r = inst.graph().root();
    chosen_.insert(r);
    trace_.chosen.push_back(r);
    trace_.revealed.emplace_back();
    if (model == FeedbackModel::Full) trace_.revealed.back() = env_.reveal(r, phi_);
    trace_.total_weight = inst.graph().weight(r);
    trace_.active_weight = inst.graph().weight(r);
  }

  const Instance& inst() const { return inst_; }
  const Graph& graph() const { return inst_.graph(); }
  FeedbackModel model() const { return env_.model(); }
  const Realization& phi() const { return phi_; }
  const NodeSet& chosen() const { return chosen_; }
  NodeSet active_chosen() const { return chosen_ & phi_.observed_active(); }
  NodeSet live() const { return prune(inst_, phi_); }
  ScenarioMask consistent() const { return inst_.consistent(phi_); }

  // Every live node is dominated by an active chosen node.
  bool done() const { return live().is_subset_of(dominated_set(graph(), active_chosen())); }

  const std::vector<Observation>& choose(NodeId v) {
    if (chosen_.contains(v)) throw Error("policy chose node " + std::to_string(v) + " twice");
    if (!dominated_set(graph(), active_chosen()).contains(v)) {
      throw Error("policy chose node " + std::to_string(v) + " outside N[U]");
    }
    chosen_.insert(v);
    trace_.chosen.push_back(v);
    trace_.revealed.push_back(env_.reveal(v, phi_));
    trace_.total_weight += graph().weight(v);
    if (env_.hidden().state(v)) trace_.active_weight += graph().weight(v);
    return trace_.revealed.back();
  }

  void begin_round() {
    ++trace_.rounds;
    trace_.round_starts.push_back(trace_.chosen.size());
    if (trace_.rounds > 4 * graph().size() + 8) {
      throw Error("policy failed to make progress");
    }
  }

  PolicyTrace& trace() { return trace_; }
  PolicyTrace finish() { return std::move(trace_); }

 private:
  const Instance& inst_;
  Environment env_;
  Realization phi_;
  NodeSet chosen_;
  PolicyTrace trace_;
};

// a/b > c/d for nonnegative ratios where a zero denominator means +infinity;
// ties between infinities fall to the numerators.
inline int compare_ratio(const Rational& a, const Rational& b, const Rational& c, const Rational& d) {
  const bool inf_l = is_zero(b), inf_r = is_zero(d);
  if (inf_l != inf_r) return inf_l ? 1 : -1;
  if (inf_l) return a == c ? 0 : (a > c ? 1 : -1);
  const Rational l = a * d, r = c * b;
  return l == r ? 0 : (l > r ? 1 : -1);
}

inline std::vector<Rational> planning_weights(const Graph& g, const NodeSet& zeroed) {
  std::vector<Rational> w = g.weights();
  zeroed.for_each([&](int v) { w[static_cast<std::size_t>(v)] = 0; });
  return w;
}

}  // namespace detail

// Polymatroid policy; the round structure is shared by both feedback models.
inline PolicyTrace run_polymatroid_policy(const Instance& inst, int hidden_index,
                                          FeedbackModel model, const PolicyOptions& opt = {}) {
  detail::PolicyRun run(inst, hidden_index, model);
  const Graph& g = inst.graph();
  while (!run.done()) {
    run.begin_round();
    const RoundContext ctx(inst, run.phi(), run.chosen(), model);
    const std::vector<Rational> w = detail::planning_weights(g, ctx.chosen());
    const NodeSet plannable = model == FeedbackModel::Full ? ctx.majority() : ctx.domain() - ctx.chosen();

    RoundRecord plan;
    {
      ScaledPolymatroid f(ctx, PolymatroidKind::Plt);
      SteinerInstance<ScaledPolymatroid> si{&g, ctx.domain(), g.root(), w, f, f.target()};
      plan.h_plt = solve_polymatroid_steiner(si, opt.limits).solution & plannable;
      plan.w_plt = weight_of(g, plan.h_plt);
    }
    {
      ScaledPolymatroid f(ctx, PolymatroidKind::Plr);
      // f_plr(ground) < 1/2  <=>  scaled value below M p(phi)
      if (ctx.plr_scaled(ctx.domain()) >= ctx.phi_mass()) {
        SteinerInstance<ScaledPolymatroid> si{&g, ctx.domain(), g.root(), w, f, f.target()};
        plan.h_plr = solve_polymatroid_steiner(si, opt.limits).solution & plannable;
        plan.w_plr = weight_of(g, *plan.h_plr);
      }
    }
    plan.picked_plt = !plan.w_plr || plan.w_plt <= *plan.w_plr;
    const NodeSet target = plan.picked_plt ? plan.h_plt : *plan.h_plr;
    run.trace().plans.push_back(plan);

    while (true) {
      const NodeSet eligible =
          (target - run.chosen()) & dominated_set(g, run.active_chosen());
      const NodeId v = eligible.first();
      if (v < 0) break;
      run.choose(v);
      bool consistent = true;
      if (model == FeedbackModel::Full) {
        const Realization& xi = ctx.most_likely_vector(v);
        xi.support().for_each([&](int u) {
          if (run.phi().at(u) != xi.at(u)) consistent = false;
        });
      } else {
        consistent = run.phi().observed_active().contains(v) == ctx.majority().contains(v);
      }
      if (!consistent) break;
    }
  }
  return run.finish();
}

// Greedy policy.
inline PolicyTrace run_greedy(const Instance& inst, int hidden_index, FeedbackModel model,
                              const PolicyOptions& = {}) {
  detail::PolicyRun run(inst, hidden_index, model);
  const Graph& g = inst.graph();
  const ScenarioSet& s = inst.scenarios();
  while (!run.done()) {
    run.begin_round();
    const NodeSet live = run.live();
    const ScenarioMask mask = run.consistent();
    const std::int64_t total = s.mass(mask);
    NodeSet candidates;
    NodeSet dominated_by_u;
    if (model == FeedbackModel::Full) {
      candidates = (run.phi().observed_active() & live) - run.chosen();
    } else {
      candidates = (dominated_set(g, run.active_chosen()) & live) - run.chosen();
      dominated_by_u = dominated_set(g, run.chosen());
    }
    if (candidates.empty()) throw Error("greedy has no candidate before domination");
    NodeId best = -1;
    Rational best_score = 0, best_w = 0;
    candidates.for_each([&](int v) {
      std::int64_t acc = 0;
      if (model == FeedbackModel::Full) {
        ((g.closed(v) & live) - run.phi().support()).for_each([&](int u) {
          acc += s.mass(mask & inst.active_in(u));
        });
      } else if (s.mass(mask & inst.active_in(v)) > 0) {
        ((g.closed(v) & live) - dominated_by_u).for_each([&](int u) {
          acc += s.mass(mask & inst.active_in(v) & inst.active_in(u));
        });
      }
      const Rational score(acc, total);
      const Rational& wv = g.weight(v);
      const int cmp = best < 0 ? 1 : detail::compare_ratio(score, wv, best_score, best_w);
      if (cmp > 0 || (cmp == 0 && score > best_score)) {
        best = v;
        best_score = score;
        best_w = wv;
      }
    });
    run.choose(best);
  }
  return run.finish();
}

// CDS-based policy.
inline PolicyTrace run_cds_based(const Instance& inst, int hidden_index, FeedbackModel model,
                                 const PolicyOptions& opt = {}) {
  detail::PolicyRun run(inst, hidden_index, model);
  const Graph& g = inst.graph();
  while (!run.done()) {
    run.begin_round();
    const NodeSet live = run.live();
    const std::vector<Rational> w = detail::planning_weights(g, run.chosen());
    const NodeSet plan = solve_min_weight_cds(g, live, w, opt.limits).solution;
    while (true) {
      const NodeSet eligible = (plan & dominated_set(g, run.active_chosen())) - run.chosen();
      const NodeId v = eligible.first();
      if (v < 0) break;
      bool saw_inactive = false;
      for (const auto& o : run.choose(v))
        if (!o.active) saw_inactive = true;
      if (saw_inactive) break;
    }
  }
  return run.finish();
}

// Two-hop local algorithm with the weight-ratio selection rule.
inline PolicyTrace run_borgs_local(const Instance& inst, int hidden_index, FeedbackModel model,
                                   const PolicyOptions& opt = {}) {
  detail::PolicyRun run(inst, hidden_index, model);
  const Graph& g = inst.graph();
  std::seed_seq seq{static_cast<std::uint32_t>(opt.seed), static_cast<std::uint32_t>(opt.seed >> 32),
                    static_cast<std::uint32_t>(hidden_index)};
  std::mt19937_64 rng(seq);
  while (!run.done()) {
    run.begin_round();
    const NodeSet live = run.live();
    const NodeSet covered = dominated_set(g, run.active_chosen()) & live;
    const NodeSet candidates = covered - run.chosen();
    NodeId best = -1;
    Rational best_gain = 0, best_w = 0;
    candidates.for_each([&](int v) {
      const Rational gain((g.closed(v) & (live - covered)).size());
      const Rational& wv = g.weight(v);
      const int cmp = best < 0 ? 1 : detail::compare_ratio(gain, wv, best_gain, best_w);
      if (cmp > 0 || (cmp == 0 && gain > best_gain)) {
        best = v;
        best_gain = gain;
        best_w = wv;
      }
    });
    if (best < 0) throw Error("borgs has no candidate before domination");
    run.choose(best);
    if (!run.phi().observed_active().contains(best) || run.done()) continue;
    const NodeSet live_now = run.live();
    const NodeSet pool = ((g.closed(best) & live_now) - covered) - run.chosen();
    if (pool.empty()) continue;
    const auto members = pool.members();
    std::uniform_int_distribution<std::size_t> pick(0, members.size() - 1);
    const NodeId u = members[pick(rng)];
    const NodeSet now_covered = dominated_set(g, run.active_chosen()) & live_now;
    if (!((g.closed(u) & live_now) - now_covered).empty()) run.choose(u);
  }
  return run.finish();
}

inline PolicyTrace run_policy(Algorithm a, const Instance& inst, int hidden_index,
                              FeedbackModel model, const PolicyOptions& opt = {}) {
  switch (a) {
    case Algorithm::Polymatroid: return run_polymatroid_policy(inst, hidden_index, model, opt);
    case Algorithm::Greedy: return run_greedy(inst, hidden_index, model, opt);
    case Algorithm::CdsBased: return run_cds_based(inst, hidden_index, model, opt);
    case Algorithm::Borgs: return run_borgs_local(inst, hidden_index, model, opt);
  }
  throw Error("unknown algorithm");
}

struct WavgReport {
  Rational w_avg = 0;
  Rational w_avg_active = 0;
  int max_rounds = 0;
  std::vector<PolicyTrace> traces;  // one per stored scenario
};

// Exact expectation over the stored scenarios; runs execute on up to
// `threads` workers and are reduced in scenario order.
inline WavgReport evaluate_policy_wavg(const Instance& inst, FeedbackModel model, Algorithm a,
                                       const PolicyOptions& opt = {},
                                       unsigned threads = worker_threads()) {
  const ScenarioSet& s = inst.scenarios();
  WavgReport rep;
  rep.traces.resize(static_cast<std::size_t>(s.size()));
  parallel_for(static_cast<std::size_t>(s.size()), threads, [&](std::size_t i) {
    rep.traces[i] = run_policy(a, inst, static_cast<int>(i), model, opt);
  });
  for (int i = 0; i < s.size(); ++i) {
    const auto& t = rep.traces[static_cast<std::size_t>(i)];
    rep.w_avg += t.total_weight * s.probability(i);
    rep.w_avg_active += t.active_weight * s.probability(i);
    rep.max_rounds = std::max(rep.max_rounds, t.rounds);
  }
  return rep;
}

}  // namespace rcds
