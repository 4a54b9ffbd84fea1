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

// Per-round planning state of the polymatroid policy: the majority set H, the
// reach set R, most-likely observation vectors, residual hypotheses, and the
// exploitation/exploration set functions with their integer scalings.

#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rcds/bitset.hpp"
#include "rcds/error.hpp"
#include "rcds/graph.hpp"
#include "rcds/rational.hpp"
#include "rcds/scenario.hpp"

namespace rcds {

enum class FeedbackModel { Full, Local };

inline const char* to_string(FeedbackModel m) { return m == FeedbackModel::Full ? "full" : "local"; }

enum class PolymatroidKind { Plt, Plr };

struct NodeSetHash {
  std::size_t operator()(const NodeSet& s) const { return s.hash(); }
};

// Rational-valued set function with its ground set.
struct SubmodularFn {
  std::function<Rational(const NodeSet&)> eval;
  NodeSet ground;
  Rational operator()(const NodeSet& x) const { return eval(x); }
  Rational target() const { return eval(ground); }
};

// scale * (f(X) + shift); proper and integer-valued by construction.
class IntegerPolymatroid {
 public:
  IntegerPolymatroid(SubmodularFn f, Rational shift, std::int64_t scale)
      : f_(std::move(f)), shift_(shift), scale_(scale) {}

  std::int64_t operator()(const NodeSet& x) const {
    const Rational v = (f_(x) + shift_) * scale_;
    if (v.denominator() != 1) {
      throw Error("polymatroid scaling produced a non-integer value " + to_string(v));
    }
    return v.numerator();
  }
  std::int64_t target() const { return (*this)(f_.ground); }
  const SubmodularFn& base() const { return f_; }
  const Rational& shift() const { return shift_; }
  std::int64_t scale() const { return scale_; }

 private:
  SubmodularFn f_;
  Rational shift_;
  std::int64_t scale_;
};

class RoundContext {
 public:
  // `chosen` is every node chosen so far; only its live members (the active
  // ones) take part in planning.
  RoundContext(const Instance& inst, const Realization& phi, const NodeSet& chosen,
               FeedbackModel model)
      : inst_(&inst), phi_(phi), model_(model) {
    const Graph& g = inst.graph();
    const ScenarioSet& s = inst.scenarios();
    consistent_ = inst.consistent(phi);
    mass_phi_ = s.mass(consistent_);
    if (mass_phi_ == 0) throw ZeroMassError("no scenario extends the current observation");
    live_ = inst.live_nodes(consistent_);
    chosen_ = chosen & live_;
    unobserved_ = live_ - phi.support();
    (live_ - chosen_).for_each([&](int v) {
      if (2 * s.mass(consistent_ & inst.active_in(v)) > mass_phi_) majority_.insert(v);
    });
    reach_ = connected_component(g, (majority_ | chosen_) & live_, g.root());
    if (model == FeedbackModel::Full) {
      domain_ = reach_;
      xi_nodes_ = reach_ & majority_;
    } else {
      domain_ = dominated_set(g, reach_) & live_;
      xi_nodes_ = domain_ - chosen_;
    }
    xi_consistent_.assign(static_cast<std::size_t>(g.size()), ScenarioMask{});
    xi_.assign(static_cast<std::size_t>(g.size()), Realization(g.size()));
    xi_nodes_.for_each([&](int v) {
      Realization xi(g.size());
      if (model == FeedbackModel::Full) {
        // Unobserved neighbours only; observed ones keep their recorded state.
        ((g.closed(v) & live_) - phi.support()).for_each([&](int u) {
          xi.set(u, majority_.contains(u));
        });
      } else {
        xi.set(v, majority_.contains(v));
      }
      ScenarioMask m = consistent_;
      xi.support().for_each([&](int u) {
        if (xi.observed_active().contains(u)) {
          m &= inst.active_in(u);
        } else {
          m -= inst.active_in(u);
        }
      });
      xi_[v] = std::move(xi);
      xi_consistent_[v] = m;
    });
  }

  const Instance& instance() const { return *inst_; }
  FeedbackModel model() const { return model_; }
  const Realization& phi() const { return phi_; }
  // Psi_phi
  const ScenarioMask& consistent() const { return consistent_; }
  // M * p(phi)
  std::int64_t phi_mass() const { return mass_phi_; }
  // Node set of the pruned graph.
  const NodeSet& live() const { return live_; }
  // U restricted to the pruned graph.
  const NodeSet& chosen() const { return chosen_; }
  // H
  const NodeSet& majority() const { return majority_; }
  // R
  const NodeSet& reach() const { return reach_; }
  // Ground set of the round's set functions: R (full) or N[R] (local).
  const NodeSet& domain() const { return domain_; }
  // Nodes carrying a most-likely observation vector.
  const NodeSet& xi_nodes() const { return xi_nodes_; }

  const Realization& most_likely_vector(NodeId v) const {
    inst_->graph().check(v);
    if (!xi_nodes_.contains(v)) {
      throw PreconditionError("node " + std::to_string(v) +
                              " has no most-likely observation vector this round");
    }
    return xi_[v];
  }

  // Psi_h: scenarios of Psi_phi consistent with xi_v for every v in h.
  ScenarioMask residual_hypothesis(const NodeSet& h) const {
    if (!h.is_subset_of(xi_nodes_)) {
      throw PreconditionError("residual hypothesis queried outside the round's domain");
    }
    return hypothesis_of(h);
  }

  // f_plt scaled by M.
  std::int64_t plt_scaled(const NodeSet& x) const {
    check_domain(x);
    const Instance& inst = *inst_;
    const std::int64_t m = inst.scenarios().denominator();
    const ScenarioMask hyp = hypothesis_of(relevant(x));
    NodeSet dominated;
    NodeSet tail;
    if (model_ == FeedbackModel::Full) {
      dominated = dominated_set(inst.graph(), x) & unobserved_;
      tail = unobserved_ - dominated;
    } else {
      dominated = dominated_set(inst.graph(), x & reach_) & unobserved_;
      tail = live_ - domain_;
    }
    std::int64_t total = m * dominated.size();
    tail.for_each([&](int u) {
      total += m - inst.scenarios().mass(hyp & inst.linked_in(u));
    });
    return total;
  }

  // f_plr scaled by 2 M p(phi).
  std::int64_t plr_scaled(const NodeSet& x) const {
    check_domain(x);
    const std::int64_t hyp_mass = inst_->scenarios().mass(hypothesis_of(relevant(x)));
    return std::min(mass_phi_, 2 * (mass_phi_ - hyp_mass));
  }

  Rational f_plt(const NodeSet& x) const {
    return Rational(plt_scaled(x), inst_->scenarios().denominator());
  }
  Rational f_plr(const NodeSet& x) const { return Rational(plr_scaled(x), 2 * mass_phi_); }

  SubmodularFn as_function(PolymatroidKind kind) const {
    auto self = this;
    if (kind == PolymatroidKind::Plt) {
      return {[self](const NodeSet& x) { return self->f_plt(x); }, domain_};
    }
    return {[self](const NodeSet& x) { return self->f_plr(x); }, domain_};
  }

 private:
  NodeSet relevant(const NodeSet& x) const {
    return model_ == FeedbackModel::Full ? x & majority_ : x - chosen_;
  }
  ScenarioMask hypothesis_of(const NodeSet& h) const {
    ScenarioMask m = consistent_;
    h.for_each([&](int v) { m &= xi_consistent_[v]; });
    return m;
  }
  void check_domain(const NodeSet& x) const {
    if (!x.is_subset_of(domain_)) {
      throw PreconditionError("set function evaluated outside its ground set");
    }
  }

  const Instance* inst_;
  Realization phi_;
  FeedbackModel model_;
  ScenarioMask consistent_;
  std::int64_t mass_phi_ = 0;
  NodeSet live_, chosen_, unobserved_, majority_, reach_, domain_, xi_nodes_;
  std::vector<Realization> xi_;
  std::vector<ScenarioMask> xi_consistent_;
};

// Builds the integer polymatroid f' = scale * (f - f(empty)) with scale M for
// plt and 2 M p(phi) for plr.
inline IntegerPolymatroid to_integer_polymatroid(const SubmodularFn& f, PolymatroidKind kind,
                                                 const ScenarioSet& s, const Realization& phi) {
  const std::int64_t scale = kind == PolymatroidKind::Plt
                                 ? s.denominator()
                                 : 2 * s.mass(s.consistent_mask(phi));
  return IntegerPolymatroid(f, -f(NodeSet{}), scale);
}

// Integer-path evaluator of f' for a round, memoized per queried set. This is
// the form handed to the Steiner solver; `to_integer_polymatroid` is the
// rational route it must agree with.
class ScaledPolymatroid {
 public:
  ScaledPolymatroid(const RoundContext& ctx, PolymatroidKind kind)
      : ctx_(&ctx), kind_(kind), memo_(std::make_shared<Memo>()) {
    offset_ = raw(NodeSet{});
  }

  std::int64_t operator()(const NodeSet& x) const {
    const NodeSet key = x & ctx_->domain();
    if (auto it = memo_->find(key); it != memo_->end()) return it->second;
    const std::int64_t v = raw(key) - offset_;
    memo_->emplace(key, v);
    return v;
  }
  std::int64_t target() const { return (*this)(ctx_->domain()); }

 private:
  using Memo = std::unordered_map<NodeSet, std::int64_t, NodeSetHash>;
  std::int64_t raw(const NodeSet& x) const {
    return kind_ == PolymatroidKind::Plt ? ctx_->plt_scaled(x) : ctx_->plr_scaled(x);
  }

  const RoundContext* ctx_;
  PolymatroidKind kind_;
  std::int64_t offset_ = 0;
  std::shared_ptr<Memo> memo_;
};

}  // namespace rcds
