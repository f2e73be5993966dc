// Copyright 2026 The gridctl Authors
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

#include "gridctl/placement.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <utility>

#include "gridctl/error.hpp"
#include "gridctl/graph.hpp"
#include "gridctl/mincost_flow.hpp"

namespace gridctl {

const char* PlacementModeName(PlacementMode mode) {
  switch (mode) {
    case PlacementMode::kExact: return "exact";
    case PlacementMode::kHeuristic: return "heuristic";
    case PlacementMode::kMilp: return "milp";
  }
  return "unknown";
}

const char* NativeClassName(NativeClass native_class) {
  switch (native_class) {
    case NativeClass::kForest: return "forest";
    case NativeClass::kCactus: return "cactus";
    case NativeClass::kGeneral: return "general";
  }
  return "unknown";
}

double FlowOptimum(const PowerGrid& grid, double lambda, bool cross_check) {
  const FlowNetwork net = ReduceToNetwork(grid, lambda);
  const NetworkFlow flow = SolveMinCost(net);
  if (!flow.feasible) {
    throw Error(ErrorCode::kInfeasibleModel, "flow model has no feasible flow");
  }
  if (cross_check) {
    const double lp = SolveModel(grid, ModelKind::Flow(), lambda).objective;
    if (std::abs(lp - flow.cost) > 1e-6 * (1.0 + std::abs(lp))) {
      throw Error(ErrorCode::kNumericalBreakdown,
                  "min-cost flow and LP disagree on the flow optimum");
    }
  }
  return flow.cost;
}

NativeClass ClassifyNative(const PowerGrid& grid, const ControlSet& controls) {
  controls.Validate(grid);
  const Multigraph::Subgraph sub = grid.topology().WithoutVertices(controls.members());
  if (IsForest(sub.graph)) return NativeClass::kForest;
  if (IsCactus(sub.graph)) return NativeClass::kCactus;
  return NativeClass::kGeneral;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Bit set over bus indices, for subset tests against known outcomes.
class BusMask {
 public:
  BusMask(int n, const std::vector<int>& members) : words_((n + 63) / 64, 0) {
    for (int v : members) words_[v / 64] |= std::uint64_t{1} << (v % 64);
  }
  bool SubsetOf(const BusMask& other) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      if (words_[i] & ~other.words_[i]) return false;
    }
    return true;
  }

 private:
  std::vector<std::uint64_t> words_;
};

// Hybrid objectives of control sets, with memoisation and the two monotone
// shortcuts: supersets of a full-control set have full control, subsets of a
// failing set fail.
class Evaluator {
 public:
  Evaluator(const PowerGrid& grid, double lambda, const PlacementOptions& options)
      : grid_(grid), lambda_(lambda), options_(options) {
    flow_optimum_ = FlowOptimum(grid, lambda);
    target_ = flow_optimum_ + options.tol * (1.0 + std::abs(flow_optimum_));
    const FlowNetwork net = ReduceToNetwork(grid, lambda);
    reference_ = LiftFlow(net, SolveMinCost(net), grid);
  }

  double flow_optimum() const { return flow_optimum_; }
  double target() const { return target_; }
  std::int64_t lp_solves() const { return lp_solves_; }

  // Hybrid optimum, or +inf when infeasible.
  double Objective(const std::vector<int>& controls) {
    auto it = cache_.find(controls);
    if (it != cache_.end()) return it->second;
    ++lp_solves_;
    double value = kInf;
    try {
      value = SolveModel(grid_, ModelKind::Hybrid(ControlSet(controls)), lambda_, options_.lp).objective;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kInfeasibleModel) throw;
    }
    cache_.emplace(controls, value);
    return value;
  }

  bool Full(const std::vector<int>& controls) {
    const BusMask mask(grid_.num_buses(), controls);
    for (const BusMask& f : full_) {
      if (f.SubsetOf(mask)) return true;
    }
    for (const BusMask& f : failing_) {
      if (mask.SubsetOf(f)) return false;
    }
    bool full = false;
    // A flow-model optimum that already obeys the DC relation on G - F
    // certifies full control without an LP.
    const std::vector<char> native = ModelKind::Hybrid(ControlSet(controls)).NativeMask(grid_.num_buses());
    if (CheckElectricalFeasibility(grid_, reference_, native, 1e-9).angles) {
      full = true;
    } else {
      full = Objective(controls) <= target_;
    }
    (full ? full_ : failing_).push_back(mask);
    return full;
  }

 private:
  const PowerGrid& grid_;
  double lambda_;
  const PlacementOptions& options_;
  double flow_optimum_ = 0.0;
  double target_ = 0.0;
  Flow reference_;
  std::map<std::vector<int>, double> cache_;
  std::vector<BusMask> full_;
  std::vector<BusMask> failing_;
  std::int64_t lp_solves_ = 0;
};

std::vector<int> Sorted(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  return v;
}

std::vector<int> Minus(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<int> Union(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

// Minimal core inside `candidates` (QuickXplain). A set K is a core when
// controlling candidates - K, the complement within the cyclic buses, fails.
class CoreShrinker {
 public:
  CoreShrinker(Evaluator& eval, std::vector<int> cyclic) : eval_(eval), cyclic_(std::move(cyclic)) {}

  std::vector<int> Shrink(const std::vector<int>& candidates) { return Explain({}, false, candidates); }

 private:
  bool IsCore(const std::vector<int>& k) { return !eval_.Full(Minus(cyclic_, Sorted(k))); }

  std::vector<int> Explain(const std::vector<int>& base, bool changed, const std::vector<int>& cands) {
    if (changed && IsCore(base)) return {};
    if (cands.size() == 1) return cands;
    const std::size_t half = cands.size() / 2;
    const std::vector<int> first(cands.begin(), cands.begin() + half);
    const std::vector<int> second(cands.begin() + half, cands.end());
    const std::vector<int> d2 = Explain(Union(base, first), !first.empty(), second);
    const std::vector<int> d1 = Explain(Union(base, d2), !d2.empty(), first);
    return Union(d1, d2);
  }

  Evaluator& eval_;
  std::vector<int> cyclic_;
};

PlacementResult Finish(const PowerGrid& grid, double lambda, const PlacementOptions& options,
                       std::vector<int> controls, double flow_optimum) {
  PlacementResult out;
  out.control_set = ControlSet(std::move(controls));
  out.flow_optimum = flow_optimum;
  out.method = options.mode;
  // Re-verified from scratch, independently of any cached or MILP value.
  out.achieved_objective =
      SolveModel(grid, ModelKind::Hybrid(out.control_set), lambda, options.lp).objective;
  out.full_control = std::abs(out.achieved_objective - flow_optimum) <=
                     options.tol * (1.0 + std::abs(flow_optimum));
  out.native_class = ClassifyNative(grid, out.control_set);
  return out;
}

std::vector<int> MilpControls(const PowerGrid& grid, const LpSolution& s, const std::vector<int>& y) {
  std::vector<int> controls;
  for (int v = 0; v < grid.num_buses(); ++v) {
    if (s.values[y[v]] > 0.5) controls.push_back(v);
  }
  return controls;
}

PlacementResult MinFullControlMilp(const PowerGrid& grid, double lambda,
                                   const PlacementOptions& options) {
  const double flow_opt = FlowOptimum(grid, lambda);
  const double cap = flow_opt + options.tol * (1.0 + std::abs(flow_opt));
  std::vector<int> y;
  const MixedIntegerProgram mip = BuildPlacementMilp(grid, lambda, std::nullopt, cap, &y);
  MipOptions mo;
  mo.lp = options.lp;
  mo.node_limit = options.node_limit;
  const MipResult r = SolveMip(mip, mo);
  if (!r.solution) {
    if (r.status == MipStatus::kNodeLimit) {
      throw Error(ErrorCode::kNodeLimitReached, "placement MILP hit its node limit without a solution");
    }
    throw Error(ErrorCode::kInfeasibleModel, "no control set reaches the flow optimum");
  }
  PlacementResult out = Finish(grid, lambda, options, MilpControls(grid, *r.solution, y), flow_opt);
  out.proven_optimal = r.proven_optimal;
  out.lower_bound = std::max(0, static_cast<int>(std::ceil(r.best_bound - 1e-6)));
  if (out.proven_optimal) out.lower_bound = out.control_set.size();
  out.lp_solves = r.nodes;
  return out;
}

}  // namespace

PlacementResult MinFullControlSet(const PowerGrid& grid, double lambda,
                                  const PlacementOptions& options) {
  if (options.mode == PlacementMode::kMilp) return MinFullControlMilp(grid, lambda, options);

  Evaluator eval(grid, lambda, options);
  auto done = [&](std::vector<int> controls, bool proven, int lower_bound) {
    PlacementResult out = Finish(grid, lambda, options, std::move(controls), eval.flow_optimum());
    out.proven_optimal = proven;
    out.lower_bound = proven ? out.control_set.size() : lower_bound;
    out.lp_solves = eval.lp_solves() + 1;
    return out;
  };

  if (eval.Full({})) return done({}, true, 0);

  // Every cyclic bus controlled is equivalent to the flow model.
  const std::vector<int> cyclic = CyclicVertices(grid.topology());
  if (eval.Objective(cyclic) == kInf) {
    throw Error(ErrorCode::kInfeasibleModel, "flow model has no feasible flow");
  }

  // Warm starts: a forest FVS always works on feasible instances, a cactus
  // FVS often does.
  std::vector<int> incumbent = cyclic;
  for (const FeedbackTarget target : {FeedbackTarget::kCactus, FeedbackTarget::kForest}) {
    const VertexSetResult fvs = MinFeedbackSet(grid.topology(), target);
    if (static_cast<int>(fvs.vertices.size()) < static_cast<int>(incumbent.size()) &&
        eval.Full(fvs.vertices)) {
      incumbent = fvs.vertices;
    }
  }
  // Drop controllers the warm start does not need, in bus order.
  for (std::size_t i = 0; i < incumbent.size();) {
    std::vector<int> smaller = incumbent;
    smaller.erase(smaller.begin() + static_cast<std::ptrdiff_t>(i));
    if (eval.Full(smaller)) {
      incumbent = std::move(smaller);
    } else {
      ++i;
    }
  }

  // Implicit hitting sets over cyclic-bus indices.
  std::vector<int> position(grid.num_buses(), -1);
  for (std::size_t i = 0; i < cyclic.size(); ++i) position[cyclic[i]] = static_cast<int>(i);
  std::vector<std::vector<int>> cores;
  CoreShrinker shrinker(eval, cyclic);
  int lower_bound = 1;
  bool proven = false;
  while (true) {
    const HittingSetResult hs = MinHittingSet(static_cast<int>(cyclic.size()), cores,
                                              static_cast<int>(incumbent.size()), options.node_limit);
    lower_bound = std::max(lower_bound, hs.lower_bound);
    if (!hs.elements) {
      proven = hs.proven_optimal;
      break;
    }
    std::vector<int> h;
    for (int i : *hs.elements) h.push_back(cyclic[i]);
    h = Sorted(std::move(h));
    if (eval.Full(h)) {
      incumbent = h;
      proven = hs.proven_optimal;
      break;
    }
    if (options.mode == PlacementMode::kHeuristic && eval.lp_solves() >= options.lp_budget) break;
    const std::vector<int> core = shrinker.Shrink(Minus(cyclic, h));
    if (core.empty()) {
      throw Error(ErrorCode::kNumericalBreakdown, "core extraction returned an empty set");
    }
    std::vector<int> indices;
    for (int v : core) indices.push_back(position[v]);
    cores.push_back(Sorted(std::move(indices)));
  }
  PlacementResult out = done(incumbent, proven, std::min(lower_bound, static_cast<int>(incumbent.size())));
  out.method = proven ? PlacementMode::kExact : PlacementMode::kHeuristic;
  return out;
}

namespace {

// C(n, k) saturated at `limit` + 1.
std::int64_t Binomial(int n, int k, std::int64_t limit) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  double c = 1.0;
  for (int i = 1; i <= k; ++i) {
    c = c * (n - k + i) / i;
    if (c > static_cast<double>(limit)) return limit + 1;
  }
  return static_cast<std::int64_t>(std::llround(c));
}

// Calls visit(subset) for every k-subset of `items` in lexicographic order
// until visit returns false.
template <typename Visit>
void ForEachSubset(const std::vector<int>& items, int k, Visit visit) {
  const int n = static_cast<int>(items.size());
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  std::vector<int> subset(k);
  while (true) {
    for (int i = 0; i < k; ++i) subset[i] = items[idx[i]];
    if (!visit(subset)) return;
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

PlacementResult BestUnderBudget(const PowerGrid& grid, double lambda, int k,
                                const PlacementOptions& options) {
  if (k < 0) throw Error(ErrorCode::kInvalidArgument, "budget must be non-negative");
  const std::vector<int> cyclic = CyclicVertices(grid.topology());
  const int size = std::min<int>(k, static_cast<int>(cyclic.size()));

  // The flow optimum is only a lower bound here; an infeasible flow model
  // means every hybrid model is infeasible too.
  const double flow_opt = FlowOptimum(grid, lambda);
  const double target = flow_opt + options.tol * (1.0 + std::abs(flow_opt));

  const std::int64_t count = Binomial(static_cast<int>(cyclic.size()), size, options.enumeration_limit);
  if (options.mode == PlacementMode::kMilp || count > options.enumeration_limit) {
    std::vector<int> y;
    const MixedIntegerProgram mip = BuildPlacementMilp(grid, lambda, k, kInf, &y);
    MipOptions mo;
    mo.lp = options.lp;
    mo.node_limit = options.node_limit;
    const MipResult r = SolveMip(mip, mo);
    if (!r.solution) {
      if (r.status == MipStatus::kNodeLimit) {
        throw Error(ErrorCode::kNodeLimitReached, "budget MILP hit its node limit without a solution");
      }
      throw Error(ErrorCode::kInfeasibleModel, "no control set within the budget admits a feasible flow");
    }
    PlacementResult out = Finish(grid, lambda, options, MilpControls(grid, *r.solution, y), flow_opt);
    out.method = PlacementMode::kMilp;
    out.proven_optimal = r.proven_optimal;
    out.lp_solves = r.nodes;
    return out;
  }

  std::int64_t solves = 0;
  double best = kInf;
  std::vector<int> best_set;
  ForEachSubset(cyclic, size, [&](const std::vector<int>& subset) {
    ++solves;
    double value = kInf;
    try {
      value = SolveModel(grid, ModelKind::Hybrid(ControlSet(subset)), lambda, options.lp).objective;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kInfeasibleModel) throw;
    }
    if (value < best - 1e-9 * (1.0 + std::abs(best == kInf ? 0.0 : best))) {
      best = value;
      best_set = subset;
    }
    return best > target;
  });
  if (best == kInf) {
    throw Error(ErrorCode::kInfeasibleModel, "no control set within the budget admits a feasible flow");
  }
  PlacementResult out = Finish(grid, lambda, options, best_set, flow_opt);
  out.method = PlacementMode::kExact;
  out.proven_optimal = true;
  out.lp_solves = solves + 1;
  return out;
}

MixedIntegerProgram BuildPlacementMilp(const PowerGrid& grid, double lambda,
                                       std::optional<int> budget, double cost_cap,
                                       std::vector<int>* bus_binary) {
  ModelLp model = BuildLp(grid, ModelKind::Flow(), lambda);
  LinearProgram& lp = model.lp;
  const int n = grid.num_buses();
  const int m = grid.num_branches();
  const double demand = grid.total_demand();

  // Flow bounds: |f_e| <= min(c_e, 2 D), matching the loss-sampling domain.
  std::vector<double> cap(m);
  double psi_span = 0.0;
  for (int e = 0; e < m; ++e) {
    cap[e] = std::min(grid.branch(e).capacity.value(), 2.0 * std::max(demand, 1.0));
    if (model.flow_var[e] >= 0) lp.SetBounds(model.flow_var[e], -cap[e], cap[e]);
    for (const auto* segments : {&model.forward_segments[e], &model.backward_segments[e]}) {
      double used = 0.0;
      for (int j : *segments) {
        const double width = std::max(0.0, std::min(lp.variable(j).upper, cap[e] - used));
        lp.SetBounds(j, 0.0, width);
        used += width;
      }
    }
    psi_span += cap[e] / grid.branch(e).susceptance();
  }

  // Scaled angles psi = base * theta, all free; no bus is pinned so each
  // native component can be shifted into [0, psi_span].
  std::vector<int> psi(n), y(n);
  for (int v = 0; v < n; ++v) {
    psi[v] = lp.AddVariable("psi" + std::to_string(grid.bus(v).id), -kInfinity, kInfinity, 0.0);
  }
  for (int v = 0; v < n; ++v) {
    y[v] = lp.AddVariable("y" + std::to_string(grid.bus(v).id), 0.0, 1.0, 0.0);
  }
  for (int e = 0; e < m; ++e) {
    const Branch& br = grid.branch(e);
    const double b = br.susceptance();
    const double big_m = 2.0 * std::max(cap[e], b * psi_span);
    std::vector<Term> flow_terms;
    if (model.flow_var[e] >= 0) {
      flow_terms.push_back({model.flow_var[e], 1.0});
    } else {
      for (int j : model.forward_segments[e]) flow_terms.push_back({j, 1.0});
      for (int j : model.backward_segments[e]) flow_terms.push_back({j, -1.0});
    }
    for (const double sign : {1.0, -1.0}) {
      std::vector<Term> terms;
      for (const Term& t : flow_terms) terms.push_back({t.var, sign * t.coef});
      terms.push_back({psi[br.from], -sign * b});
      terms.push_back({psi[br.to], sign * b});
      terms.push_back({y[br.from], -big_m});
      if (br.to != br.from) terms.push_back({y[br.to], -big_m});
      lp.AddConstraint((sign > 0 ? "bigm+" : "bigm-") + std::to_string(e), std::move(terms),
                       RowSense::kLessEqual, 0.0);
    }
  }

  if (budget) {
    std::vector<Term> terms;
    for (int v = 0; v < n; ++v) terms.push_back({y[v], 1.0});
    lp.AddConstraint("budget", std::move(terms), RowSense::kLessEqual, *budget);
  } else {
    // Cost row, then count the controls instead.
    std::vector<Term> terms;
    for (int j = 0; j < lp.num_variables(); ++j) {
      if (lp.variable(j).cost != 0.0) terms.push_back({j, lp.variable(j).cost});
    }
    lp.AddConstraint("cost", std::move(terms), RowSense::kLessEqual, cost_cap - lp.objective_offset());
    for (int j = 0; j < lp.num_variables(); ++j) lp.SetCost(j, 0.0);
    lp.set_objective_offset(0.0);
    for (int v = 0; v < n; ++v) lp.SetCost(y[v], 1.0);
  }

  MixedIntegerProgram mip;
  mip.base = std::move(lp);
  mip.binaries = y;
  if (bus_binary) *bus_binary = y;
  return mip;
}

std::optional<FrontierResult> MaxLoadFactor(const PowerGrid& grid, int k, const LpOptions& options) {
  if (k < 0) throw Error(ErrorCode::kInvalidArgument, "budget must be non-negative");
  const std::vector<int> cyclic = CyclicVertices(grid.topology());
  const int size = std::min<int>(k, static_cast<int>(cyclic.size()));
  // The flow model bounds every hybrid model; stop once it is reached.
  const std::optional<double> floor = MinCapacityFactor(grid, ModelKind::Flow(), options);
  if (!floor) return std::nullopt;

  FrontierResult out;
  out.lp_solves = 1;
  double best = kInf;
  ForEachSubset(cyclic, size, [&](const std::vector<int>& subset) {
    ++out.lp_solves;
    const std::optional<double> u =
        MinCapacityFactor(grid, ModelKind::Hybrid(ControlSet(subset)), options);
    if (u && (best == kInf || *u < best - 1e-12 * (1.0 + best))) {
      best = *u;
      out.control_set = ControlSet(subset);
    }
    return best > *floor * (1.0 + 1e-9) + 1e-12;
  });
  if (best == kInf) return std::nullopt;
  out.rho = best > 0.0 ? 1.0 / best : kInf;
  return out;
}

}  // namespace gridctl
