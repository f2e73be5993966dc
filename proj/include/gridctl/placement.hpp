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

// Placement of flow-control buses: smallest sets achieving full control
// (hybrid optimum equal to the flow-model optimum) and best sets under a
// budget.
//
// The exact search is an implicit hitting-set method. A set K of buses is a
// core when controlling every bus outside K still misses the flow optimum;
// every full-control set must then contain a bus of K. The search alternates
// between a minimum hitting set H of the cores found so far and one hybrid
// LP on H: success proves H optimal, failure yields a new core, shrunk to a
// minimal one. Only buses on cycles are candidates, since controlling a bus
// whose branches are all bridges never relaxes a binding constraint.

#ifndef GRIDCTL_PLACEMENT_HPP_
#define GRIDCTL_PLACEMENT_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "gridctl/grid.hpp"
#include "gridctl/lp.hpp"
#include "gridctl/power_flow.hpp"

namespace gridctl {

enum class PlacementMode { kExact, kHeuristic, kMilp };
enum class NativeClass { kForest, kCactus, kGeneral };

const char* PlacementModeName(PlacementMode mode);
const char* NativeClassName(NativeClass native_class);

struct PlacementOptions {
  PlacementMode mode = PlacementMode::kExact;
  // Full control means objective <= flow_optimum + tol * (1 + |flow_optimum|).
  double tol = 1e-5;
  LpOptions lp;
  // Heuristic mode stops after this many hybrid LP solves.
  std::int64_t lp_budget = 400;
  // Node limit for the hitting-set and MILP searches.
  std::int64_t node_limit = 2'000'000;
  // Budget placement enumerates subsets up to this count, otherwise MILP.
  std::int64_t enumeration_limit = 20'000;
};

struct PlacementResult {
  ControlSet control_set;
  double achieved_objective = 0.0;
  double flow_optimum = 0.0;
  bool full_control = false;
  bool proven_optimal = false;
  int lower_bound = 0;  // on the size of a full-control set
  PlacementMode method = PlacementMode::kExact;
  NativeClass native_class = NativeClass::kGeneral;
  std::int64_t lp_solves = 0;
};

// Optimum of the flow model, computed by min-cost flow. With `cross_check`
// the flow LP is solved too and a disagreement throws kNumericalBreakdown.
// Throws kInfeasibleModel.
double FlowOptimum(const PowerGrid& grid, double lambda, bool cross_check = false);

NativeClass ClassifyNative(const PowerGrid& grid, const ControlSet& controls);

// Smallest full-control set. Every answer is re-verified by a fresh hybrid
// solve. Throws kInfeasibleModel for infeasible instances; when a search
// limit is hit the best set found is returned with proven_optimal = false.
PlacementResult MinFullControlSet(const PowerGrid& grid, double lambda,
                                  const PlacementOptions& options = {});

// Best hybrid objective with at most k control buses. Throws
// kInfeasibleModel when no set of that size admits a feasible flow.
PlacementResult BestUnderBudget(const PowerGrid& grid, double lambda, int k,
                                const PlacementOptions& options = {});

// Big-M formulation with one binary per bus: the DC row of branch (u, v) is
// relaxed by M_e (y_u + y_v). M_e = cap_e + 2 b_e psi_span where cap_e bounds
// |f_e| and psi_span = sum_e cap_e / b_e bounds every scaled angle.
// `budget` set: minimise cost subject to sum y <= budget.
// Otherwise: minimise sum y subject to cost <= flow optimum (+ tol).
MixedIntegerProgram BuildPlacementMilp(const PowerGrid& grid, double lambda,
                                       std::optional<int> budget, double cost_cap,
                                       std::vector<int>* bus_binary);

// Largest load factor rho = 1 / u over all control sets of exactly k
// candidate buses (all buses on cycles), where u is the capacity factor of
// MinCapacityFactor. Returns the factor and one maximising set; nullopt when
// every set is infeasible. An infinite factor means capacities never bind.
struct FrontierResult {
  double rho = 0.0;
  ControlSet control_set;
  std::int64_t lp_solves = 0;
};
std::optional<FrontierResult> MaxLoadFactor(const PowerGrid& grid, int k,
                                            const LpOptions& options = {});

}  // namespace gridctl

#endif  // GRIDCTL_PLACEMENT_HPP_
