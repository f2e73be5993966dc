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

// Flow, electrical and hybrid DC power-flow models as linear programs, voltage
// angle recovery, and the circulation shifts that make a flow electrically
// feasible on cycles and cacti.
//
// The hybrid model G_F treats the buses in F as flow-control buses: the DC
// relation f = k_e (theta_u - theta_v) is imposed exactly on branches whose
// endpoints are both outside F. F = {} gives the electrical model, F = V the
// flow model.

#ifndef GRIDCTL_POWER_FLOW_HPP_
#define GRIDCTL_POWER_FLOW_HPP_

#include <optional>
#include <span>
#include <vector>

#include "gridctl/grid.hpp"
#include "gridctl/lp.hpp"

namespace gridctl {

enum class ModelType { kFlow, kElectrical, kHybrid };

const char* ModelTypeName(ModelType type);

struct ModelKind {
  ModelType type = ModelType::kElectrical;
  ControlSet controls;  // used by kHybrid only

  static ModelKind Flow() { return {ModelType::kFlow, {}}; }
  static ModelKind Electrical() { return {ModelType::kElectrical, {}}; }
  static ModelKind Hybrid(ControlSet controls) { return {ModelType::kHybrid, std::move(controls)}; }

  // Mask of buses that obey the DC relation (outside F).
  std::vector<char> NativeMask(int num_buses) const;
};

// Voltage angles in radians. Buses outside the native grid carry 0.
struct AngleAssignment {
  std::vector<double> theta;
};

// The LP for one model plus the location of every grid quantity in it.
// Branch flows are either a single signed variable (when losses carry no
// weight) or the difference of forward and backward loss-segment variables.
// Angle variables hold psi = base_mva * theta so that DC rows read
// f - (psi_u - psi_v) / x = 0; one bus per native component is pinned to 0
// by omitting its variable.
struct ModelLp {
  LinearProgram lp;
  std::vector<int> flow_var;                  // per branch, or -1
  std::vector<std::vector<int>> forward_segments;
  std::vector<std::vector<int>> backward_segments;
  std::vector<std::vector<int>> generator_segments;  // per generator
  std::vector<int> angle_var;                 // per bus, or -1
  std::vector<int> bus_row;                   // per bus
  std::vector<int> dc_row;                    // per branch, or -1

  Flow ExtractFlow(const std::vector<double>& values) const;
};

// Throws kInvalidArgument for lambda outside [0, 1].
ModelLp BuildLp(const PowerGrid& grid, const ModelKind& kind, double lambda);

struct ModelSolution {
  Flow flow;
  std::optional<AngleAssignment> angles;  // absent for the flow model
  std::vector<double> generation;         // MW per generator
  FlowCosts costs;
  double objective = 0.0;  // LP optimum
  std::int64_t iterations = 0;
};

// Throws kInfeasibleModel when no feasible flow exists, kNumericalBreakdown
// when the recovered angles do not reproduce the flows.
ModelSolution SolveModel(const PowerGrid& grid, const ModelKind& kind, double lambda,
                         const LpOptions& options = {});

// Result of an angle recovery attempt on the native buses.
struct ElectricalCheck {
  std::optional<AngleAssignment> angles;
  std::vector<int> violated_cycle;  // branch indices, when angles is empty
  double max_residual = 0.0;        // MW, over native branches
};

// Assigns angles along a spanning forest of the native grid (branches with
// both endpoints native) and checks the remaining branches. A branch is
// violated when |f - k (theta_u - theta_v)| > tol * (1 + |f|).
ElectricalCheck CheckElectricalFeasibility(const PowerGrid& grid, const Flow& flow,
                                           std::span<const char> native, double tol = 1e-9);

// Largest |f_e - k_e (theta_u - theta_v)| over native branches.
double MaxAngleResidual(const PowerGrid& grid, const Flow& flow, const AngleAssignment& angles,
                        std::span<const char> native);

struct CycleShift {
  double delta = 0.0;
  std::vector<double> flows;
};

// Circulation delta that makes sum f_i / b_i vanish around a cycle whose
// flows are given in walk orientation: delta = -(sum f_i / b_i) / (sum 1 /
// b_i). Throws kInvalidArgument for mismatched sizes, fewer than two
// branches or non-positive b.
CycleShift CycleEquivalentFlow(std::span<const double> susceptance, std::span<const double> flows);

struct GridCycleShift {
  double delta = 0.0;  // added along the walk orientation
  Flow flow;
};

// Same on a cycle of grid branches listed in walk order, using the DC
// coupling constants. Throws kNotACycle when the branches do not form a
// simple closed walk.
GridCycleShift CycleEquivalentFlow(const PowerGrid& grid, std::span<const int> cycle,
                                   const Flow& flow);

struct CactusShift {
  Flow flow;
  std::vector<double> deltas;             // one per cycle block of G - F
  std::vector<int> capacity_violations;   // branches now over capacity
};

// Applies the cycle shift on every cycle block of G - F. Net out-flows are
// unchanged. Throws kNotACactus when G - F is not a cactus.
CactusShift CactusEquivalentFlow(const PowerGrid& grid, const ControlSet& controls,
                                 const Flow& flow);

// Smallest factor u such that scaling every finite capacity by u leaves the
// model feasible (0 when capacities do not matter); losses are ignored.
// Returns nullopt when the model is infeasible at any scale. The load factor
// frontier is 1 / u.
std::optional<double> MinCapacityFactor(const PowerGrid& grid, const ModelKind& kind,
                                        const LpOptions& options = {});

}  // namespace gridctl

#endif  // GRIDCTL_POWER_FLOW_HPP_
