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

// Power grid domain model: buses, branches, generators with convex
// piecewise-linear costs, branch flows, and their feasibility and cost.
//
// All powers are in MW. Internally buses are numbered 0..n-1 in file order;
// the external MATPOWER bus number is kept on Bus::id.

#ifndef GRIDCTL_GRID_HPP_
#define GRIDCTL_GRID_HPP_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gridctl/graph.hpp"
#include "gridctl/pwl.hpp"

namespace gridctl {

// Thermal limit of a branch: a finite MW value or "unbounded".
class Capacity {
 public:
  static Capacity Unbounded() { return Capacity(); }
  static Capacity Finite(double mw);

  bool unbounded() const { return unbounded_; }
  // +infinity when unbounded.
  double value() const;
  // Unbounded capacities stay unbounded.
  Capacity Scaled(double factor) const;

 private:
  Capacity() = default;
  bool unbounded_ = true;
  double mw_ = 0.0;
};

struct Bus {
  int id = 0;           // external bus number
  double demand = 0.0;  // MW, >= 0
};

struct Branch {
  int from = 0;  // internal bus index
  int to = 0;
  double resistance = 0.0;  // p.u.
  double reactance = 0.0;   // p.u., > 0
  Capacity capacity = Capacity::Unbounded();
  PiecewiseLinearConvex loss;  // loss as a function of |f|

  double susceptance() const { return 1.0 / reactance; }
};

// All generating units on one bus, merged into a single unit.
struct Generator {
  int bus = 0;
  double pmax = 0.0;
  PiecewiseLinearConvex cost;
};

class PowerGrid {
 public:
  PowerGrid() = default;
  // Validates: bus indices in range, no self-loops, positive reactance,
  // non-negative demand and pmax, at most one generator per bus.
  PowerGrid(std::string name, double base_mva, std::vector<Bus> buses,
            std::vector<Branch> branches, std::vector<Generator> generators);

  const std::string& name() const { return name_; }
  double base_mva() const { return base_mva_; }
  int num_buses() const { return static_cast<int>(buses_.size()); }
  int num_branches() const { return static_cast<int>(branches_.size()); }
  int num_generators() const { return static_cast<int>(generators_.size()); }
  const Bus& bus(int v) const { return buses_[v]; }
  const Branch& branch(int e) const { return branches_[e]; }
  const Generator& generator(int g) const { return generators_[g]; }
  const std::vector<Bus>& buses() const { return buses_; }
  const std::vector<Branch>& branches() const { return branches_; }
  const std::vector<Generator>& generators() const { return generators_; }

  // Index into generators() of the unit on bus v, if any.
  std::optional<int> generator_at(int v) const;
  bool is_consumer(int v) const { return buses_[v].demand > 0.0; }
  double total_demand() const { return total_demand_; }
  double total_generation_capacity() const;

  // Internal index of an external bus number; throws kUnknownBus.
  int BusIndex(int external_id) const;
  // Throws kUnknownBus unless 0 <= v < num_buses().
  void CheckBus(int v) const;

  // DC coupling constant of branch e in MW per radian: f = k_e * (theta_u -
  // theta_v) with k_e = base_mva / x_e.
  double coupling(int e) const { return base_mva_ / branches_[e].reactance; }

  const Multigraph& topology() const { return topology_; }

  // Copy with every capacity multiplied by `factor` (unbounded stays
  // unbounded).
  PowerGrid WithScaledCapacities(double factor) const;
  // Copy with capacities replaced one to one.
  PowerGrid WithCapacities(std::span<const Capacity> capacities) const;

 private:
  std::string name_;
  double base_mva_ = 100.0;
  std::vector<Bus> buses_;
  std::vector<Branch> branches_;
  std::vector<Generator> generators_;
  std::vector<int> generator_of_bus_;
  double total_demand_ = 0.0;
  Multigraph topology_;
};

// Signed branch flows, one value per branch in the branch's from->to
// orientation. f(to, from) is the negation.
class Flow {
 public:
  Flow() = default;
  explicit Flow(int num_branches) : values_(num_branches, 0.0) {}
  explicit Flow(std::vector<double> values) : values_(std::move(values)) {}

  int size() const { return static_cast<int>(values_.size()); }
  double operator[](int e) const { return values_[e]; }
  double& operator[](int e) { return values_[e]; }
  const std::vector<double>& values() const { return values_; }

  // Flow on branch e leaving bus `from_bus` (which must be an endpoint).
  double Directed(const PowerGrid& grid, int e, int from_bus) const;

 private:
  std::vector<double> values_;
};

// Set of flow-control buses (internal indices), kept sorted and unique.
class ControlSet {
 public:
  ControlSet() = default;
  explicit ControlSet(std::vector<int> members);
  static ControlSet All(int num_buses);

  const std::vector<int>& members() const { return members_; }
  int size() const { return static_cast<int>(members_.size()); }
  bool empty() const { return members_.empty(); }
  bool contains(int v) const;
  // Throws kUnknownBus if a member is not a bus of `grid`.
  void Validate(const PowerGrid& grid) const;

 private:
  std::vector<int> members_;
};

// Sum of the flows leaving bus v. Throws kUnknownBus.
double NetOutflow(const PowerGrid& grid, const Flow& flow, int v);
std::vector<double> NetOutflows(const PowerGrid& grid, const Flow& flow);

struct Violation {
  enum class Kind { kCapacity, kConservation, kConsumer, kGenerator };
  Kind kind = Kind::kCapacity;
  int index = 0;  // branch for kCapacity, bus otherwise
  double magnitude = 0.0;
};

const char* ViolationKindName(Violation::Kind kind);

struct FeasibilityReport {
  std::vector<Violation> violations;
  bool feasible() const { return violations.empty(); }
};

// Checks capacities, conservation at pass-through buses, demand at consumer
// buses and output bounds at generator buses. A generator bus may also carry
// demand; its output is f_net + demand and must lie in [0, pmax].
// Violations beyond tol * (1 + |limit|) are reported.
FeasibilityReport CheckFeasible(const PowerGrid& grid, const Flow& flow, double tol = 1e-6);

struct FlowCosts {
  double generation = 0.0;  // c_g
  double losses = 0.0;      // c_l
  double combined = 0.0;    // lambda * c_g + (1 - lambda) * c_l
};

// Throws kDomainExceeded when a generator output leaves [0, pmax] by more
// than tol * (1 + pmax), kInvalidArgument for lambda outside [0, 1].
FlowCosts FlowCost(const PowerGrid& grid, const Flow& flow, double lambda, double tol = 1e-6);

// Output of every generator implied by a flow: f_net + local demand.
std::vector<double> GeneratorOutputs(const PowerGrid& grid, const Flow& flow);

}  // namespace gridctl

#endif  // GRIDCTL_GRID_HPP_
