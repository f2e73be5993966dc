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

#include "gridctl/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gridctl/error.hpp"

namespace gridctl {

Capacity Capacity::Finite(double mw) {
  if (!(mw >= 0.0) || !std::isfinite(mw)) {
    throw Error(ErrorCode::kInvalidArgument, "capacity must be finite and non-negative");
  }
  Capacity c;
  c.unbounded_ = false;
  c.mw_ = mw;
  return c;
}

double Capacity::value() const {
  return unbounded_ ? std::numeric_limits<double>::infinity() : mw_;
}

Capacity Capacity::Scaled(double factor) const {
  if (unbounded_) return *this;
  return Finite(mw_ * factor);
}

PowerGrid::PowerGrid(std::string name, double base_mva, std::vector<Bus> buses,
                     std::vector<Branch> branches, std::vector<Generator> generators)
    : name_(std::move(name)),
      base_mva_(base_mva),
      buses_(std::move(buses)),
      branches_(std::move(branches)),
      generators_(std::move(generators)) {
  if (!(base_mva_ > 0.0)) throw Error(ErrorCode::kInvalidArgument, "base MVA must be positive");
  const int n = num_buses();
  topology_ = Multigraph(n);
  for (const Bus& b : buses_) {
    if (!(b.demand >= 0.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "bus " + std::to_string(b.id) + " has negative demand");
    }
    total_demand_ += b.demand;
  }
  for (const Branch& br : branches_) {
    if (br.from < 0 || br.from >= n || br.to < 0 || br.to >= n) {
      throw Error(ErrorCode::kUnknownBus, "branch endpoint out of range");
    }
    if (br.from == br.to) throw Error(ErrorCode::kInvalidArgument, "branch is a self-loop");
    if (!(br.reactance > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument, "branch reactance must be positive");
    }
    topology_.AddEdge(br.from, br.to);
  }
  generator_of_bus_.assign(n, -1);
  for (int g = 0; g < num_generators(); ++g) {
    const Generator& gen = generators_[g];
    if (gen.bus < 0 || gen.bus >= n) throw Error(ErrorCode::kUnknownBus, "generator bus out of range");
    if (generator_of_bus_[gen.bus] >= 0) {
      throw Error(ErrorCode::kInvalidArgument, "two generators on one bus");
    }
    if (!(gen.pmax >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "negative generator pmax");
    generator_of_bus_[gen.bus] = g;
  }
}

std::optional<int> PowerGrid::generator_at(int v) const {
  CheckBus(v);
  if (generator_of_bus_[v] < 0) return std::nullopt;
  return generator_of_bus_[v];
}

double PowerGrid::total_generation_capacity() const {
  double total = 0.0;
  for (const Generator& g : generators_) total += g.pmax;
  return total;
}

int PowerGrid::BusIndex(int external_id) const {
  for (int v = 0; v < num_buses(); ++v) {
    if (buses_[v].id == external_id) return v;
  }
  throw Error(ErrorCode::kUnknownBus, "unknown bus " + std::to_string(external_id));
}

void PowerGrid::CheckBus(int v) const {
  if (v < 0 || v >= num_buses()) {
    throw Error(ErrorCode::kUnknownBus, "bus index " + std::to_string(v) + " out of range");
  }
}

PowerGrid PowerGrid::WithScaledCapacities(double factor) const {
  PowerGrid out = *this;
  for (Branch& b : out.branches_) b.capacity = b.capacity.Scaled(factor);
  return out;
}

PowerGrid PowerGrid::WithCapacities(std::span<const Capacity> capacities) const {
  if (static_cast<int>(capacities.size()) != num_branches()) {
    throw Error(ErrorCode::kInvalidArgument, "one capacity per branch expected");
  }
  PowerGrid out = *this;
  for (int e = 0; e < num_branches(); ++e) out.branches_[e].capacity = capacities[e];
  return out;
}

double Flow::Directed(const PowerGrid& grid, int e, int from_bus) const {
  const Branch& b = grid.branch(e);
  if (from_bus == b.from) return values_[e];
  if (from_bus == b.to) return -values_[e];
  throw Error(ErrorCode::kInvalidArgument, "bus is not an endpoint of the branch");
}

ControlSet::ControlSet(std::vector<int> members) : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

ControlSet ControlSet::All(int num_buses) {
  std::vector<int> all(num_buses);
  for (int v = 0; v < num_buses; ++v) all[v] = v;
  return ControlSet(std::move(all));
}

bool ControlSet::contains(int v) const {
  return std::binary_search(members_.begin(), members_.end(), v);
}

void ControlSet::Validate(const PowerGrid& grid) const {
  for (int v : members_) grid.CheckBus(v);
}

namespace {

void CheckFlowSize(const PowerGrid& grid, const Flow& flow) {
  if (flow.size() != grid.num_branches()) {
    throw Error(ErrorCode::kInvalidArgument, "flow must have one value per branch");
  }
}

}  // namespace

double NetOutflow(const PowerGrid& grid, const Flow& flow, int v) {
  grid.CheckBus(v);
  CheckFlowSize(grid, flow);
  double sum = 0.0;
  for (int e : grid.topology().incident(v)) sum += flow.Directed(grid, e, v);
  return sum;
}

std::vector<double> NetOutflows(const PowerGrid& grid, const Flow& flow) {
  CheckFlowSize(grid, flow);
  std::vector<double> net(grid.num_buses(), 0.0);
  for (int e = 0; e < grid.num_branches(); ++e) {
    net[grid.branch(e).from] += flow[e];
    net[grid.branch(e).to] -= flow[e];
  }
  return net;
}

const char* ViolationKindName(Violation::Kind kind) {
  switch (kind) {
    case Violation::Kind::kCapacity: return "capacity";
    case Violation::Kind::kConservation: return "conservation";
    case Violation::Kind::kConsumer: return "consumer";
    case Violation::Kind::kGenerator: return "generator";
  }
  return "unknown";
}

FeasibilityReport CheckFeasible(const PowerGrid& grid, const Flow& flow, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorCode::kInvalidArgument, "tolerance must be positive");
  FeasibilityReport report;
  const std::vector<double> net = NetOutflows(grid, flow);
  for (int e = 0; e < grid.num_branches(); ++e) {
    const Capacity& c = grid.branch(e).capacity;
    if (c.unbounded()) continue;
    const double excess = std::abs(flow[e]) - c.value();
    if (excess > tol * (1.0 + c.value())) {
      report.violations.push_back({Violation::Kind::kCapacity, e, excess});
    }
  }
  for (int v = 0; v < grid.num_buses(); ++v) {
    const double demand = grid.bus(v).demand;
    const std::optional<int> g = grid.generator_at(v);
    if (g) {
      const double output = net[v] + demand;
      const double pmax = grid.generator(*g).pmax;
      const double excess = std::max(-output, output - pmax);
      if (excess > tol * (1.0 + pmax)) {
        report.violations.push_back({Violation::Kind::kGenerator, v, excess});
      }
    } else if (demand > 0.0) {
      const double miss = std::abs(net[v] + demand);
      if (miss > tol * (1.0 + demand)) {
        report.violations.push_back({Violation::Kind::kConsumer, v, miss});
      }
    } else if (std::abs(net[v]) > tol) {
      report.violations.push_back({Violation::Kind::kConservation, v, std::abs(net[v])});
    }
  }
  return report;
}

std::vector<double> GeneratorOutputs(const PowerGrid& grid, const Flow& flow) {
  const std::vector<double> net = NetOutflows(grid, flow);
  std::vector<double> out(grid.num_generators());
  for (int g = 0; g < grid.num_generators(); ++g) {
    const int v = grid.generator(g).bus;
    out[g] = net[v] + grid.bus(v).demand;
  }
  return out;
}

FlowCosts FlowCost(const PowerGrid& grid, const Flow& flow, double lambda, double tol) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "lambda must lie in [0, 1]");
  }
  FlowCosts costs;
  const std::vector<double> outputs = GeneratorOutputs(grid, flow);
  for (int g = 0; g < grid.num_generators(); ++g) {
    const Generator& gen = grid.generator(g);
    const double p = outputs[g];
    if (p < -tol * (1.0 + gen.pmax) || p > gen.pmax + tol * (1.0 + gen.pmax)) {
      throw Error(ErrorCode::kDomainExceeded,
                  "generator at bus " + std::to_string(grid.bus(gen.bus).id) +
                      " outside its cost domain");
    }
    costs.generation += gen.cost(std::clamp(p, 0.0, gen.pmax));
  }
  for (int e = 0; e < grid.num_branches(); ++e) {
    costs.losses += grid.branch(e).loss(std::abs(flow[e]));
  }
  costs.combined = lambda * costs.generation + (1.0 - lambda) * costs.losses;
  return costs;
}

}  // namespace gridctl
