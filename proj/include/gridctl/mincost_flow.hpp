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

// The flow model as a min-cost s-t flow problem. Convex piecewise-linear
// costs become parallel arcs, one per linear piece, so that a minimum-cost
// flow fills the cheaper pieces first. Solved by successive shortest paths
// with node potentials.

#ifndef GRIDCTL_MINCOST_FLOW_HPP_
#define GRIDCTL_MINCOST_FLOW_HPP_

#include <vector>

#include "gridctl/grid.hpp"

namespace gridctl {

struct NetworkArc {
  int tail = 0;
  int head = 0;
  double capacity = 0.0;  // MW
  double cost = 0.0;      // per MW
};

// Where an arc of the reduced network comes from.
struct ArcOrigin {
  enum class Kind { kGenerator, kBranchForward, kBranchBackward, kConsumer, kOther };
  Kind kind = Kind::kOther;
  int index = 0;  // generator, branch or bus index
  int piece = 0;  // linear piece of the cost function
};

struct FlowNetwork {
  int num_nodes = 0;
  int source = 0;
  int sink = 0;
  double target = 0.0;       // required s-t flow value b
  double cost_offset = 0.0;  // constant part of the cost functions
  std::vector<NetworkArc> arcs;
  std::vector<ArcOrigin> origin;  // parallel to arcs
};

// Nodes 0..n-1 are the buses, n the source, n+1 the sink. Generator arcs s->g
// carry lambda * slope per cost piece, each branch yields two directed
// copies split per loss piece with cost (1 - lambda) * slope, consumer arcs
// u->t have capacity d_u. Unbounded branch capacities are capped at b.
// Throws kUnboundedCapacityOnCostlyEdge if a costly piece has no finite
// width.
FlowNetwork ReduceToNetwork(const PowerGrid& grid, double lambda);

struct NetworkFlow {
  bool feasible = false;
  double value = 0.0;  // achieved s-t flow; the max flow when infeasible
  double cost = 0.0;   // sum cost * flow + cost_offset
  std::vector<double> arc_flow;
};

// Minimum-cost flow of value net.target, or the maximum flow value when the
// target cannot be met.
NetworkFlow SolveMinCost(const FlowNetwork& net);

// True when the residual network of `flow` contains a cycle of cost below
// -tol (so the flow is not of minimum cost).
bool HasNegativeResidualCycle(const FlowNetwork& net, const NetworkFlow& flow, double tol = 1e-9);

// Per branch: forward copies minus backward copies.
Flow LiftFlow(const FlowNetwork& net, const NetworkFlow& flow, const PowerGrid& grid);

}  // namespace gridctl

#endif  // GRIDCTL_MINCOST_FLOW_HPP_
