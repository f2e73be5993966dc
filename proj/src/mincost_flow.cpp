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

#include "gridctl/mincost_flow.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <utility>

#include "gridctl/error.hpp"

namespace gridctl {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kCapacityEps = 1e-12;

void AddArc(FlowNetwork& net, int tail, int head, double capacity, double cost, ArcOrigin origin) {
  if (!std::isfinite(capacity) && cost != 0.0) {
    throw Error(ErrorCode::kUnboundedCapacityOnCostlyEdge,
                "costly piecewise-linear piece without a finite width");
  }
  net.arcs.push_back(NetworkArc{tail, head, capacity, cost});
  net.origin.push_back(origin);
}

// Residual graph: arc 2i is the forward residual of network arc i, 2i+1 its
// reverse.
struct Residual {
  explicit Residual(const FlowNetwork& net, const std::vector<double>& flow)
      : adjacency(net.num_nodes) {
    for (std::size_t i = 0; i < net.arcs.size(); ++i) {
      const NetworkArc& a = net.arcs[i];
      adjacency[a.tail].push_back(static_cast<int>(2 * i));
      adjacency[a.head].push_back(static_cast<int>(2 * i + 1));
    }
    this->net = &net;
    this->flow = &flow;
  }
  int tail(int r) const { const auto& a = net->arcs[r / 2]; return r % 2 ? a.head : a.tail; }
  int head(int r) const { const auto& a = net->arcs[r / 2]; return r % 2 ? a.tail : a.head; }
  double capacity(int r) const {
    const double f = (*flow)[r / 2];
    return r % 2 ? f : net->arcs[r / 2].capacity - f;
  }
  double cost(int r) const { return r % 2 ? -net->arcs[r / 2].cost : net->arcs[r / 2].cost; }

  std::vector<std::vector<int>> adjacency;
  const FlowNetwork* net = nullptr;
  const std::vector<double>* flow = nullptr;
};

}  // namespace

FlowNetwork ReduceToNetwork(const PowerGrid& grid, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "lambda must lie in [0, 1]");
  }
  FlowNetwork net;
  const int n = grid.num_buses();
  net.num_nodes = n + 2;
  net.source = n;
  net.sink = n + 1;
  net.target = grid.total_demand();

  for (int g = 0; g < grid.num_generators(); ++g) {
    const Generator& gen = grid.generator(g);
    net.cost_offset += lambda * gen.cost.value_at_zero();
    int piece = 0;
    for (const auto& seg : gen.cost.Segments()) {
      if (!(seg.width() > 0.0)) continue;
      AddArc(net, net.source, gen.bus, seg.width(), lambda * seg.slope,
             {ArcOrigin::Kind::kGenerator, g, piece++});
    }
  }
  for (int e = 0; e < grid.num_branches(); ++e) {
    const Branch& br = grid.branch(e);
    net.cost_offset += (1.0 - lambda) * br.loss.value_at_zero();
    const double cap = std::min(br.capacity.value(), net.target);
    for (const auto kind : {ArcOrigin::Kind::kBranchForward, ArcOrigin::Kind::kBranchBackward}) {
      const int tail = kind == ArcOrigin::Kind::kBranchForward ? br.from : br.to;
      const int head = kind == ArcOrigin::Kind::kBranchForward ? br.to : br.from;
      int piece = 0;
      for (const auto& seg : br.loss.SegmentsUpTo(cap)) {
        AddArc(net, tail, head, seg.width(), (1.0 - lambda) * seg.slope, {kind, e, piece++});
      }
    }
  }
  for (int v = 0; v < n; ++v) {
    if (grid.bus(v).demand > 0.0) {
      AddArc(net, v, net.sink, grid.bus(v).demand, 0.0, {ArcOrigin::Kind::kConsumer, v, 0});
    }
  }
  return net;
}

NetworkFlow SolveMinCost(const FlowNetwork& net) {
  NetworkFlow out;
  out.arc_flow.assign(net.arcs.size(), 0.0);
  const Residual residual(net, out.arc_flow);
  const int n = net.num_nodes;

  // Initial potentials by Bellman-Ford so negative arc costs are allowed.
  std::vector<double> potential(n, 0.0);
  bool negative = false;
  for (const NetworkArc& a : net.arcs) negative |= a.cost < 0.0;
  if (negative) {
    std::vector<double> dist(n, kInf);
    dist[net.source] = 0.0;
    for (int round = 0; round < n; ++round) {
      bool changed = false;
      for (const NetworkArc& a : net.arcs) {
        if (a.capacity > kCapacityEps && dist[a.tail] + a.cost < dist[a.head] - 1e-15) {
          dist[a.head] = dist[a.tail] + a.cost;
          changed = true;
        }
      }
      if (!changed) break;
    }
    for (int v = 0; v < n; ++v) potential[v] = std::isfinite(dist[v]) ? dist[v] : 0.0;
  }

  const double tol = 1e-9 * (1.0 + net.target);
  std::vector<double> dist(n);
  std::vector<int> via(n);
  while (out.value < net.target - tol) {
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(via.begin(), via.end(), -1);
    dist[net.source] = 0.0;
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    heap.push({0.0, net.source});
    while (!heap.empty()) {
      const auto [d, v] = heap.top();
      heap.pop();
      if (d > dist[v]) continue;
      for (int r : residual.adjacency[v]) {
        if (residual.capacity(r) <= kCapacityEps) continue;
        const int w = residual.head(r);
        // Reduced costs are non-negative up to rounding.
        const double reduced = std::max(0.0, residual.cost(r) + potential[v] - potential[w]);
        if (d + reduced < dist[w]) {
          dist[w] = d + reduced;
          via[w] = r;
          heap.push({dist[w], w});
        }
      }
    }
    if (!std::isfinite(dist[net.sink])) break;
    for (int v = 0; v < n; ++v) {
      if (std::isfinite(dist[v])) potential[v] += dist[v];
    }
    double push = net.target - out.value;
    for (int v = net.sink; v != net.source; v = residual.tail(via[v])) {
      push = std::min(push, residual.capacity(via[v]));
    }
    for (int v = net.sink; v != net.source; v = residual.tail(via[v])) {
      const int r = via[v];
      out.arc_flow[r / 2] += r % 2 ? -push : push;
    }
    out.value += push;
  }
  out.feasible = out.value >= net.target - tol;
  out.cost = net.cost_offset;
  for (std::size_t i = 0; i < net.arcs.size(); ++i) out.cost += net.arcs[i].cost * out.arc_flow[i];
  return out;
}

bool HasNegativeResidualCycle(const FlowNetwork& net, const NetworkFlow& flow, double tol) {
  const Residual residual(net, flow.arc_flow);
  const int n = net.num_nodes;
  std::vector<double> dist(n, 0.0);
  const int arcs = static_cast<int>(2 * net.arcs.size());
  for (int round = 0; round <= n; ++round) {
    bool changed = false;
    for (int r = 0; r < arcs; ++r) {
      if (residual.capacity(r) <= 1e-9) continue;
      const int u = residual.tail(r), w = residual.head(r);
      if (dist[u] + residual.cost(r) < dist[w] - tol) {
        dist[w] = dist[u] + residual.cost(r);
        changed = true;
      }
    }
    if (!changed) return false;
  }
  return true;
}

Flow LiftFlow(const FlowNetwork& net, const NetworkFlow& flow, const PowerGrid& grid) {
  Flow out(grid.num_branches());
  for (std::size_t i = 0; i < net.arcs.size(); ++i) {
    const ArcOrigin& o = net.origin[i];
    if (o.kind == ArcOrigin::Kind::kBranchForward) out[o.index] += flow.arc_flow[i];
    if (o.kind == ArcOrigin::Kind::kBranchBackward) out[o.index] -= flow.arc_flow[i];
  }
  return out;
}

}  // namespace gridctl
