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

#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "doctest.h"
#include "gridctl/case_io.hpp"
#include "gridctl/mincost_flow.hpp"
#include "gridctl/power_flow.hpp"
#include "test_grids.hpp"

namespace gridctl {
namespace {

using testing::MakeGrid;

const std::string kDataDir = GRIDCTL_DATA_DIR;
const char* const kCases[] = {"case6ww", "case9", "case14", "case30", "case39", "case57", "case118"};

FlowNetwork Diamond(double target) {
  FlowNetwork net;
  net.num_nodes = 4;
  net.source = 0;
  net.sink = 3;
  net.target = target;
  net.arcs = {{0, 1, 5.0, 1.0}, {1, 3, 5.0, 0.0}, {0, 2, 5.0, 2.0}, {2, 3, 5.0, 0.0}};
  net.origin.assign(4, ArcOrigin{});
  return net;
}

TEST_CASE("diamond network") {
  // Brute force over the split between the two paths.
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 500; ++i) {
    const double x = i / 100.0;
    if (8.0 - x <= 5.0) best = std::min(best, x * 1.0 + (8.0 - x) * 2.0);
  }
  const NetworkFlow flow = SolveMinCost(Diamond(8.0));
  CHECK(flow.feasible);
  CHECK(flow.value == doctest::Approx(8.0));
  CHECK(flow.cost == doctest::Approx(best));
  CHECK(flow.cost == doctest::Approx(11.0));
  CHECK(!HasNegativeResidualCycle(Diamond(8.0), flow));

  const NetworkFlow zero = SolveMinCost(Diamond(0.0));
  CHECK(zero.feasible);
  CHECK(zero.cost == 0.0);
  for (double f : zero.arc_flow) CHECK(f == 0.0);

  const NetworkFlow too_much = SolveMinCost(Diamond(12.0));
  CHECK(!too_much.feasible);
  CHECK(too_much.value == doctest::Approx(10.0));
}

TEST_CASE("negative residual cycle detects a suboptimal flow") {
  // Two parallel s-t paths; sending everything on the expensive one leaves
  // a negative cycle through the cheap one.
  const FlowNetwork net = Diamond(4.0);
  NetworkFlow bad;
  bad.arc_flow = {0.0, 0.0, 4.0, 4.0};
  CHECK(HasNegativeResidualCycle(net, bad));
}

TEST_CASE("lossless two-bus reduction") {
  const PowerGrid g = MakeGrid({0.0, 10.0}, {{0, 1, 0.1, {}}}, {{0, 50.0, 2.0}});
  const FlowNetwork net = ReduceToNetwork(g, 0.5);
  CHECK(net.arcs.size() == 4);
  CHECK(net.target == doctest::Approx(10.0));
  int generator = 0, consumer = 0, branch = 0;
  for (std::size_t i = 0; i < net.arcs.size(); ++i) {
    switch (net.origin[i].kind) {
      case ArcOrigin::Kind::kGenerator:
        ++generator;
        CHECK(net.arcs[i].cost == doctest::Approx(1.0));
        CHECK(net.arcs[i].capacity == doctest::Approx(50.0));
        break;
      case ArcOrigin::Kind::kConsumer:
        ++consumer;
        CHECK(net.arcs[i].capacity == doctest::Approx(10.0));
        break;
      default:
        ++branch;
        CHECK(net.arcs[i].cost == 0.0);
        // Unbounded capacity capped at the target value.
        CHECK(net.arcs[i].capacity == doctest::Approx(10.0));
    }
  }
  CHECK(generator == 1);
  CHECK(consumer == 1);
  CHECK(branch == 2);
  CHECK(SolveMinCost(net).cost == doctest::Approx(10.0));
}

TEST_CASE("loss pieces become parallel arcs") {
  std::vector<Branch> branches(1);
  branches[0].from = 0;
  branches[0].to = 1;
  branches[0].reactance = 0.1;
  branches[0].capacity = Capacity::Finite(20.0);
  const double xs[] = {0.0, 10.0, 20.0}, ys[] = {0.0, 1.0, 3.0};
  branches[0].loss = PiecewiseLinearConvex::FromSamples(xs, ys);
  const PowerGrid g("pieces", 100.0, {Bus{1, 0.0}, Bus{2, 15.0}}, branches,
                    {Generator{0, 50.0, testing::Linear(1.0, 50.0)}});
  const FlowNetwork net = ReduceToNetwork(g, 0.25);
  std::vector<NetworkArc> forward;
  for (std::size_t i = 0; i < net.arcs.size(); ++i) {
    if (net.origin[i].kind == ArcOrigin::Kind::kBranchForward) forward.push_back(net.arcs[i]);
  }
  // Widths follow the breakpoints, capped at b = 15.
  REQUIRE(forward.size() == 2);
  CHECK(forward[0].capacity == doctest::Approx(10.0));
  CHECK(forward[1].capacity == doctest::Approx(5.0));
  CHECK(forward[0].cost == doctest::Approx(0.75 * 0.1));
  CHECK(forward[1].cost == doctest::Approx(0.75 * 0.2));

  const NetworkFlow flow = SolveMinCost(net);
  // Cheaper piece saturated before the costlier one: 10 + 5.
  const Flow lifted = LiftFlow(net, flow, g);
  CHECK(lifted[0] == doctest::Approx(15.0));
  CHECK(flow.cost == doctest::Approx(0.25 * 15.0 + 0.75 * (1.0 + 0.2 * 5.0)));
  CHECK(SolveModel(g, ModelKind::Flow(), 0.25).objective == doctest::Approx(flow.cost));
}

TEST_CASE("lift cancels opposite copies") {
  // Generators on both buses, 10 MW load on bus 1.
  const PowerGrid g = MakeGrid({0.0, 10.0}, {{0, 1, 0.1, 30.0, 0.05}}, {{0, 50.0, 2.0}, {1, 50.0, 5.0}});
  const FlowNetwork net = ReduceToNetwork(g, 0.5);
  NetworkFlow flow;
  flow.arc_flow.assign(net.arcs.size(), 0.0);
  CHECK(LiftFlow(net, flow, g)[0] == 0.0);
  // 8 MW forward and 3 MW back on the same branch, 5 MW from each unit.
  double network_cost = net.cost_offset;
  double remaining_fwd = 8.0, remaining_bwd = 3.0;
  for (std::size_t i = 0; i < net.arcs.size(); ++i) {
    switch (net.origin[i].kind) {
      case ArcOrigin::Kind::kGenerator: flow.arc_flow[i] = 5.0; break;
      case ArcOrigin::Kind::kConsumer: flow.arc_flow[i] = 10.0; break;
      case ArcOrigin::Kind::kBranchForward:
        flow.arc_flow[i] = std::min(remaining_fwd, net.arcs[i].capacity);
        remaining_fwd -= flow.arc_flow[i];
        break;
      case ArcOrigin::Kind::kBranchBackward:
        flow.arc_flow[i] = std::min(remaining_bwd, net.arcs[i].capacity);
        remaining_bwd -= flow.arc_flow[i];
        break;
      default: break;
    }
    network_cost += flow.arc_flow[i] * net.arcs[i].cost;
  }
  const Flow lifted = LiftFlow(net, flow, g);
  CHECK(lifted[0] == doctest::Approx(5.0));
  CHECK(CheckFeasible(g, lifted).feasible());
  CHECK(FlowCost(g, lifted, 0.5).combined <= network_cost + 1e-12);
}

TEST_CASE("IEEE cases: network size, oracle equivalence, certificates") {
  for (const char* name : kCases) {
    CAPTURE(name);
    const PowerGrid g = BuildGrid(ReadCaseFile(kDataDir + "/" + name + ".m"));
    for (double lambda : {0.0, 0.5, 1.0}) {
      CAPTURE(lambda);
      const FlowNetwork net = ReduceToNetwork(g, lambda);
      // Arc count from the built functions.
      std::size_t expected = 0;
      for (int e = 0; e < g.num_branches(); ++e) {
        const double cap = std::min(g.branch(e).capacity.value(), g.total_demand());
        double used = 0.0;
        for (const auto& seg : g.branch(e).loss.Segments()) {
          const double w = std::min(seg.width(), cap - used);
          if (w > 0.0) {
            used += w;
            expected += 2;
          }
        }
      }
      for (const Generator& gen : g.generators()) {
        for (const auto& seg : gen.cost.Segments()) expected += seg.width() > 0.0;
      }
      for (int v = 0; v < g.num_buses(); ++v) expected += g.is_consumer(v);
      CHECK(net.arcs.size() == expected);

      const NetworkFlow flow = SolveMinCost(net);
      REQUIRE(flow.feasible);
      const double lp = SolveModel(g, ModelKind::Flow(), lambda).objective;
      CHECK(std::abs(flow.cost - lp) <= 1e-5 * (1.0 + std::abs(lp)));
      CHECK(!HasNegativeResidualCycle(net, flow, 1e-9));

      const Flow lifted = LiftFlow(net, flow, g);
      CHECK(CheckFeasible(g, lifted).feasible());
      CHECK(FlowCost(g, lifted, lambda).combined <= flow.cost + 1e-6 * (1.0 + flow.cost));

      // Within one branch direction, a costlier piece carries flow only
      // when every cheaper piece is full.
      std::map<std::pair<int, int>, std::vector<std::size_t>> groups;
      for (std::size_t i = 0; i < net.arcs.size(); ++i) {
        const ArcOrigin& o = net.origin[i];
        if (o.kind == ArcOrigin::Kind::kBranchForward || o.kind == ArcOrigin::Kind::kBranchBackward) {
          groups[{o.index, static_cast<int>(o.kind)}].push_back(i);
        }
      }
      for (const auto& [key, arcs] : groups) {
        for (std::size_t j = 1; j < arcs.size(); ++j) {
          if (flow.arc_flow[arcs[j]] > 1e-7 && net.arcs[arcs[j]].cost > net.arcs[arcs[j - 1]].cost) {
            CHECK(flow.arc_flow[arcs[j - 1]] >= net.arcs[arcs[j - 1]].capacity - 1e-7);
          }
        }
      }
    }
  }
}

}  // namespace
}  // namespace gridctl
