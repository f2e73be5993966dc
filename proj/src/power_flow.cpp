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

#include "gridctl/power_flow.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "gridctl/error.hpp"

namespace gridctl {

const char* ModelTypeName(ModelType type) {
  switch (type) {
    case ModelType::kFlow: return "flow";
    case ModelType::kElectrical: return "electrical";
    case ModelType::kHybrid: return "hybrid";
  }
  return "unknown";
}

std::vector<char> ModelKind::NativeMask(int num_buses) const {
  std::vector<char> native(num_buses, type == ModelType::kFlow ? 0 : 1);
  if (type == ModelType::kHybrid) {
    for (int v : controls.members()) {
      if (v >= 0 && v < num_buses) native[v] = 0;
    }
  }
  return native;
}

Flow ModelLp::ExtractFlow(const std::vector<double>& values) const {
  Flow flow(static_cast<int>(flow_var.size()));
  for (std::size_t e = 0; e < flow_var.size(); ++e) {
    double f = 0.0;
    if (flow_var[e] >= 0) {
      f = values[flow_var[e]];
    } else {
      for (int j : forward_segments[e]) f += values[j];
      for (int j : backward_segments[e]) f -= values[j];
    }
    flow[static_cast<int>(e)] = f;
  }
  return flow;
}

namespace {

struct BuildMode {
  bool loss_segments = false;
  bool bottleneck = false;  // free flows, |f_e| <= u c_e, minimise u
};

ModelLp Build(const PowerGrid& grid, const ModelKind& kind, double lambda, const BuildMode& mode) {
  if (kind.type == ModelType::kHybrid) kind.controls.Validate(grid);
  const int n = grid.num_buses();
  const int m = grid.num_branches();
  ModelLp model;
  LinearProgram& lp = model.lp;
  model.flow_var.assign(m, -1);
  model.forward_segments.assign(m, {});
  model.backward_segments.assign(m, {});
  model.generator_segments.assign(grid.num_generators(), {});
  model.angle_var.assign(n, -1);
  model.bus_row.assign(n, -1);
  model.dc_row.assign(m, -1);

  std::vector<std::vector<Term>> bus_terms(n);
  double offset = 0.0;
  int bottleneck_var = -1;
  if (mode.bottleneck) bottleneck_var = lp.AddVariable("u", 0.0, kInfinity, 1.0);

  for (int e = 0; e < m; ++e) {
    const Branch& br = grid.branch(e);
    const std::string tag = std::to_string(e);
    if (mode.loss_segments) {
      offset += (1.0 - lambda) * br.loss.value_at_zero();
      // Segments follow the current capacity, which may have been scaled
      // after the loss function was sampled.
      int k = 0;
      for (const auto& seg : br.loss.SegmentsUpTo(br.capacity.value())) {
        const double width = seg.width();
        const double cost = (1.0 - lambda) * seg.slope;
        const int fwd = lp.AddVariable("fp" + tag + "_" + std::to_string(k), 0.0, width, cost);
        const int bwd = lp.AddVariable("fn" + tag + "_" + std::to_string(k), 0.0, width, cost);
        model.forward_segments[e].push_back(fwd);
        model.backward_segments[e].push_back(bwd);
        bus_terms[br.from].push_back({fwd, 1.0});
        bus_terms[br.from].push_back({bwd, -1.0});
        bus_terms[br.to].push_back({fwd, -1.0});
        bus_terms[br.to].push_back({bwd, 1.0});
        ++k;
      }
    } else {
      const double cap = br.capacity.value();
      const bool free = mode.bottleneck || br.capacity.unbounded();
      const int f = lp.AddVariable("f" + tag, free ? -kInfinity : -cap, free ? kInfinity : cap, 0.0);
      if (!mode.bottleneck) offset += (1.0 - lambda) * br.loss.value_at_zero();
      model.flow_var[e] = f;
      bus_terms[br.from].push_back({f, 1.0});
      bus_terms[br.to].push_back({f, -1.0});
      if (mode.bottleneck && !br.capacity.unbounded()) {
        lp.AddConstraint("cap+" + tag, {{f, 1.0}, {bottleneck_var, -cap}}, RowSense::kLessEqual, 0.0);
        lp.AddConstraint("cap-" + tag, {{f, -1.0}, {bottleneck_var, -cap}}, RowSense::kLessEqual, 0.0);
      }
    }
  }

  for (int g = 0; g < grid.num_generators(); ++g) {
    const Generator& gen = grid.generator(g);
    const std::string tag = std::to_string(grid.bus(gen.bus).id);
    if (mode.bottleneck) {
      if (gen.pmax > 0.0) {
        const int p = lp.AddVariable("p" + tag, 0.0, gen.pmax, 0.0);
        model.generator_segments[g].push_back(p);
        bus_terms[gen.bus].push_back({p, -1.0});
      }
      continue;
    }
    offset += lambda * gen.cost.value_at_zero();
    int k = 0;
    for (const auto& seg : gen.cost.Segments()) {
      if (!(seg.width() > 0.0)) continue;
      const int p = lp.AddVariable("p" + tag + "_" + std::to_string(k++), 0.0, seg.width(),
                                   lambda * seg.slope);
      model.generator_segments[g].push_back(p);
      bus_terms[gen.bus].push_back({p, -1.0});
    }
  }

  for (int v = 0; v < n; ++v) {
    model.bus_row[v] = lp.AddConstraint("bus" + std::to_string(grid.bus(v).id),
                                        std::move(bus_terms[v]), RowSense::kEqual,
                                        -grid.bus(v).demand);
  }

  // DC rows on native branches; one pinned bus per native component.
  const std::vector<char> native = kind.NativeMask(n);
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<char> touched(n, 0);
  for (int e = 0; e < m; ++e) {
    const Branch& br = grid.branch(e);
    if (!native[br.from] || !native[br.to]) continue;
    touched[br.from] = touched[br.to] = 1;
    const int a = find(br.from), b = find(br.to);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  for (int v = 0; v < n; ++v) {
    if (touched[v] && find(v) != v) {
      model.angle_var[v] = lp.AddVariable("psi" + std::to_string(grid.bus(v).id), -kInfinity,
                                          kInfinity, 0.0);
    }
  }
  for (int e = 0; e < m; ++e) {
    const Branch& br = grid.branch(e);
    if (!native[br.from] || !native[br.to]) continue;
    std::vector<Term> terms;
    if (model.flow_var[e] >= 0) {
      terms.push_back({model.flow_var[e], 1.0});
    } else {
      for (int j : model.forward_segments[e]) terms.push_back({j, 1.0});
      for (int j : model.backward_segments[e]) terms.push_back({j, -1.0});
    }
    const double b = br.susceptance();
    if (model.angle_var[br.from] >= 0) terms.push_back({model.angle_var[br.from], -b});
    if (model.angle_var[br.to] >= 0) terms.push_back({model.angle_var[br.to], b});
    model.dc_row[e] = lp.AddConstraint("dc" + std::to_string(e), std::move(terms), RowSense::kEqual, 0.0);
  }
  lp.set_objective_offset(offset);
  return model;
}

void CheckLambda(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "lambda must lie in [0, 1]");
  }
}

}  // namespace

ModelLp BuildLp(const PowerGrid& grid, const ModelKind& kind, double lambda) {
  CheckLambda(lambda);
  BuildMode mode;
  mode.loss_segments = lambda < 1.0;
  return Build(grid, kind, lambda, mode);
}

ModelSolution SolveModel(const PowerGrid& grid, const ModelKind& kind, double lambda,
                         const LpOptions& options) {
  const ModelLp model = BuildLp(grid, kind, lambda);
  const LpSolution s = SolveLp(model.lp, options);
  if (s.status == LpStatus::kInfeasible) {
    throw Error(ErrorCode::kInfeasibleModel,
                std::string(ModelTypeName(kind.type)) + " model has no feasible flow");
  }
  if (s.status == LpStatus::kUnbounded) {
    throw Error(ErrorCode::kNumericalBreakdown, "power-flow LP reported unbounded");
  }
  ModelSolution out;
  out.flow = model.ExtractFlow(s.values);
  out.objective = s.objective;
  out.iterations = s.iterations;
  out.generation.assign(grid.num_generators(), 0.0);
  for (int g = 0; g < grid.num_generators(); ++g) {
    for (int j : model.generator_segments[g]) out.generation[g] += s.values[j];
  }
  if (kind.type != ModelType::kFlow) {
    AngleAssignment angles;
    angles.theta.assign(grid.num_buses(), 0.0);
    for (int v = 0; v < grid.num_buses(); ++v) {
      if (model.angle_var[v] >= 0) angles.theta[v] = s.values[model.angle_var[v]] / grid.base_mva();
    }
    const std::vector<char> native = kind.NativeMask(grid.num_buses());
    for (int e = 0; e < grid.num_branches(); ++e) {
      const Branch& br = grid.branch(e);
      if (!native[br.from] || !native[br.to]) continue;
      const double r = out.flow[e] - grid.coupling(e) * (angles.theta[br.from] - angles.theta[br.to]);
      if (std::abs(r) > 1e-6 * (1.0 + std::abs(out.flow[e]))) {
        throw Error(ErrorCode::kNumericalBreakdown,
                    "recovered angles violate the DC relation on branch " + std::to_string(e));
      }
    }
    out.angles = std::move(angles);
  }
  out.costs = FlowCost(grid, out.flow, lambda);
  return out;
}

double MaxAngleResidual(const PowerGrid& grid, const Flow& flow, const AngleAssignment& angles,
                        std::span<const char> native) {
  double worst = 0.0;
  for (int e = 0; e < grid.num_branches(); ++e) {
    const Branch& br = grid.branch(e);
    if (!native[br.from] || !native[br.to]) continue;
    worst = std::max(worst, std::abs(flow[e] - grid.coupling(e) *
                                                   (angles.theta[br.from] - angles.theta[br.to])));
  }
  return worst;
}

ElectricalCheck CheckElectricalFeasibility(const PowerGrid& grid, const Flow& flow,
                                           std::span<const char> native, double tol) {
  const int n = grid.num_buses();
  if (static_cast<int>(native.size()) != n) {
    throw Error(ErrorCode::kInvalidArgument, "native mask must have one entry per bus");
  }
  if (flow.size() != grid.num_branches()) {
    throw Error(ErrorCode::kInvalidArgument, "flow must have one value per branch");
  }
  const Multigraph& g = grid.topology();
  std::vector<double> theta(n, 0.0);
  std::vector<int> parent_edge(n, -1), depth(n, -1);
  std::vector<char> tree_edge(grid.num_branches(), 0);
  for (int root = 0; root < n; ++root) {
    if (!native[root] || depth[root] >= 0) continue;
    depth[root] = 0;
    std::vector<int> queue{root};
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const int v = queue[head];
      for (int e : g.incident(v)) {
        const int w = g.edge(e).other(v);
        if (!native[w] || depth[w] >= 0) continue;
        depth[w] = depth[v] + 1;
        parent_edge[w] = e;
        tree_edge[e] = 1;
        theta[w] = theta[v] - flow.Directed(grid, e, v) / grid.coupling(e);
        queue.push_back(w);
      }
    }
  }
  ElectricalCheck check;
  int violated = -1;
  for (int e = 0; e < grid.num_branches(); ++e) {
    const Branch& br = grid.branch(e);
    if (!native[br.from] || !native[br.to]) continue;
    const double r = std::abs(flow[e] - grid.coupling(e) * (theta[br.from] - theta[br.to]));
    check.max_residual = std::max(check.max_residual, r);
    if (violated < 0 && !tree_edge[e] && r > tol * (1.0 + std::abs(flow[e]))) violated = e;
  }
  if (violated < 0) {
    check.angles = AngleAssignment{std::move(theta)};
    return check;
  }
  // Tree path between the endpoints closes the violated cycle.
  int a = grid.branch(violated).from, b = grid.branch(violated).to;
  std::vector<int> left, right;
  while (a != b) {
    if (depth[a] >= depth[b]) {
      left.push_back(parent_edge[a]);
      a = g.edge(parent_edge[a]).other(a);
    } else {
      right.push_back(parent_edge[b]);
      b = g.edge(parent_edge[b]).other(b);
    }
  }
  check.violated_cycle.push_back(violated);
  check.violated_cycle.insert(check.violated_cycle.end(), right.begin(), right.end());
  check.violated_cycle.insert(check.violated_cycle.end(), left.rbegin(), left.rend());
  return check;
}

CycleShift CycleEquivalentFlow(std::span<const double> susceptance, std::span<const double> flows) {
  if (susceptance.size() != flows.size() || flows.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "cycle needs at least two branches with matching data");
  }
  double weighted = 0.0, inverse = 0.0;
  for (std::size_t i = 0; i < flows.size(); ++i) {
    if (!(susceptance[i] > 0.0)) throw Error(ErrorCode::kInvalidArgument, "susceptance must be positive");
    weighted += flows[i] / susceptance[i];
    inverse += 1.0 / susceptance[i];
  }
  CycleShift out;
  out.delta = -weighted / inverse;
  out.flows.assign(flows.begin(), flows.end());
  for (double& f : out.flows) f += out.delta;
  return out;
}

namespace {

// Orientation (+1 along from->to) of each branch when walking the cycle, or
// throws kNotACycle.
std::vector<int> WalkSigns(const PowerGrid& grid, std::span<const int> cycle) {
  const int k = static_cast<int>(cycle.size());
  if (k < 2) throw Error(ErrorCode::kNotACycle, "a cycle needs at least two branches");
  for (int e : cycle) {
    if (e < 0 || e >= grid.num_branches()) throw Error(ErrorCode::kNotACycle, "unknown branch in cycle");
  }
  std::vector<int> sorted(cycle.begin(), cycle.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(ErrorCode::kNotACycle, "branch repeated in cycle");
  }
  const Branch& first = grid.branch(cycle[0]);
  const Branch& second = grid.branch(cycle[1]);
  auto touches = [](const Branch& b, int v) { return b.from == v || b.to == v; };
  int start = touches(second, first.to) ? first.from : first.to;
  if (!touches(second, first.to) && !touches(second, first.from)) {
    throw Error(ErrorCode::kNotACycle, "consecutive branches do not meet");
  }
  std::vector<int> signs;
  std::vector<char> seen(grid.num_buses(), 0);
  int cur = start;
  for (int e : cycle) {
    const Branch& b = grid.branch(e);
    if (!touches(b, cur) || seen[cur]) throw Error(ErrorCode::kNotACycle, "branches do not form a simple cycle");
    seen[cur] = 1;
    signs.push_back(b.from == cur ? 1 : -1);
    cur = b.from == cur ? b.to : b.from;
  }
  if (cur != start) throw Error(ErrorCode::kNotACycle, "walk does not close");
  return signs;
}

}  // namespace

GridCycleShift CycleEquivalentFlow(const PowerGrid& grid, std::span<const int> cycle,
                                   const Flow& flow) {
  if (flow.size() != grid.num_branches()) {
    throw Error(ErrorCode::kInvalidArgument, "flow must have one value per branch");
  }
  const std::vector<int> signs = WalkSigns(grid, cycle);
  std::vector<double> b, f;
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    b.push_back(grid.coupling(cycle[i]));
    f.push_back(signs[i] * flow[cycle[i]]);
  }
  const CycleShift shift = CycleEquivalentFlow(b, f);
  GridCycleShift out{shift.delta, flow};
  for (std::size_t i = 0; i < cycle.size(); ++i) out.flow[cycle[i]] = signs[i] * shift.flows[i];
  return out;
}

CactusShift CactusEquivalentFlow(const PowerGrid& grid, const ControlSet& controls, const Flow& flow) {
  controls.Validate(grid);
  const Multigraph::Subgraph sub = grid.topology().WithoutVertices(controls.members());
  if (!IsCactus(sub.graph)) throw Error(ErrorCode::kNotACactus, "G - F is not a cactus");
  const BlockDecomposition blocks = BiconnectedComponents(sub.graph);
  CactusShift out{flow, {}, {}};
  for (const Block& block : blocks.blocks) {
    if (block.kind != BlockKind::kCycle) continue;
    // Order the block edges into a closed walk.
    std::vector<char> used(block.edges.size(), 0);
    std::vector<int> walk;
    int cur = sub.graph.edge(block.edges[0]).u;
    for (std::size_t step = 0; step < block.edges.size(); ++step) {
      for (std::size_t i = 0; i < block.edges.size(); ++i) {
        const auto& ed = sub.graph.edge(block.edges[i]);
        if (used[i] || (ed.u != cur && ed.v != cur)) continue;
        used[i] = 1;
        walk.push_back(sub.original_edge[block.edges[i]]);
        cur = ed.other(cur);
        break;
      }
    }
    const GridCycleShift shift = CycleEquivalentFlow(grid, walk, out.flow);
    out.flow = shift.flow;
    out.deltas.push_back(shift.delta);
  }
  for (int e = 0; e < grid.num_branches(); ++e) {
    const Capacity& c = grid.branch(e).capacity;
    if (!c.unbounded() && std::abs(out.flow[e]) > c.value() * (1.0 + 1e-9) + 1e-9) {
      out.capacity_violations.push_back(e);
    }
  }
  return out;
}

std::optional<double> MinCapacityFactor(const PowerGrid& grid, const ModelKind& kind,
                                        const LpOptions& options) {
  BuildMode mode;
  mode.bottleneck = true;
  const ModelLp model = Build(grid, kind, 1.0, mode);
  const LpSolution s = SolveLp(model.lp, options);
  if (s.status == LpStatus::kInfeasible) return std::nullopt;
  if (s.status == LpStatus::kUnbounded) {
    throw Error(ErrorCode::kNumericalBreakdown, "bottleneck LP reported unbounded");
  }
  return std::max(0.0, s.objective);
}

}  // namespace gridctl
