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

// Small hand-built and random grids shared by the tests.

#ifndef GRIDCTL_TESTS_TEST_GRIDS_HPP_
#define GRIDCTL_TESTS_TEST_GRIDS_HPP_

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "gridctl/grid.hpp"
#include "gridctl/pwl.hpp"

namespace gridctl::testing {

inline PiecewiseLinearConvex Linear(double slope, double domain) {
  return PiecewiseLinearConvex::FromPieces({{slope, 0.0}}, domain);
}

inline PiecewiseLinearConvex Quadratic(double a, double domain, int points = 5) {
  std::vector<double> xs, ys;
  for (int i = 0; i < points; ++i) {
    const double x = domain * i / (points - 1);
    xs.push_back(x);
    ys.push_back(a * x * x);
  }
  return PiecewiseLinearConvex::FromSamples(xs, ys);
}

struct BranchSpec {
  int from, to;
  double reactance;
  std::optional<double> capacity;  // nullopt = unbounded
  double resistance = 0.0;
};

struct GeneratorSpec {
  int bus;
  double pmax;
  double slope;
};

// Grid with linear generator costs and r f^2 / base losses sampled on
// [0, min(c, 2 D)] like the case reader does.
inline PowerGrid MakeGrid(const std::vector<double>& demand, const std::vector<BranchSpec>& branches,
                          const std::vector<GeneratorSpec>& generators, double base = 100.0) {
  std::vector<Bus> buses;
  double total = 0.0;
  for (std::size_t v = 0; v < demand.size(); ++v) {
    buses.push_back(Bus{static_cast<int>(v) + 1, demand[v]});
    total += demand[v];
  }
  std::vector<Branch> out;
  for (const BranchSpec& s : branches) {
    Branch b;
    b.from = s.from;
    b.to = s.to;
    b.reactance = s.reactance;
    b.resistance = s.resistance;
    b.capacity = s.capacity ? Capacity::Finite(*s.capacity) : Capacity::Unbounded();
    const double domain = std::min(b.capacity.value(), 2.0 * total);
    if (s.resistance > 0.0 && domain > 0.0) b.loss = Quadratic(s.resistance / base, domain);
    out.push_back(std::move(b));
  }
  std::vector<Generator> gens;
  for (const GeneratorSpec& g : generators) {
    gens.push_back(Generator{g.bus, g.pmax, Linear(g.slope, g.pmax)});
  }
  return PowerGrid("test", base, std::move(buses), std::move(out), std::move(gens));
}

// Connected random grid: a random spanning tree plus `extra` chords. Bus 0
// is always a generator; other buses are generators with probability 1/4,
// otherwise consumers with probability 2/3. Generation capacity exceeds
// demand so the flow model is feasible when capacities are unbounded.
inline PowerGrid RandomGrid(std::mt19937& rng, int n, int extra, bool losses,
                            bool capacities = false) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> demand(n, 0.0);
  std::vector<GeneratorSpec> gens;
  for (int v = 0; v < n; ++v) {
    if (v == 0 || unit(rng) < 0.25) {
      gens.push_back({v, 0.0, 1.0 + 9.0 * unit(rng)});
    } else if (unit(rng) < 2.0 / 3.0) {
      demand[v] = 5.0 + 45.0 * unit(rng);
    }
  }
  double total = 0.0;
  for (double d : demand) total += d;
  for (auto& g : gens) g.pmax = total + 10.0;
  std::vector<BranchSpec> branches;
  auto add = [&](int u, int v) {
    const double cap = total * (0.3 + unit(rng));
    branches.push_back({u, v, 0.05 + 0.3 * unit(rng),
                        capacities ? std::optional<double>(cap) : std::nullopt,
                        losses ? 0.005 + 0.05 * unit(rng) : 0.0});
  };
  for (int v = 1; v < n; ++v) add(static_cast<int>(unit(rng) * v), v);
  for (int i = 0; i < extra; ++i) {
    const int u = static_cast<int>(unit(rng) * n);
    int v = static_cast<int>(unit(rng) * n);
    if (u == v) v = (v + 1) % n;
    add(u, v);
  }
  return MakeGrid(demand, branches, gens);
}

// Builds a random cactus: cycles glued at random existing vertices, plus
// pendant trees.
inline PowerGrid RandomCactus(std::mt19937& rng, int cycles) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int n = 1;
  std::vector<BranchSpec> branches;
  auto add = [&](int u, int v) { branches.push_back({u, v, 0.05 + unit(rng), {}}); };
  for (int c = 0; c < cycles; ++c) {
    const int anchor = static_cast<int>(unit(rng) * n);
    const int len = 2 + static_cast<int>(unit(rng) * 4);
    int prev = anchor;
    for (int i = 0; i < len; ++i) {
      add(prev, n);
      prev = n++;
    }
    add(prev, anchor);
    if (unit(rng) < 0.5) {
      add(static_cast<int>(unit(rng) * n), n);
      ++n;
    }
  }
  std::vector<double> demand(n, 1.0);
  demand[0] = 0.0;
  return MakeGrid(demand, branches, {{0, 1000.0, 1.0}});
}

// Dense Gaussian elimination with partial pivoting; a must be square and
// non-singular.
inline std::vector<double> SolveDense(std::vector<std::vector<double>> a, std::vector<double> b) {
  const int n = static_cast<int>(b.size());
  for (int c = 0; c < n; ++c) {
    int p = c;
    for (int r = c + 1; r < n; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
    }
    std::swap(a[c], a[p]);
    std::swap(b[c], b[p]);
    for (int r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = a[r][c] / a[c][c];
      for (int k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  for (int i = 0; i < n; ++i) b[i] /= a[i][i];
  return b;
}

}  // namespace gridctl::testing

#endif  // GRIDCTL_TESTS_TEST_GRIDS_HPP_
