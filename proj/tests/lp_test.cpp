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

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "gridctl/error.hpp"
#include "gridctl/lp.hpp"
#include "lp_oracles.hpp"

namespace gridctl {
namespace {

using testing::EnumerateBinary;
using testing::RandomBinaryProgram;
using testing::RandomLp;
using testing::VertexEnumeration;

TEST_CASE("random box LPs agree with vertex enumeration") {
  std::mt19937 rng(2026);
  int optimal = 0, infeasible = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const LinearProgram lp = RandomLp(rng, trial % 2 == 0);
    const auto oracle = VertexEnumeration(lp);
    const LpSolution s = SolveLp(lp);
    if (!oracle) {
      CHECK(s.status == LpStatus::kInfeasible);
      ++infeasible;
      continue;
    }
    ++optimal;
    REQUIRE(s.status == LpStatus::kOptimal);
    CHECK(s.objective == doctest::Approx(*oracle).epsilon(1e-7).scale(1.0));
    CHECK(lp.MaxViolation(s.values) <= 1e-7);
    // Weak duality holds and the gap closes at the optimum.
    const double dual = DualObjective(lp, s);
    CHECK(dual <= s.objective + 1e-7);
    CHECK(dual == doctest::Approx(s.objective).epsilon(1e-6).scale(1.0));
  }
  CHECK(optimal > 100);
  CHECK(infeasible > 20);
}

TEST_CASE("unbounded LP returns an improving ray") {
  LinearProgram lp;
  const int x = lp.AddVariable("x", 0, kInfinity, -1.0);
  const int y = lp.AddVariable("y", 0, kInfinity, 0.0);
  lp.AddConstraint("r", {{x, 1.0}, {y, -1.0}}, RowSense::kLessEqual, 1.0);
  const LpSolution s = SolveLp(lp);
  REQUIRE(s.status == LpStatus::kUnbounded);
  REQUIRE(s.ray.size() == 2);
  CHECK(-s.ray[x] < 0.0);
  CHECK(s.ray[x] - s.ray[y] <= 1e-12);
  CHECK(s.ray[x] >= 0.0);
  CHECK(s.ray[y] >= 0.0);
}

TEST_CASE("free variables and equalities") {
  LinearProgram lp;
  const int a = lp.AddVariable("a", -kInfinity, kInfinity, 1.0);
  const int b = lp.AddVariable("b", -kInfinity, kInfinity, 2.0);
  lp.AddConstraint("sum", {{a, 1.0}, {b, 1.0}}, RowSense::kEqual, 4.0);
  lp.AddConstraint("diff", {{a, 1.0}, {b, -1.0}}, RowSense::kLessEqual, 10.0);
  const LpSolution s = SolveLp(lp);
  REQUIRE(s.status == LpStatus::kOptimal);
  CHECK(s.values[a] == doctest::Approx(7.0));
  CHECK(s.values[b] == doctest::Approx(-3.0));
  CHECK(s.objective == doctest::Approx(1.0));
}

TEST_CASE("infeasible LP reports a certificate") {
  LinearProgram lp;
  const int x = lp.AddVariable("x", 0, 1, 0.0);
  lp.AddConstraint("r", {{x, 1.0}}, RowSense::kGreaterEqual, 2.0);
  const LpSolution s = SolveLp(lp);
  CHECK(s.status == LpStatus::kInfeasible);
  CHECK(s.duals.size() == 1);
}

TEST_CASE("empty row with violated rhs is infeasible") {
  LinearProgram lp;
  lp.AddVariable("x", 0, 1, 1.0);
  lp.AddConstraint("empty", {}, RowSense::kGreaterEqual, 1.0);
  CHECK(SolveLp(lp).status == LpStatus::kInfeasible);
}

TEST_CASE("crossed bounds are rejected") {
  LinearProgram lp;
  lp.AddVariable("x", 2, 1, 1.0);
  CHECK_THROWS_AS(SolveLp(lp), Error);
}

TEST_CASE("highly degenerate assignment LP solves") {
  // 8x8 assignment problem: every basis is massively degenerate.
  const int k = 8;
  LinearProgram lp;
  std::mt19937 rng(1);
  std::vector<std::vector<int>> var(k, std::vector<int>(k));
  std::vector<std::vector<double>> cost(k, std::vector<double>(k));
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      cost[i][j] = static_cast<double>(rng() % 5);
      var[i][j] = lp.AddVariable("", 0, kInfinity, cost[i][j]);
    }
  }
  for (int i = 0; i < k; ++i) {
    std::vector<Term> row, col;
    for (int j = 0; j < k; ++j) {
      row.push_back({var[i][j], 1.0});
      col.push_back({var[j][i], 1.0});
    }
    lp.AddConstraint("", row, RowSense::kEqual, 1.0);
    lp.AddConstraint("", col, RowSense::kEqual, 1.0);
  }
  const LpSolution s = SolveLp(lp);
  REQUIRE(s.status == LpStatus::kOptimal);
  std::vector<int> perm(k);
  for (int i = 0; i < k; ++i) perm[i] = i;
  double best = 1e9;
  do {
    double c = 0;
    for (int i = 0; i < k; ++i) c += cost[i][perm[i]];
    best = std::min(best, c);
  } while (std::next_permutation(perm.begin(), perm.end()));
  CHECK(s.objective == doctest::Approx(best));
}

TEST_CASE("pure binary programs agree with enumeration") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    // Up to 12 binaries.
    const MixedIntegerProgram mip = RandomBinaryProgram(rng, 3 + trial % 10, 1 + trial % 4);
    bool feasible = false;
    const double expected = EnumerateBinary(mip, &feasible);
    const MipResult r = SolveMip(mip);
    if (!feasible) {
      CHECK(r.status == MipStatus::kInfeasible);
      continue;
    }
    REQUIRE(r.status == MipStatus::kOptimal);
    CHECK(r.proven_optimal);
    CHECK(r.solution->objective == doctest::Approx(expected));
    for (std::size_t k = 1; k < r.incumbent_history.size(); ++k) {
      CHECK(r.incumbent_history[k] <= r.incumbent_history[k - 1]);
    }
  }
}

TEST_CASE("mixed program with a continuous part") {
  // min -x - 2y + 3z s.t. x + y <= 1.5 + 2z, x,y in [0,1], z binary.
  MixedIntegerProgram mip;
  const int x = mip.base.AddVariable("x", 0, 1, -1);
  const int y = mip.base.AddVariable("y", 0, 1, -2);
  const int z = mip.base.AddVariable("z", 0, 1, 3);
  mip.binaries = {z};
  mip.base.AddConstraint("c", {{x, 1}, {y, 1}, {z, -2}}, RowSense::kLessEqual, 1.5);
  const MipResult r = SolveMip(mip);
  REQUIRE(r.status == MipStatus::kOptimal);
  // z = 0 gives -2.5; z = 1 gives -3 + 3 = 0.
  CHECK(r.solution->objective == doctest::Approx(-2.5));
}

TEST_CASE("integral relaxation needs no branching") {
  MixedIntegerProgram mip;
  for (int j = 0; j < 4; ++j) {
    mip.base.AddVariable("", 0, 1, j % 2 ? 1.0 : -1.0);
    mip.binaries.push_back(j);
  }
  const MipResult r = SolveMip(mip);
  CHECK(r.status == MipStatus::kOptimal);
  CHECK(r.branches == 0);
  CHECK(r.solution->objective == doctest::Approx(-2.0));
}

TEST_CASE("node limit and incumbent") {
  // Knapsack-like cover with many fractional optima.
  MixedIntegerProgram mip;
  const int n = 12;
  std::vector<Term> terms;
  for (int j = 0; j < n; ++j) {
    mip.base.AddVariable("", 0, 1, 1.0);
    mip.binaries.push_back(j);
    terms.push_back({j, 2.0});
  }
  mip.base.AddConstraint("cover", terms, RowSense::kGreaterEqual, 7.0);
  MipOptions tight;
  tight.node_limit = 1;
  const MipResult limited = SolveMip(mip, tight);
  CHECK(limited.status == MipStatus::kNodeLimit);
  CHECK_FALSE(limited.proven_optimal);

  MipOptions warm;
  std::vector<double> start(n, 1.0);
  warm.incumbent = start;
  const MipResult r = SolveMip(mip, warm);
  REQUIRE(r.status == MipStatus::kOptimal);
  CHECK(r.solution->objective == doctest::Approx(4.0));
  CHECK(r.incumbent_history.front() == doctest::Approx(12.0));

  std::vector<double> bad(n, 0.0);
  warm.incumbent = bad;
  CHECK_THROWS_AS(SolveMip(mip, warm), Error);
}

TEST_CASE("LP format export") {
  MixedIntegerProgram mip;
  const int x = mip.base.AddVariable("x", 0, 4, 1.5);
  const int f = mip.base.AddVariable("flow", -kInfinity, kInfinity, 0.0);
  mip.base.AddConstraint("row", {{x, 1}, {f, -2}}, RowSense::kGreaterEqual, 1);
  std::ostringstream out;
  WriteLpFormat(mip.base, out, {x});
  const std::string text = out.str();
  CHECK(text.find("Minimize") != std::string::npos);
  CHECK(text.find("row: + 1 x - 2 flow >= 1") != std::string::npos);
  CHECK(text.find("flow free") != std::string::npos);
  CHECK(text.find("Binaries\n x") != std::string::npos);
  CHECK(text.find("End") != std::string::npos);
}

}  // namespace
}  // namespace gridctl
