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
#include <random>
#include <vector>

#include "doctest.h"
#include "gridctl/error.hpp"
#include "gridctl/grid.hpp"
#include "test_grids.hpp"

namespace gridctl {
namespace {

using testing::MakeGrid;

// Triangle: generator on bus 0 (slope 1), generator on bus 1 (slope 3),
// consumer of 90 MW on bus 2.
PowerGrid Triangle(std::optional<double> cap02 = std::nullopt) {
  return MakeGrid({0.0, 0.0, 90.0},
                  {{0, 1, 0.1, std::nullopt, 0.01}, {1, 2, 0.1, std::nullopt, 0.01},
                   {0, 2, 0.1, cap02, 0.01}},
                  {{0, 100.0, 1.0}, {1, 100.0, 3.0}});
}

TEST_CASE("net outflow") {
  const PowerGrid g = Triangle();
  const Flow f(std::vector<double>{30.0, 30.0, 60.0});
  CHECK(NetOutflow(g, f, 0) == doctest::Approx(90.0));
  CHECK(NetOutflow(g, f, 1) == doctest::Approx(0.0));
  CHECK(NetOutflow(g, f, 2) == doctest::Approx(-90.0));
  CHECK(f.Directed(g, 0, 1) == doctest::Approx(-30.0));
  CHECK_THROWS_AS(NetOutflow(g, f, 5), Error);
  // Net outflows always sum to zero.
  double sum = 0.0;
  for (double x : NetOutflows(g, f)) sum += x;
  CHECK(std::abs(sum) < 1e-12);
}

TEST_CASE("feasibility check reports every violation kind") {
  const PowerGrid g = Triangle(50.0);
  CHECK(CheckFeasible(g, Flow(std::vector<double>{40.0, 40.0, 50.0})).feasible());

  const FeasibilityReport over = CheckFeasible(g, Flow(std::vector<double>{30.0, 30.0, 60.0}));
  REQUIRE(over.violations.size() == 1);
  CHECK(over.violations[0].kind == Violation::Kind::kCapacity);
  CHECK(over.violations[0].magnitude == doctest::Approx(10.0));

  const FeasibilityReport short_supply = CheckFeasible(g, Flow(std::vector<double>{0.0, 0.0, 10.0}));
  bool consumer = false;
  for (const Violation& v : short_supply.violations) consumer |= v.kind == Violation::Kind::kConsumer;
  CHECK(consumer);

  // Bus 1 would have to produce a negative amount.
  const FeasibilityReport negative = CheckFeasible(g, Flow(std::vector<double>{50.0, 40.0, 50.0}));
  bool generator = false;
  for (const Violation& v : negative.violations) generator |= v.kind == Violation::Kind::kGenerator;
  CHECK(generator);

  // Pass-through bus without generation.
  const PowerGrid path = MakeGrid({0.0, 0.0, 10.0}, {{0, 1, 0.1, {}}, {1, 2, 0.1, {}}}, {{0, 20.0, 1.0}});
  const FeasibilityReport leak = CheckFeasible(path, Flow(std::vector<double>{10.0, 8.0}));
  bool conservation = false;
  for (const Violation& v : leak.violations) conservation |= v.kind == Violation::Kind::kConservation;
  CHECK(conservation);
}

TEST_CASE("flow cost and lambda endpoints") {
  const PowerGrid g = Triangle();
  const Flow f(std::vector<double>{30.0, 30.0, 60.0});
  const FlowCosts c1 = FlowCost(g, f, 1.0);
  const FlowCosts c0 = FlowCost(g, f, 0.0);
  CHECK(c1.generation == doctest::Approx(90.0));
  CHECK(c1.combined == c1.generation);
  CHECK(c0.combined == c0.losses);
  double expected = 0.0;
  for (int e = 0; e < 3; ++e) expected += g.branch(e).loss(std::abs(f[e]));
  CHECK(c0.losses == doctest::Approx(expected));
  // Combined cost is affine in lambda.
  for (double lambda : {0.1, 0.25, 0.5, 0.9}) {
    const FlowCosts c = FlowCost(g, f, lambda);
    CHECK(c.combined == doctest::Approx(lambda * c1.generation + (1 - lambda) * c0.losses));
  }
  CHECK_THROWS_AS(FlowCost(g, f, 1.5), Error);
  try {
    FlowCost(g, Flow(std::vector<double>{-150.0, 0.0, 240.0}), 1.0);
    FAIL("expected DomainExceeded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDomainExceeded);
  }
}

TEST_CASE("generator bus with local demand") {
  const PowerGrid g = MakeGrid({20.0, 10.0}, {{0, 1, 0.1, {}}}, {{0, 50.0, 2.0}});
  const Flow f(std::vector<double>{10.0});
  CHECK(GeneratorOutputs(g, f)[0] == doctest::Approx(30.0));
  CHECK(CheckFeasible(g, f).feasible());
  CHECK(FlowCost(g, f, 1.0).generation == doctest::Approx(60.0));
}

TEST_CASE("grid validation and helpers") {
  CHECK_THROWS_AS(MakeGrid({0.0, 1.0}, {{0, 0, 0.1, {}}}, {{0, 5.0, 1.0}}), Error);
  CHECK_THROWS_AS(MakeGrid({0.0, 1.0}, {{0, 1, 0.0, {}}}, {{0, 5.0, 1.0}}), Error);
  CHECK_THROWS_AS(MakeGrid({0.0, -1.0}, {{0, 1, 0.1, {}}}, {{0, 5.0, 1.0}}), Error);
  CHECK_THROWS_AS(MakeGrid({0.0, 1.0}, {{0, 3, 0.1, {}}}, {{0, 5.0, 1.0}}), Error);

  const PowerGrid g = Triangle(50.0);
  CHECK(g.BusIndex(3) == 2);
  try {
    g.BusIndex(42);
    FAIL("expected UnknownBus");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kUnknownBus);
  }
  CHECK(g.coupling(0) == doctest::Approx(1000.0));
  CHECK(g.total_demand() == doctest::Approx(90.0));
  CHECK(g.total_generation_capacity() == doctest::Approx(200.0));
  CHECK(g.is_consumer(2));
  CHECK(!g.generator_at(2));

  const PowerGrid half = g.WithScaledCapacities(0.5);
  CHECK(half.branch(2).capacity.value() == doctest::Approx(25.0));
  CHECK(half.branch(0).capacity.unbounded());

  const ControlSet cs(std::vector<int>{2, 0, 2});
  CHECK(cs.members() == std::vector<int>{0, 2});
  CHECK(cs.contains(2));
  CHECK(!cs.contains(1));
  CHECK_THROWS_AS(ControlSet(std::vector<int>{7}).Validate(g), Error);
  CHECK(ControlSet::All(3).size() == 3);
}

}  // namespace
}  // namespace gridctl
