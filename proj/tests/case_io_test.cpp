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
#include <string>

#include "doctest.h"
#include "gridctl/case_io.hpp"
#include "gridctl/error.hpp"

namespace gridctl {
namespace {

const std::string kDataDir = GRIDCTL_DATA_DIR;

// Two-bus case with one quadratic generator, used by several tests below.
std::string TinyCase(const std::string& gencost = "2 0 0 3 0.02 2 0",
                     const std::string& branch = "1 2 0.01 0.1 0 0 0 0 0 0 1 -360 360") {
  return "function mpc = tiny\n"
         "mpc.baseMVA = 100;\n"
         "mpc.bus = [\n"
         "  1 3 0 0 0 0 1 1 0 135 1 1.05 0.95;\n"
         "  2 1 40 0 0 0 1 1 0 135 1 1.05 0.95;\n"
         "];\n"
         "mpc.gen = [\n"
         "  1 0 0 10 -10 1 100 1 100 0;\n"
         "];\n"
         "mpc.branch = [\n"
         "  " + branch + "\n"
         "];\n"
         "mpc.gencost = [\n"
         "  " + gencost + "\n"
         "];\n";
}

struct Table1Row {
  const char* file;
  int buses, lines, generators;
  double demand;
};

TEST_CASE("IEEE case statistics") {
  const Table1Row rows[] = {
      {"case6ww", 6, 11, 3, 210.0},   {"case9", 9, 9, 3, 315.0},
      {"case14", 14, 20, 5, 259.0},   {"case30", 30, 41, 6, 189.2},
      {"case39", 39, 46, 10, 6254.23}, {"case57", 57, 78, 7, 1250.8},
      {"case118", 118, 179, 54, 4242.0},
  };
  for (const Table1Row& row : rows) {
    CAPTURE(row.file);
    const RawCase raw = ReadCaseFile(kDataDir + "/" + row.file + ".m");
    const CaseStatistics s = ComputeStatistics(raw);
    CHECK(s.buses == row.buses);
    CHECK(s.lines == row.lines);
    CHECK(s.generators == row.generators);
    CHECK(std::abs(s.total_demand - row.demand) < 0.005);

    const PowerGrid grid = BuildGrid(raw);
    double sum = 0.0;
    for (const RawBus& b : raw.buses) sum += b.pd;
    CHECK(grid.total_demand() == sum);
    CHECK(grid.num_buses() == row.buses);
  }
}

TEST_CASE("quadratic cost sampled by chords") {
  BuildOptions options;
  options.sampling_points = 3;
  const PowerGrid grid = BuildGrid(ParseCase(TinyCase()), options);
  REQUIRE(grid.num_generators() == 1);
  const auto& cost = grid.generator(0).cost;
  auto poly = [](double p) { return 0.02 * p * p + 2.0 * p; };
  for (double x : {0.0, 50.0, 100.0}) CHECK(cost(x) == doctest::Approx(poly(x)).epsilon(1e-12));
  REQUIRE(cost.pieces().size() == 2);
  CHECK(cost.pieces()[0].slope == doctest::Approx(3.0));
  CHECK(cost.pieces()[1].slope == doctest::Approx(5.0));
  // Chords lie above the convex curve.
  for (int i = 0; i <= 1000; ++i) {
    const double x = i / 10.0;
    CHECK(cost(x) >= poly(x) - 1e-9);
  }
}

TEST_CASE("linear cost is a single piece") {
  const PowerGrid grid = BuildGrid(ParseCase(TinyCase("2 0 0 2 5 0")));
  const auto& cost = grid.generator(0).cost;
  REQUIRE(cost.pieces().size() == 1);
  CHECK(cost.pieces()[0].slope == doctest::Approx(5.0));
  CHECK(cost(0.0) == doctest::Approx(0.0));
}

TEST_CASE("concave cost is rejected") {
  try {
    BuildGrid(ParseCase(TinyCase("2 0 0 3 -0.02 2 0")));
    FAIL("expected NonConvexCost");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNonConvexCost);
  }
}

TEST_CASE("branch data: unlimited rating, zero resistance, losses") {
  const PowerGrid unlimited = BuildGrid(ParseCase(TinyCase()));
  CHECK(unlimited.branch(0).capacity.unbounded());
  // Losses r f^2 / base sampled on [0, 2 D] = [0, 80].
  const auto& loss = unlimited.branch(0).loss;
  CHECK(loss.domain_max() == doctest::Approx(80.0));
  CHECK(loss(80.0) == doctest::Approx(0.01 * 80.0 * 80.0 / 100.0));
  CHECK(loss(0.0) == doctest::Approx(0.0));

  const PowerGrid rated = BuildGrid(ParseCase(TinyCase("2 0 0 3 0.02 2 0",
                                                       "1 2 0.01 0.1 0 50 0 0 0 0 1 -360 360")));
  CHECK(rated.branch(0).capacity.value() == doctest::Approx(50.0));
  CHECK(rated.branch(0).loss.domain_max() == doctest::Approx(50.0));

  BuildOptions ignore;
  ignore.ignore_line_ratings = true;
  CHECK(BuildGrid(ParseCase(TinyCase("2 0 0 3 0.02 2 0", "1 2 0.01 0.1 0 50 0 0 0 0 1 -360 360")),
                  ignore).branch(0).capacity.unbounded());

  const PowerGrid lossless = BuildGrid(ParseCase(TinyCase("2 0 0 3 0.02 2 0",
                                                          "1 2 0 0.1 0 0 0 0 0 0 1 -360 360")));
  CHECK(lossless.branch(0).loss.IsZero());
}

TEST_CASE("malformed input reports the line") {
  const std::string ragged =
      "mpc.baseMVA = 100;\n"
      "mpc.bus = [\n"
      "  1 3 0;\n"
      "  2 1 40 0;\n"
      "];\n";
  try {
    ParseCase(ragged);
    FAIL("expected MalformedCase");
  } catch (const MalformedCaseError& e) {
    CHECK(e.code() == ErrorCode::kMalformedCase);
    CHECK(e.line() == 4);
  }

  std::string bad = TinyCase();
  bad.replace(bad.find("40"), 2, "4x");
  try {
    ParseCase(bad);
    FAIL("expected MalformedCase");
  } catch (const MalformedCaseError& e) {
    CHECK(e.line() == 5);
  }

  CHECK_THROWS_AS(ParseCase("mpc.baseMVA = 100;\n"), MalformedCaseError);
}

TEST_CASE("references to missing buses") {
  try {
    ParseCase(TinyCase("2 0 0 3 0.02 2 0", "1 7 0.01 0.1 0 0 0 0 0 0 1 -360 360"));
    FAIL("expected DanglingBranch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDanglingBranch);
  }
  std::string text = TinyCase();
  text.replace(text.find("  1 0 0 10"), 3, "  9");
  try {
    ParseCase(text);
    FAIL("expected UnknownBus");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kUnknownBus);
  }
}

TEST_CASE("out-of-service branch is dropped and bad options rejected") {
  const PowerGrid grid = BuildGrid(ParseCase(TinyCase("2 0 0 3 0.02 2 0",
                                                      "1 2 0.01 0.1 0 0 0 0 0 0 0 -360 360")));
  CHECK(grid.num_branches() == 0);
  BuildOptions options;
  options.sampling_points = 1;
  CHECK_THROWS_AS(BuildGrid(ParseCase(TinyCase()), options), Error);
  try {
    ReadCaseFile("/nonexistent/case.m");
    FAIL("expected Io");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kIo);
  }
}

}  // namespace
}  // namespace gridctl
