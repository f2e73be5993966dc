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

// Exercises libgridctl through its C header only.

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "gridctl/gridctl.h"

namespace {

const std::string kDataDir = GRIDCTL_DATA_DIR;
const std::string kFixtureDir = GRIDCTL_FIXTURE_DIR;

gridctl_grid* Load(const std::string& path, int ignore_ratings = 0) {
  gridctl_load_options options{0, ignore_ratings};
  gridctl_grid* grid = nullptr;
  REQUIRE(gridctl_grid_load(path.c_str(), &options, &grid) == GRIDCTL_OK);
  REQUIRE(grid != nullptr);
  return grid;
}

TEST_CASE("version and status names") {
  CHECK(std::strlen(gridctl_version()) > 0);
  CHECK(std::string(gridctl_status_name(GRIDCTL_OK)) == "Ok");
  CHECK(std::string(gridctl_status_name(GRIDCTL_INFEASIBLE)) == "InfeasibleModel");
  CHECK(std::string(gridctl_status_name(static_cast<gridctl_status>(1234))) == "Unknown");
}

TEST_CASE("load errors") {
  gridctl_grid* grid = nullptr;
  CHECK(gridctl_grid_load("/nonexistent/case.m", nullptr, &grid) == GRIDCTL_IO);
  CHECK(grid == nullptr);
  CHECK(std::strlen(gridctl_last_error()) > 0);
  CHECK(gridctl_grid_load(nullptr, nullptr, &grid) == GRIDCTL_INVALID_ARGUMENT);
  CHECK(gridctl_grid_load((kFixtureDir + "/triangle3.m").c_str(), nullptr, nullptr) ==
        GRIDCTL_INVALID_ARGUMENT);
  gridctl_grid_free(nullptr);
  gridctl_solution_free(nullptr);
  gridctl_placement_free(nullptr);
}

TEST_CASE("grid accessors") {
  gridctl_grid* grid = Load(kDataDir + "/case9.m");
  gridctl_grid_info info{};
  REQUIRE(gridctl_grid_get_info(grid, &info) == GRIDCTL_OK);
  CHECK(info.buses == 9);
  CHECK(info.branches == 9);
  CHECK(info.lines == 9);
  CHECK(info.generators == 3);
  CHECK(info.total_demand == doctest::Approx(315.0));
  CHECK(info.base_mva == 100.0);
  int id = 0;
  CHECK(gridctl_grid_bus_id(grid, 0, &id) == GRIDCTL_OK);
  CHECK(id == 1);
  CHECK(gridctl_grid_bus_id(grid, 9, &id) == GRIDCTL_UNKNOWN_BUS);
  int from = 0, to = 0;
  CHECK(gridctl_grid_branch_endpoints(grid, 0, &from, &to) == GRIDCTL_OK);
  CHECK(from == 1);
  CHECK(to == 4);
  CHECK(gridctl_grid_generator_bus(grid, 2, &id) == GRIDCTL_OK);
  CHECK(id == 3);
  gridctl_grid_free(grid);
}

TEST_CASE("solving the triangle") {
  gridctl_grid* grid = Load(kFixtureDir + "/triangle3.m");
  gridctl_solution* sol = nullptr;
  gridctl_solution_info info{};

  REQUIRE(gridctl_solve(grid, GRIDCTL_MODEL_FLOW, nullptr, 0, 1.0, &sol) == GRIDCTL_OK);
  REQUIRE(gridctl_solution_get_info(sol, &info) == GRIDCTL_OK);
  CHECK(info.objective == doctest::Approx(90.0));
  CHECK(info.feasible == 1);
  gridctl_solution_free(sol);

  REQUIRE(gridctl_solve(grid, GRIDCTL_MODEL_ELECTRICAL, nullptr, 0, 1.0, &sol) == GRIDCTL_OK);
  REQUIRE(gridctl_solution_get_info(sol, &info) == GRIDCTL_OK);
  CHECK(info.objective == doctest::Approx(150.0));
  std::vector<double> flows(3), gen(2);
  CHECK(gridctl_solution_flows(sol, flows.data(), flows.size()) == GRIDCTL_OK);
  CHECK(gridctl_solution_flows(sol, flows.data(), 2) == GRIDCTL_INVALID_ARGUMENT);
  CHECK(gridctl_solution_generation(sol, gen.data(), gen.size()) == GRIDCTL_OK);
  CHECK(gen[0] + gen[1] == doctest::Approx(90.0));
  double rated = 0.0;
  for (double f : flows) rated = std::max(rated, std::abs(f));
  CHECK(rated <= 50.0 + 1e-6);
  gridctl_solution_free(sol);

  // Controlling bus 2 recovers the flow optimum.
  const int controls[] = {2};
  REQUIRE(gridctl_solve(grid, GRIDCTL_MODEL_HYBRID, controls, 1, 1.0, &sol) == GRIDCTL_OK);
  REQUIRE(gridctl_solution_get_info(sol, &info) == GRIDCTL_OK);
  CHECK(info.objective == doctest::Approx(90.0));
  gridctl_solution_free(sol);

  const int unknown[] = {42};
  sol = nullptr;
  CHECK(gridctl_solve(grid, GRIDCTL_MODEL_HYBRID, unknown, 1, 1.0, &sol) == GRIDCTL_UNKNOWN_BUS);
  CHECK(sol == nullptr);
  CHECK(gridctl_solve(grid, GRIDCTL_MODEL_FLOW, nullptr, 0, 1.5, &sol) == GRIDCTL_INVALID_ARGUMENT);
  CHECK(gridctl_solve(grid, static_cast<gridctl_model>(7), nullptr, 0, 1.0, &sol) ==
        GRIDCTL_INVALID_ARGUMENT);
  gridctl_grid_free(grid);
}

TEST_CASE("infeasible case") {
  gridctl_grid* grid = Load(kFixtureDir + "/starved3.m");
  gridctl_solution* sol = nullptr;
  CHECK(gridctl_solve(grid, GRIDCTL_MODEL_FLOW, nullptr, 0, 1.0, &sol) == GRIDCTL_INFEASIBLE);
  CHECK(sol == nullptr);
  gridctl_placement* placement = nullptr;
  CHECK(gridctl_place_full_control(grid, 1.0, nullptr, &placement) == GRIDCTL_INFEASIBLE);
  double rho = 0.0;
  CHECK(gridctl_max_load_factor(grid, 0, 0, &rho) == GRIDCTL_INFEASIBLE);
  gridctl_grid_free(grid);
}

TEST_CASE("placement") {
  gridctl_grid* grid = Load(kDataDir + "/case14.m", 1);
  gridctl_placement* placement = nullptr;
  gridctl_placement_info info{};

  for (gridctl_placement_mode mode : {GRIDCTL_PLACE_EXACT, GRIDCTL_PLACE_MILP}) {
    gridctl_place_options options{mode, 0.0, 0};
    REQUIRE(gridctl_place_full_control(grid, 0.5, &options, &placement) == GRIDCTL_OK);
    REQUIRE(gridctl_placement_get_info(placement, &info) == GRIDCTL_OK);
    CHECK(info.full_control == 1);
    CHECK(info.proven_optimal == 1);
    CHECK(info.lower_bound == info.size);
    CHECK(info.objective == doctest::Approx(info.flow_optimum).epsilon(1e-5));
    std::vector<int> buses(info.size);
    CHECK(gridctl_placement_buses(placement, buses.data(), buses.size()) == GRIDCTL_OK);
    for (std::size_t i = 1; i < buses.size(); ++i) CHECK(buses[i - 1] < buses[i]);
    gridctl_placement_free(placement);
  }
  const int full = info.size;

  gridctl_place_options options{GRIDCTL_PLACE_EXACT, 0.0, 0};
  REQUIRE(gridctl_place_budget(grid, 0.5, 1, &options, &placement) == GRIDCTL_OK);
  REQUIRE(gridctl_placement_get_info(placement, &info) == GRIDCTL_OK);
  CHECK(info.size <= 1);
  CHECK(info.objective >= info.flow_optimum - 1e-6);
  CHECK(info.full_control == (full <= 1 ? 1 : 0));
  gridctl_placement_free(placement);

  CHECK(gridctl_place_budget(grid, 0.5, -1, &options, &placement) == GRIDCTL_INVALID_ARGUMENT);
  gridctl_grid_free(grid);
}

TEST_CASE("load factor") {
  gridctl_grid* grid = Load(kFixtureDir + "/triangle3.m");
  double rho = 0.0;
  REQUIRE(gridctl_max_load_factor(grid, 0, 1, &rho) == GRIDCTL_OK);
  CHECK(rho == doctest::Approx(3.0));
  REQUIRE(gridctl_max_load_factor(grid, 1, 1, &rho) == GRIDCTL_OK);
  CHECK(std::isinf(rho));
  // Without pre-scaling the rated branch keeps its 50 MW.
  REQUIRE(gridctl_max_load_factor(grid, 0, 0, &rho) == GRIDCTL_OK);
  CHECK(rho == doctest::Approx(50.0 / 30.0));
  gridctl_grid_free(grid);
}

TEST_CASE("experiment run") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "gridctl_capi_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const fs::path config = dir / "sweep.json";
  std::ofstream(config) << R"({"kind": "lambda-sweep", "cases": [")" << kFixtureDir
                        << R"(/triangle3.m"], "lambdas": [0, 0.5, 1]})";
  gridctl_experiment_overrides overrides{nullptr, 0, 0.0};
  const std::string out = (dir / "out").string();
  overrides.out_dir = out.c_str();
  std::size_t rows = 0;
  REQUIRE(gridctl_experiment_run("lambda-sweep", config.c_str(), &overrides, &rows) == GRIDCTL_OK);
  CHECK(rows == 4);
  CHECK(fs::exists(dir / "out" / "lambda_sweep.csv"));
  CHECK(fs::exists(dir / "out" / "manifest.json"));
  CHECK(gridctl_experiment_run("topology", config.c_str(), &overrides, &rows) ==
        GRIDCTL_INVALID_ARGUMENT);
  CHECK(gridctl_experiment_run(nullptr, (dir / "missing.json").c_str(), nullptr, nullptr) ==
        GRIDCTL_IO);
}

}  // namespace
