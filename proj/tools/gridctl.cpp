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

// Command-line front end. Talks to the library only through gridctl.h.
//
// Exit codes: 0 success, 2 model infeasible, 1 anything else.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gridctl/gridctl.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitInfeasible = 2;

struct GridDeleter {
  void operator()(gridctl_grid* g) const { gridctl_grid_free(g); }
};
struct SolutionDeleter {
  void operator()(gridctl_solution* s) const { gridctl_solution_free(s); }
};
struct PlacementDeleter {
  void operator()(gridctl_placement* p) const { gridctl_placement_free(p); }
};
using GridPtr = std::unique_ptr<gridctl_grid, GridDeleter>;
using SolutionPtr = std::unique_ptr<gridctl_solution, SolutionDeleter>;
using PlacementPtr = std::unique_ptr<gridctl_placement, PlacementDeleter>;

// Thrown to unwind with a status already reported.
struct Failure {
  gridctl_status status;
};

void Check(gridctl_status status) {
  if (status == GRIDCTL_OK) return;
  std::fprintf(stderr, "gridctl: %s: %s\n", gridctl_status_name(status), gridctl_last_error());
  throw Failure{status};
}

int ExitCode(gridctl_status status) {
  return status == GRIDCTL_INFEASIBLE ? kExitInfeasible : kExitInput;
}

std::string Num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) x = 0.0;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", x);
  return buf;
}

void WriteText(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) {
    std::fprintf(stderr, "gridctl: io: cannot write %s\n", path.string().c_str());
    throw Failure{GRIDCTL_IO};
  }
}

struct CommonOptions {
  std::string out_dir;
  int sampling_points = 0;
  double tol = 0.0;
  bool ignore_ratings = false;
};

GridPtr Load(const std::string& path, const CommonOptions& common) {
  gridctl_load_options options{common.sampling_points, common.ignore_ratings ? 1 : 0};
  gridctl_grid* grid = nullptr;
  Check(gridctl_grid_load(path.c_str(), &options, &grid));
  return GridPtr(grid);
}

std::vector<int> PlacementBuses(const gridctl_placement* p, int size) {
  std::vector<int> ids(static_cast<std::size_t>(size));
  Check(gridctl_placement_buses(p, ids.data(), ids.size()));
  return ids;
}

std::string JoinIds(const std::vector<int>& ids) {
  std::string out;
  for (int id : ids) {
    if (!out.empty()) out += ' ';
    out += std::to_string(id);
  }
  return out;
}

std::vector<int> ParseIds(const std::string& text) {
  std::vector<int> ids;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, ',')) {
    if (token.empty()) continue;
    std::size_t used = 0;
    int id = 0;
    try {
      id = std::stoi(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size()) {
      std::fprintf(stderr, "gridctl: invalid bus id '%s'\n", token.c_str());
      throw Failure{GRIDCTL_INVALID_ARGUMENT};
    }
    ids.push_back(id);
  }
  return ids;
}

// ---------------------------------------------------------------------------

int RunSolve(const std::string& case_path, const std::string& model_name,
             const std::string& controllers, double lambda, const CommonOptions& common) {
  GridPtr grid = Load(case_path, common);
  gridctl_grid_info info{};
  Check(gridctl_grid_get_info(grid.get(), &info));

  gridctl_model model = GRIDCTL_MODEL_ELECTRICAL;
  std::vector<int> ids;
  if (model_name == "flow") {
    model = GRIDCTL_MODEL_FLOW;
  } else if (model_name == "hybrid") {
    model = GRIDCTL_MODEL_HYBRID;
    if (controllers == "auto") {
      gridctl_place_options options{GRIDCTL_PLACE_EXACT, common.tol, 0};
      if (info.buses > 100) options.mode = GRIDCTL_PLACE_HEURISTIC;
      gridctl_placement* raw = nullptr;
      Check(gridctl_place_full_control(grid.get(), lambda, &options, &raw));
      PlacementPtr placement(raw);
      gridctl_placement_info pinfo{};
      Check(gridctl_placement_get_info(placement.get(), &pinfo));
      ids = PlacementBuses(placement.get(), pinfo.size);
    } else {
      ids = ParseIds(controllers);
    }
  }
  gridctl_solution* raw = nullptr;
  Check(gridctl_solve(grid.get(), model, ids.data(), ids.size(), lambda, &raw));
  SolutionPtr solution(raw);
  gridctl_solution_info sinfo{};
  Check(gridctl_solution_get_info(solution.get(), &sinfo));

  std::printf("model: %s\n", model_name.c_str());
  std::printf("lambda: %s\n", Num(lambda).c_str());
  if (model == GRIDCTL_MODEL_HYBRID) std::printf("controllers: %s\n", JoinIds(ids).c_str());
  std::printf("objective: %s\n", Num(sinfo.objective).c_str());
  std::printf("generation_cost: %s\n", Num(sinfo.generation_cost).c_str());
  std::printf("losses: %s\n", Num(sinfo.losses).c_str());
  std::printf("verified: %s\n", sinfo.feasible ? "yes" : "no");

  if (!common.out_dir.empty()) {
    std::vector<double> flows(static_cast<std::size_t>(info.branches));
    Check(gridctl_solution_flows(solution.get(), flows.data(), flows.size()));
    std::string csv = "branch,from_bus,to_bus,flow_mw\n";
    for (int e = 0; e < info.branches; ++e) {
      int from = 0, to = 0;
      Check(gridctl_grid_branch_endpoints(grid.get(), e, &from, &to));
      csv += std::to_string(e) + "," + std::to_string(from) + "," + std::to_string(to) + "," +
             Num(flows[e]) + "\n";
    }
    WriteText(std::filesystem::path(common.out_dir) / "flows.csv", csv);
    std::vector<double> gen(static_cast<std::size_t>(info.generators));
    Check(gridctl_solution_generation(solution.get(), gen.data(), gen.size()));
    csv = "generator,bus,output_mw\n";
    for (int i = 0; i < info.generators; ++i) {
      int bus = 0;
      Check(gridctl_grid_generator_bus(grid.get(), i, &bus));
      csv += std::to_string(i) + "," + std::to_string(bus) + "," + Num(gen[i]) + "\n";
    }
    WriteText(std::filesystem::path(common.out_dir) / "generation.csv", csv);
  }
  return sinfo.feasible ? kExitOk : kExitInput;
}

int RunPlace(const std::string& case_path, double lambda, std::optional<int> budget, bool exact,
             bool milp, const CommonOptions& common) {
  GridPtr grid = Load(case_path, common);
  gridctl_grid_info info{};
  Check(gridctl_grid_get_info(grid.get(), &info));
  gridctl_place_options options{GRIDCTL_PLACE_EXACT, common.tol, 0};
  if (milp) {
    options.mode = GRIDCTL_PLACE_MILP;
  } else if (!exact && info.buses > 100) {
    options.mode = GRIDCTL_PLACE_HEURISTIC;
  }
  gridctl_placement* raw = nullptr;
  if (budget) {
    Check(gridctl_place_budget(grid.get(), lambda, *budget, &options, &raw));
  } else {
    Check(gridctl_place_full_control(grid.get(), lambda, &options, &raw));
  }
  PlacementPtr placement(raw);
  gridctl_placement_info p{};
  Check(gridctl_placement_get_info(placement.get(), &p));
  const std::vector<int> ids = PlacementBuses(placement.get(), p.size);

  std::printf("lambda: %s\n", Num(lambda).c_str());
  if (budget) std::printf("budget: %d\n", *budget);
  std::printf("controllers: %d\n", p.size);
  std::printf("buses: %s\n", JoinIds(ids).c_str());
  std::printf("fraction: %s\n", Num(static_cast<double>(p.size) / info.buses).c_str());
  std::printf("objective: %s\n", Num(p.objective).c_str());
  std::printf("flow_optimum: %s\n", Num(p.flow_optimum).c_str());
  std::printf("full_control: %s\n", p.full_control ? "yes" : "no");
  std::printf("method: %s\n", p.method);
  std::printf("proven_optimal: %s\n", p.proven_optimal ? "yes" : "no");
  if (!budget) std::printf("lower_bound: %d\n", p.lower_bound);
  std::printf("native_class: %s\n", p.native_class);
  std::printf("lp_solves: %lld\n", p.lp_solves);

  if (!common.out_dir.empty()) {
    std::string csv =
        "lambda,budget,controllers,buses,objective,flow_optimum,full_control,method,lower_bound\n";
    csv += Num(lambda) + "," + (budget ? std::to_string(*budget) : "") + "," +
           std::to_string(p.size) + "," + JoinIds(ids) + "," + Num(p.objective) + "," +
           Num(p.flow_optimum) + "," + (p.full_control ? "1" : "0") + "," + p.method + "," +
           std::to_string(p.lower_bound) + "\n";
    WriteText(std::filesystem::path(common.out_dir) / "placement.csv", csv);
  }
  return kExitOk;
}

int RunExperiment(const std::string& kind, const std::string& config, const CommonOptions& common) {
  gridctl_experiment_overrides overrides{common.out_dir.empty() ? nullptr : common.out_dir.c_str(),
                                         common.sampling_points, common.tol};
  std::size_t rows = 0;
  Check(gridctl_experiment_run(kind.c_str(), config.c_str(), &overrides, &rows));
  std::printf("experiment: %s\nrows: %zu\n", kind.c_str(), rows);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Flow-control placement and DC power flow on MATPOWER cases", "gridctl"};
  app.set_version_flag("--version", std::string(gridctl_version()));
  app.require_subcommand(1);

  CommonOptions common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", common.out_dir, "Output directory");
    sub->add_option("--sampling-points", common.sampling_points,
                    "Samples per cost and loss curve (default 5)")
        ->check(CLI::Range(2, 1000));
    sub->add_option("--tol", common.tol, "Relative full-control tolerance (default 1e-5)")
        ->check(CLI::PositiveNumber);
  };

  std::string case_path, model = "electrical", controllers = "auto";
  double lambda = 1.0;
  CLI::App* solve = app.add_subcommand("solve", "Solve one power flow model");
  solve->add_option("case", case_path, "MATPOWER case file")->required();
  solve->add_option("--model", model, "flow, electrical or hybrid")
      ->check(CLI::IsMember({"flow", "electrical", "hybrid"}));
  solve->add_option("--controllers", controllers,
                    "Comma-separated bus ids, or auto for a smallest full-control set");
  solve->add_option("--lambda", lambda, "Weight of generation cost against losses")
      ->check(CLI::Range(0.0, 1.0));
  solve->add_flag("--ignore-ratings", common.ignore_ratings, "Treat every branch as unbounded");
  add_common(solve);

  std::optional<int> budget;
  bool exact = false, milp = false;
  CLI::App* place = app.add_subcommand("place", "Place flow-control buses");
  place->add_option("case", case_path, "MATPOWER case file")->required();
  place->add_option("--lambda", lambda, "Weight of generation cost against losses")
      ->check(CLI::Range(0.0, 1.0));
  place->add_option("--budget", budget, "Best placement with at most this many buses")
      ->check(CLI::NonNegativeNumber);
  auto* exact_flag = place->add_flag("--exact", exact, "Exact search on every case size");
  place->add_flag("--milp", milp, "Use the big-M mixed-integer formulation")->excludes(exact_flag);
  place->add_flag("--ignore-ratings", common.ignore_ratings, "Treat every branch as unbounded");
  add_common(place);

  std::string kind, config;
  CLI::App* experiment = app.add_subcommand("experiment", "Run a batch experiment");
  experiment->add_option("kind", kind, "lambda-sweep, controller-vs-lambda, topology or load-scaling")
      ->required()
      ->check(CLI::IsMember({"lambda-sweep", "controller-vs-lambda", "topology", "load-scaling"}));
  experiment->add_option("--config", config, "JSON experiment config")->required();
  add_common(experiment);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*solve) return RunSolve(case_path, model, controllers, lambda, common);
    if (*place) return RunPlace(case_path, lambda, budget, exact, milp, common);
    return RunExperiment(kind, config, common);
  } catch (const Failure& f) {
    return ExitCode(f.status);
  }
}
