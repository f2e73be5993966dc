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

#include "gridctl/gridctl.h"

#include <exception>
#include <new>
#include <string>
#include <vector>

#include "gridctl/case_io.hpp"
#include "gridctl/error.hpp"
#include "gridctl/experiments.hpp"
#include "gridctl/placement.hpp"
#include "gridctl/power_flow.hpp"

#ifndef GRIDCTL_VERSION
#define GRIDCTL_VERSION "unknown"
#endif

struct gridctl_grid {
  gridctl::PowerGrid grid;
  gridctl::CaseStatistics stats;
};

struct gridctl_solution {
  gridctl::ModelSolution solution;
  bool feasible = false;
};

struct gridctl_placement {
  gridctl::PlacementResult result;
  std::vector<int> bus_ids;
};

namespace {

using gridctl::Error;
using gridctl::ErrorCode;

static_assert(static_cast<int>(ErrorCode::kInvalidArgument) == GRIDCTL_INVALID_ARGUMENT);
static_assert(static_cast<int>(ErrorCode::kInfeasibleModel) == GRIDCTL_INFEASIBLE);
static_assert(static_cast<int>(ErrorCode::kIo) == GRIDCTL_IO);

thread_local std::string last_error;

gridctl_status Fail(gridctl_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

// Runs fn, translating exceptions into status codes.
template <typename Fn>
gridctl_status Guard(Fn&& fn) {
  try {
    last_error.clear();
    fn();
    return GRIDCTL_OK;
  } catch (const Error& e) {
    return Fail(static_cast<gridctl_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return Fail(GRIDCTL_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Fail(GRIDCTL_INTERNAL, e.what());
  }
}

void Require(bool ok, const char* message) {
  if (!ok) throw Error(ErrorCode::kInvalidArgument, message);
}

gridctl::PlacementOptions ToOptions(const gridctl_place_options* options) {
  gridctl::PlacementOptions out;
  if (!options) return out;
  switch (options->mode) {
    case GRIDCTL_PLACE_EXACT: out.mode = gridctl::PlacementMode::kExact; break;
    case GRIDCTL_PLACE_HEURISTIC: out.mode = gridctl::PlacementMode::kHeuristic; break;
    case GRIDCTL_PLACE_MILP: out.mode = gridctl::PlacementMode::kMilp; break;
    default: Require(false, "unknown placement mode");
  }
  Require(options->tol >= 0.0, "tol must be non-negative");
  if (options->tol > 0.0) out.tol = options->tol;
  Require(options->lp_budget >= 0, "lp_budget must be non-negative");
  if (options->lp_budget > 0) out.lp_budget = options->lp_budget;
  return out;
}

gridctl_placement* Wrap(const gridctl::PowerGrid& grid, gridctl::PlacementResult result) {
  auto* out = new gridctl_placement{std::move(result), {}};
  for (int v : out->result.control_set.members()) out->bus_ids.push_back(grid.bus(v).id);
  return out;
}

}  // namespace

extern "C" {

const char* gridctl_version(void) { return GRIDCTL_VERSION; }

const char* gridctl_status_name(gridctl_status status) {
  switch (status) {
    case GRIDCTL_OK: return "Ok";
    case GRIDCTL_INTERNAL: return "Internal";
    default:
      if (status >= GRIDCTL_INVALID_ARGUMENT && status <= GRIDCTL_IO) {
        return gridctl::ErrorCodeName(static_cast<ErrorCode>(status));
      }
      return "Unknown";
  }
}

const char* gridctl_last_error(void) { return last_error.c_str(); }

gridctl_status gridctl_grid_load(const char* path, const gridctl_load_options* options,
                                 gridctl_grid** out) {
  return Guard([&] {
    Require(path && out, "null argument");
    *out = nullptr;
    gridctl::BuildOptions build;
    if (options) {
      Require(options->sampling_points >= 0, "sampling_points must be non-negative");
      if (options->sampling_points > 0) build.sampling_points = options->sampling_points;
      build.ignore_line_ratings = options->ignore_line_ratings != 0;
    }
    const gridctl::RawCase raw = gridctl::ReadCaseFile(path);
    *out = new gridctl_grid{gridctl::BuildGrid(raw, build), gridctl::ComputeStatistics(raw)};
  });
}

void gridctl_grid_free(gridctl_grid* grid) { delete grid; }

gridctl_status gridctl_grid_get_info(const gridctl_grid* grid, gridctl_grid_info* out) {
  return Guard([&] {
    Require(grid && out, "null argument");
    out->buses = grid->grid.num_buses();
    out->branches = grid->grid.num_branches();
    out->generators = grid->grid.num_generators();
    out->lines = grid->stats.lines;
    out->total_demand = grid->grid.total_demand();
    out->base_mva = grid->grid.base_mva();
  });
}

gridctl_status gridctl_grid_bus_id(const gridctl_grid* grid, int index, int* id) {
  return Guard([&] {
    Require(grid && id, "null argument");
    grid->grid.CheckBus(index);
    *id = grid->grid.bus(index).id;
  });
}

gridctl_status gridctl_grid_generator_bus(const gridctl_grid* grid, int generator, int* bus_id) {
  return Guard([&] {
    Require(grid && bus_id, "null argument");
    Require(generator >= 0 && generator < grid->grid.num_generators(), "generator out of range");
    *bus_id = grid->grid.bus(grid->grid.generators()[generator].bus).id;
  });
}

gridctl_status gridctl_grid_branch_endpoints(const gridctl_grid* grid, int branch, int* from_id,
                                             int* to_id) {
  return Guard([&] {
    Require(grid && from_id && to_id, "null argument");
    Require(branch >= 0 && branch < grid->grid.num_branches(), "branch out of range");
    *from_id = grid->grid.bus(grid->grid.branch(branch).from).id;
    *to_id = grid->grid.bus(grid->grid.branch(branch).to).id;
  });
}

gridctl_status gridctl_solve(const gridctl_grid* grid, gridctl_model model, const int* controls,
                             size_t num_controls, double lambda, gridctl_solution** out) {
  return Guard([&] {
    Require(grid && out, "null argument");
    *out = nullptr;
    gridctl::ModelKind kind;
    switch (model) {
      case GRIDCTL_MODEL_FLOW: kind = gridctl::ModelKind::Flow(); break;
      case GRIDCTL_MODEL_ELECTRICAL: kind = gridctl::ModelKind::Electrical(); break;
      case GRIDCTL_MODEL_HYBRID: {
        Require(controls || num_controls == 0, "null control list");
        std::vector<int> members;
        for (size_t i = 0; i < num_controls; ++i) members.push_back(grid->grid.BusIndex(controls[i]));
        kind = gridctl::ModelKind::Hybrid(gridctl::ControlSet(members));
        break;
      }
      default: Require(false, "unknown model");
    }
    gridctl::ModelSolution s = gridctl::SolveModel(grid->grid, kind, lambda);
    const bool feasible = gridctl::CheckFeasible(grid->grid, s.flow).feasible();
    *out = new gridctl_solution{std::move(s), feasible};
  });
}

void gridctl_solution_free(gridctl_solution* solution) { delete solution; }

gridctl_status gridctl_solution_get_info(const gridctl_solution* solution,
                                         gridctl_solution_info* out) {
  return Guard([&] {
    Require(solution && out, "null argument");
    out->objective = solution->solution.objective;
    out->generation_cost = solution->solution.costs.generation;
    out->losses = solution->solution.costs.losses;
    out->iterations = solution->solution.iterations;
    out->feasible = solution->feasible ? 1 : 0;
  });
}

gridctl_status gridctl_solution_flows(const gridctl_solution* solution, double* out, size_t size) {
  return Guard([&] {
    Require(solution && out, "null argument");
    const std::vector<double>& f = solution->solution.flow.values();
    Require(size >= f.size(), "output buffer too small");
    for (size_t e = 0; e < f.size(); ++e) out[e] = f[e];
  });
}

gridctl_status gridctl_solution_generation(const gridctl_solution* solution, double* out,
                                           size_t size) {
  return Guard([&] {
    Require(solution && out, "null argument");
    const std::vector<double>& g = solution->solution.generation;
    Require(size >= g.size(), "output buffer too small");
    for (size_t i = 0; i < g.size(); ++i) out[i] = g[i];
  });
}

gridctl_status gridctl_place_full_control(const gridctl_grid* grid, double lambda,
                                          const gridctl_place_options* options,
                                          gridctl_placement** out) {
  return Guard([&] {
    Require(grid && out, "null argument");
    *out = nullptr;
    *out = Wrap(grid->grid, gridctl::MinFullControlSet(grid->grid, lambda, ToOptions(options)));
  });
}

gridctl_status gridctl_place_budget(const gridctl_grid* grid, double lambda, int budget,
                                    const gridctl_place_options* options, gridctl_placement** out) {
  return Guard([&] {
    Require(grid && out, "null argument");
    *out = nullptr;
    *out = Wrap(grid->grid, gridctl::BestUnderBudget(grid->grid, lambda, budget, ToOptions(options)));
  });
}

void gridctl_placement_free(gridctl_placement* placement) { delete placement; }

gridctl_status gridctl_placement_get_info(const gridctl_placement* placement,
                                          gridctl_placement_info* out) {
  return Guard([&] {
    Require(placement && out, "null argument");
    const gridctl::PlacementResult& r = placement->result;
    out->size = r.control_set.size();
    out->lower_bound = r.lower_bound;
    out->full_control = r.full_control ? 1 : 0;
    out->proven_optimal = r.proven_optimal ? 1 : 0;
    out->objective = r.achieved_objective;
    out->flow_optimum = r.flow_optimum;
    out->lp_solves = r.lp_solves;
    out->method = gridctl::PlacementModeName(r.method);
    out->native_class = gridctl::NativeClassName(r.native_class);
  });
}

gridctl_status gridctl_placement_buses(const gridctl_placement* placement, int* out, size_t size) {
  return Guard([&] {
    Require(placement && (out || placement->bus_ids.empty()), "null argument");
    Require(size >= placement->bus_ids.size(), "output buffer too small");
    for (size_t i = 0; i < placement->bus_ids.size(); ++i) out[i] = placement->bus_ids[i];
  });
}

gridctl_status gridctl_max_load_factor(const gridctl_grid* grid, int k, int prescale, double* rho) {
  return Guard([&] {
    Require(grid && rho, "null argument");
    const gridctl::PowerGrid g = prescale ? gridctl::PrescaleCapacities(grid->grid) : grid->grid;
    const auto r = gridctl::MaxLoadFactor(g, k);
    if (!r) throw Error(ErrorCode::kInfeasibleModel, "infeasible at every load factor");
    *rho = r->rho;
  });
}

gridctl_status gridctl_experiment_run(const char* kind, const char* config_path,
                                      const gridctl_experiment_overrides* overrides,
                                      size_t* num_rows) {
  return Guard([&] {
    Require(config_path != nullptr, "null config path");
    gridctl::ExperimentConfig config = gridctl::LoadExperimentConfig(config_path);
    if (kind) {
      const auto parsed = gridctl::ParseExperimentKind(kind);
      Require(parsed.has_value(), "unknown experiment kind");
      if (*parsed != config.kind) {
        throw Error(ErrorCode::kInvalidArgument,
                    std::string("config describes a ") + gridctl::ExperimentKindName(config.kind) +
                        " experiment, not " + kind);
      }
    }
    if (overrides) {
      if (overrides->out_dir) config.out_dir = overrides->out_dir;
      if (overrides->sampling_points != 0) config.sampling_points = overrides->sampling_points;
      if (overrides->tol != 0.0) config.tol = overrides->tol;
    }
    config.Validate();
    const gridctl::ExperimentReport report = gridctl::RunExperiment(config);
    gridctl::WriteReport(config, report);
    if (num_rows) {
      *num_rows = 0;
      for (const auto& t : report.tables) *num_rows += t.rows.size();
    }
  });
}

}  // extern "C"
