/* Copyright 2026 The gridctl Authors
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface of libgridctl.
 *
 * Objects are opaque handles created by a function returning gridctl_status
 * and released with the matching *_free. Every function returns GRIDCTL_OK or
 * an error code; the message of the most recent failure on the calling thread
 * is available from gridctl_last_error(). Buses are named by their external
 * ids from the case file.
 */

#ifndef GRIDCTL_GRIDCTL_H_
#define GRIDCTL_GRIDCTL_H_

#include <stddef.h>

#if defined(_WIN32)
#define GRIDCTL_API __declspec(dllexport)
#else
#define GRIDCTL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gridctl_status {
  GRIDCTL_OK = 0,
  GRIDCTL_INVALID_ARGUMENT = 1,
  GRIDCTL_MALFORMED_CASE = 2,
  GRIDCTL_DANGLING_BRANCH = 3,
  GRIDCTL_NON_CONVEX_COST = 4,
  GRIDCTL_UNKNOWN_BUS = 5,
  GRIDCTL_DOMAIN_EXCEEDED = 6,
  GRIDCTL_INFEASIBLE = 7,
  GRIDCTL_NODE_LIMIT = 8,
  GRIDCTL_NUMERICAL = 9,
  GRIDCTL_BUDGET_EXCEEDED = 10,
  GRIDCTL_NOT_A_CYCLE = 11,
  GRIDCTL_NOT_A_CACTUS = 12,
  GRIDCTL_UNBOUNDED_COSTLY_EDGE = 13,
  GRIDCTL_IO = 14,
  GRIDCTL_INTERNAL = 99
} gridctl_status;

typedef enum gridctl_model {
  GRIDCTL_MODEL_FLOW = 0,
  GRIDCTL_MODEL_ELECTRICAL = 1,
  GRIDCTL_MODEL_HYBRID = 2
} gridctl_model;

typedef enum gridctl_placement_mode {
  GRIDCTL_PLACE_EXACT = 0,
  GRIDCTL_PLACE_HEURISTIC = 1,
  GRIDCTL_PLACE_MILP = 2
} gridctl_placement_mode;

typedef struct gridctl_grid gridctl_grid;
typedef struct gridctl_solution gridctl_solution;
typedef struct gridctl_placement gridctl_placement;

GRIDCTL_API const char* gridctl_version(void);
GRIDCTL_API const char* gridctl_status_name(gridctl_status status);
/* Message of the last failure on this thread; "" when none. */
GRIDCTL_API const char* gridctl_last_error(void);

/* ---- grids ---- */

typedef struct gridctl_load_options {
  int sampling_points;     /* 0 = default (5) */
  int ignore_line_ratings; /* treat every branch as unbounded */
} gridctl_load_options;

/* options may be NULL. */
GRIDCTL_API gridctl_status gridctl_grid_load(const char* path, const gridctl_load_options* options,
                                             gridctl_grid** out);
GRIDCTL_API void gridctl_grid_free(gridctl_grid* grid);

typedef struct gridctl_grid_info {
  int buses;
  int branches;
  int generators;
  int lines; /* distinct connected bus pairs */
  double total_demand;
  double base_mva;
} gridctl_grid_info;

GRIDCTL_API gridctl_status gridctl_grid_get_info(const gridctl_grid* grid, gridctl_grid_info* out);
/* External id of the bus at internal index `index`. */
GRIDCTL_API gridctl_status gridctl_grid_bus_id(const gridctl_grid* grid, int index, int* id);
GRIDCTL_API gridctl_status gridctl_grid_generator_bus(const gridctl_grid* grid, int generator,
                                                      int* bus_id);
GRIDCTL_API gridctl_status gridctl_grid_branch_endpoints(const gridctl_grid* grid, int branch,
                                                         int* from_id, int* to_id);

/* ---- models ---- */

/* Optimum of `model` at weight lambda in [0, 1]. `controls` lists bus ids
 * for the hybrid model and is ignored otherwise. Returns GRIDCTL_INFEASIBLE
 * when no feasible flow exists. */
GRIDCTL_API gridctl_status gridctl_solve(const gridctl_grid* grid, gridctl_model model,
                                         const int* controls, size_t num_controls, double lambda,
                                         gridctl_solution** out);
GRIDCTL_API void gridctl_solution_free(gridctl_solution* solution);

typedef struct gridctl_solution_info {
  double objective;
  double generation_cost;
  double losses;
  long long iterations;
  int feasible; /* re-checked against capacities, balances and generator limits */
} gridctl_solution_info;

GRIDCTL_API gridctl_status gridctl_solution_get_info(const gridctl_solution* solution,
                                                     gridctl_solution_info* out);
/* Flow on each branch in MW, positive from its first to its second bus.
 * `out` must hold gridctl_grid_info.branches values. */
GRIDCTL_API gridctl_status gridctl_solution_flows(const gridctl_solution* solution, double* out,
                                                  size_t size);
/* Output of each generator in MW. Units sharing a bus are merged into one
 * generator; gridctl_grid_generator_bus names its bus. */
GRIDCTL_API gridctl_status gridctl_solution_generation(const gridctl_solution* solution, double* out,
                                                       size_t size);

/* ---- placement ---- */

typedef struct gridctl_place_options {
  gridctl_placement_mode mode;
  double tol;          /* 0 = default 1e-5 */
  long long lp_budget; /* heuristic mode; 0 = default */
} gridctl_place_options;

/* Smallest set of flow-control buses reaching the flow-model optimum.
 * options may be NULL. */
GRIDCTL_API gridctl_status gridctl_place_full_control(const gridctl_grid* grid, double lambda,
                                                      const gridctl_place_options* options,
                                                      gridctl_placement** out);
/* Best hybrid objective with at most `budget` flow-control buses. */
GRIDCTL_API gridctl_status gridctl_place_budget(const gridctl_grid* grid, double lambda, int budget,
                                                const gridctl_place_options* options,
                                                gridctl_placement** out);
GRIDCTL_API void gridctl_placement_free(gridctl_placement* placement);

typedef struct gridctl_placement_info {
  int size;
  int lower_bound;
  int full_control;
  int proven_optimal;
  double objective;
  double flow_optimum;
  long long lp_solves;
  const char* method;       /* "exact", "heuristic" or "milp"; static storage */
  const char* native_class; /* "forest", "cactus" or "general"; static storage */
} gridctl_placement_info;

GRIDCTL_API gridctl_status gridctl_placement_get_info(const gridctl_placement* placement,
                                                      gridctl_placement_info* out);
/* Bus ids of the chosen set, ascending; `out` holds info.size values. */
GRIDCTL_API gridctl_status gridctl_placement_buses(const gridctl_placement* placement, int* out,
                                                   size_t size);

/* Largest load factor at lambda = 1 over control sets of exactly k buses
 * (k = 0 is the electrical model). With `prescale`, capacities are first
 * rescaled so that the smallest equals total demand. *rho is +infinity when
 * capacities never bind; GRIDCTL_INFEASIBLE when no scale is feasible. */
GRIDCTL_API gridctl_status gridctl_max_load_factor(const gridctl_grid* grid, int k, int prescale,
                                                   double* rho);

/* ---- experiments ---- */

typedef struct gridctl_experiment_overrides {
  const char* out_dir; /* NULL = from config */
  int sampling_points; /* 0 = from config */
  double tol;          /* 0 = from config */
} gridctl_experiment_overrides;

/* Runs the experiment described by the JSON config at `config_path` and
 * writes its CSV files and manifest. `kind` must match the config's kind
 * when non-NULL. overrides may be NULL. *num_rows receives the number of
 * CSV data rows written (may be NULL). */
GRIDCTL_API gridctl_status gridctl_experiment_run(const char* kind, const char* config_path,
                                                  const gridctl_experiment_overrides* overrides,
                                                  size_t* num_rows);

#ifdef __cplusplus
}
#endif

#endif /* GRIDCTL_GRIDCTL_H_ */
