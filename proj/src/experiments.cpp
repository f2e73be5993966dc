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

#include "gridctl/experiments.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <thread>
#include <utility>

#include "json.hpp"

#include "gridctl/case_io.hpp"
#include "gridctl/error.hpp"
#include "gridctl/graph.hpp"
#include "gridctl/power_flow.hpp"

#ifndef GRIDCTL_VERSION
#define GRIDCTL_VERSION "unknown"
#endif

namespace gridctl {
namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] void BadConfig(const std::string& message) {
  throw Error(ErrorCode::kInvalidArgument, "config: " + message);
}

bool Ascending(const std::vector<double>& v) {
  return std::is_sorted(v.begin(), v.end()) &&
         std::adjacent_find(v.begin(), v.end()) == v.end();
}

std::vector<double> DefaultLambdas() {
  std::vector<double> out;
  for (int i = 0; i <= 10; ++i) out.push_back(i / 10.0);
  return out;
}

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteFile(const fs::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << bytes;
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
}

// Runs fn(0..count-1) on up to `workers` threads. The first exception, by
// job index, is rethrown after every job has finished.
void RunJobs(std::size_t count, int workers, const std::function<void(std::size_t)>& fn) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  unsigned threads = workers > 0 ? static_cast<unsigned>(workers)
                                 : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

struct LoadedCase {
  std::string name;
  PowerGrid grid;
};

std::vector<LoadedCase> LoadCases(const ExperimentConfig& config) {
  std::vector<LoadedCase> out;
  BuildOptions options;
  options.sampling_points = config.sampling_points;
  options.ignore_line_ratings = config.ignore_line_ratings;
  for (const fs::path& path : config.cases) {
    out.push_back(LoadedCase{path.stem().string(), BuildGrid(ReadCaseFile(path), options)});
  }
  return out;
}

std::string BusList(const PowerGrid& grid, const ControlSet& controls) {
  std::vector<int> ids;
  for (int v : controls.members()) ids.push_back(grid.bus(v).id);
  std::sort(ids.begin(), ids.end());
  std::string out;
  for (int id : ids) {
    if (!out.empty()) out += ' ';
    out += std::to_string(id);
  }
  return out;
}

bool IsInfeasible(const Error& e) { return e.code() == ErrorCode::kInfeasibleModel; }

// Flows are re-checked against the grid before they reach a CSV row.
const char* Verified(const PowerGrid& grid, const Flow& flow) {
  return CheckFeasible(grid, flow).feasible() ? "optimal" : "unverified";
}

// ---------------------------------------------------------------------------
// Lambda sweep.

ExperimentReport LambdaSweep(const ExperimentConfig& config, const std::vector<LoadedCase>& cases) {
  struct Point {
    std::string status = "infeasible";
    std::string model;
    double lambda = 0.0;
    int controllers = 0;
    double generation = 0.0;
    double losses = 0.0;
  };
  const std::size_t per_case = config.lambdas.size() + 1;
  std::vector<Point> points(cases.size() * per_case);
  RunJobs(points.size(), config.workers, [&](std::size_t job) {
    const LoadedCase& c = cases[job / per_case];
    const std::size_t i = job % per_case;
    Point& p = points[job];
    try {
      if (i < config.lambdas.size()) {
        p.model = "hybrid";
        p.lambda = config.lambdas[i];
        const PlacementResult placed =
            MinFullControlSet(c.grid, p.lambda, config.Placement(c.grid.num_buses()));
        const ModelSolution s =
            SolveModel(c.grid, ModelKind::Hybrid(placed.control_set), p.lambda);
        p.controllers = placed.control_set.size();
        p.generation = s.costs.generation;
        p.losses = s.costs.losses;
        p.status = Verified(c.grid, s.flow);
      } else {
        // Reference point: the electrical model ignoring losses.
        p.model = "opf";
        p.lambda = 1.0;
        const ModelSolution s = SolveModel(c.grid, ModelKind::Electrical(), 1.0);
        p.generation = s.costs.generation;
        p.losses = s.costs.losses;
        p.status = Verified(c.grid, s.flow);
      }
    } catch (const Error& e) {
      if (!IsInfeasible(e)) throw;
    }
  });

  CsvTable table{"lambda_sweep",
                 {"case", "lambda", "model", "status", "controllers", "generation_cost", "losses",
                  "generation_cost_norm", "losses_norm"},
                 {}};
  for (std::size_t c = 0; c < cases.size(); ++c) {
    // Normalise by the largest value along the sweep: generation cost peaks
    // at the smallest lambda and losses at the largest.
    double max_generation = 0.0, max_losses = 0.0;
    for (std::size_t i = 0; i + 1 < per_case; ++i) {
      const Point& p = points[c * per_case + i];
      if (p.status != "optimal") continue;
      max_generation = std::max(max_generation, p.generation);
      max_losses = std::max(max_losses, p.losses);
    }
    for (std::size_t i = 0; i < per_case; ++i) {
      const Point& p = points[c * per_case + i];
      const bool ok = p.status != "infeasible";
      auto norm = [](double x, double m) { return m > 0.0 ? x / m : 0.0; };
      table.rows.push_back({cases[c].name, FormatNumber(p.lambda), p.model, p.status,
                            std::to_string(p.controllers),
                            ok ? FormatNumber(p.generation) : "",
                            ok ? FormatNumber(p.losses) : "",
                            ok ? FormatNumber(norm(p.generation, max_generation)) : "",
                            ok ? FormatNumber(norm(p.losses, max_losses)) : ""});
    }
  }
  return ExperimentReport{{std::move(table)}};
}

// ---------------------------------------------------------------------------
// Controllers against lambda, and the topology comparison built on it.

struct Placed {
  bool feasible = false;
  PlacementResult result;
};

std::vector<Placed> PlaceAll(const ExperimentConfig& config, const std::vector<LoadedCase>& cases) {
  const std::size_t per_case = config.lambdas.size();
  std::vector<Placed> out(cases.size() * per_case);
  RunJobs(out.size(), config.workers, [&](std::size_t job) {
    const LoadedCase& c = cases[job / per_case];
    try {
      out[job].result = MinFullControlSet(c.grid, config.lambdas[job % per_case],
                                          config.Placement(c.grid.num_buses()));
      out[job].feasible = true;
    } catch (const Error& e) {
      if (!IsInfeasible(e)) throw;
    }
  });
  return out;
}

ExperimentReport ControllerVsLambda(const ExperimentConfig& config,
                                    const std::vector<LoadedCase>& cases) {
  const std::vector<Placed> placed = PlaceAll(config, cases);
  const std::size_t per_case = config.lambdas.size();
  CsvTable table{"controller_vs_lambda",
                 {"case", "buses", "lambda", "status", "controllers", "fraction", "lower_bound",
                  "method", "native_class", "control_set"},
                 {}};
  for (std::size_t c = 0; c < cases.size(); ++c) {
    const PowerGrid& grid = cases[c].grid;
    const double nb = grid.num_buses();
    const std::string buses = std::to_string(grid.num_buses());
    int worst = -1, worst_bound = 0;
    bool all_proven = true;
    const Placed* worst_point = nullptr;
    for (std::size_t i = 0; i < per_case; ++i) {
      const Placed& p = placed[c * per_case + i];
      const std::string lambda = FormatNumber(config.lambdas[i]);
      if (!p.feasible) {
        table.rows.push_back({cases[c].name, buses, lambda, "infeasible", "", "", "", "", "", ""});
        continue;
      }
      const PlacementResult& r = p.result;
      const int size = r.control_set.size();
      table.rows.push_back({cases[c].name, buses, lambda, "optimal", std::to_string(size),
                            FormatNumber(size / nb), std::to_string(r.lower_bound),
                            r.proven_optimal ? "exact" : "heuristic",
                            NativeClassName(r.native_class), BusList(grid, r.control_set)});
      all_proven &= r.proven_optimal;
      worst_bound = std::max(worst_bound, r.lower_bound);
      if (size > worst) {
        worst = size;
        worst_point = &p;
      }
    }
    if (worst_point) {
      const PlacementResult& r = worst_point->result;
      table.rows.push_back({cases[c].name, buses, "worst", "optimal", std::to_string(worst),
                            FormatNumber(worst / nb), std::to_string(worst_bound),
                            all_proven ? "exact" : "heuristic", NativeClassName(r.native_class),
                            BusList(grid, r.control_set)});
    }
  }
  return ExperimentReport{{std::move(table)}};
}

ExperimentReport TopologyComparison(const ExperimentConfig& config,
                                    const std::vector<LoadedCase>& cases) {
  struct Sets {
    VertexSetResult cover, forest, cactus;
  };
  std::vector<Sets> sets(cases.size());
  RunJobs(cases.size() * 3, config.workers, [&](std::size_t job) {
    const Multigraph& g = cases[job / 3].grid.topology();
    Sets& s = sets[job / 3];
    switch (job % 3) {
      case 0: s.cover = MinVertexCover(g); break;
      case 1: s.forest = MinFeedbackSet(g, FeedbackTarget::kForest); break;
      default: s.cactus = MinFeedbackSet(g, FeedbackTarget::kCactus); break;
    }
  });
  const std::vector<Placed> placed = PlaceAll(config, cases);
  const std::size_t per_case = config.lambdas.size();

  CsvTable table{"topology_comparison",
                 {"case", "buses", "vertex_cover", "fvs_forest", "fvs_cactus", "full_control",
                  "full_control_lambda", "vertex_cover_fraction", "method"},
                 {}};
  for (std::size_t c = 0; c < cases.size(); ++c) {
    const Sets& s = sets[c];
    int worst = -1;
    double worst_lambda = 0.0;
    bool proven = s.cover.proven_optimal && s.forest.proven_optimal && s.cactus.proven_optimal;
    for (std::size_t i = 0; i < per_case; ++i) {
      const Placed& p = placed[c * per_case + i];
      if (!p.feasible) continue;
      proven &= p.result.proven_optimal;
      if (p.result.control_set.size() > worst) {
        worst = p.result.control_set.size();
        worst_lambda = config.lambdas[i];
      }
    }
    const int nb = cases[c].grid.num_buses();
    table.rows.push_back({cases[c].name, std::to_string(nb), std::to_string(s.cover.vertices.size()),
                          std::to_string(s.forest.vertices.size()),
                          std::to_string(s.cactus.vertices.size()),
                          worst < 0 ? "" : std::to_string(worst),
                          worst < 0 ? "" : FormatNumber(worst_lambda),
                          FormatNumber(static_cast<double>(s.cover.vertices.size()) / nb),
                          proven ? "exact" : "heuristic"});
  }
  return ExperimentReport{{std::move(table)}};
}

// ---------------------------------------------------------------------------
// Load scaling at lambda = 1.

struct Series {
  std::string name;  // "opf", "k=<n>" or "full"
  int budget = -1;   // for "k=<n>"
};

ExperimentReport LoadScaling(const ExperimentConfig& config, const std::vector<LoadedCase>& cases) {
  constexpr double kLambda = 1.0;
  std::vector<Series> series{{"opf", -1}};
  for (int k : config.budgets) series.push_back({"k=" + std::to_string(k), k});
  if (config.full_series) series.push_back({"full", -1});
  const std::size_t ns = series.size();

  std::vector<PowerGrid> base;
  for (const LoadedCase& c : cases) base.push_back(PrescaleCapacities(c.grid));

  // Frontiers first: rho* = 1 / u for the smallest feasible capacity factor.
  struct Frontier {
    bool feasible = false;
    double rho = 0.0;
    ControlSet controls;
  };
  std::vector<Frontier> frontiers(cases.size() * ns);
  RunJobs(frontiers.size(), config.workers, [&](std::size_t job) {
    const PowerGrid& g = base[job / ns];
    const Series& s = series[job % ns];
    Frontier& f = frontiers[job];
    if (s.budget >= 0) {
      if (const auto r = MaxLoadFactor(g, s.budget, config.Placement(g.num_buses()).lp)) {
        f = {true, r->rho, r->control_set};
      }
      return;
    }
    const ModelKind kind = s.name == "opf" ? ModelKind::Electrical() : ModelKind::Flow();
    if (const auto u = MinCapacityFactor(g, kind)) f = {true, *u > 0.0 ? 1.0 / *u : kInf, {}};
  });

  // Grid points up to the first one past each frontier.
  const std::vector<double> rhos = config.RhoGrid();
  struct Job {
    std::size_t c, s;
    double rho;
  };
  std::vector<Job> jobs;
  for (std::size_t c = 0; c < cases.size(); ++c) {
    for (std::size_t s = 0; s < ns; ++s) {
      for (double rho : rhos) {
        jobs.push_back({c, s, rho});
        if (rho > frontiers[c * ns + s].rho) break;
      }
    }
  }
  struct Point {
    bool feasible = false;
    double objective = 0.0;
    int controllers = 0;
    std::string status = "infeasible";
  };
  std::vector<Point> points(jobs.size());
  RunJobs(jobs.size(), config.workers, [&](std::size_t job) {
    const Job& j = jobs[job];
    const PowerGrid g = base[j.c].WithScaledCapacities(1.0 / j.rho);
    const Series& s = series[j.s];
    Point& p = points[job];
    try {
      if (s.name == "opf") {
        const ModelSolution sol = SolveModel(g, ModelKind::Electrical(), kLambda);
        p.objective = sol.objective;
        p.status = Verified(g, sol.flow);
      } else {
        const PlacementResult r = s.budget >= 0
                                      ? BestUnderBudget(g, kLambda, s.budget, config.Placement(g.num_buses()))
                                      : MinFullControlSet(g, kLambda, config.Placement(g.num_buses()));
        const ModelSolution sol = SolveModel(g, ModelKind::Hybrid(r.control_set), kLambda);
        p.objective = sol.objective;
        p.controllers = r.control_set.size();
        p.status = Verified(g, sol.flow);
      }
      p.feasible = true;
    } catch (const Error& e) {
      if (!IsInfeasible(e)) throw;
    }
  });

  CsvTable curve{"load_scaling",
                 {"case", "series", "rho", "status", "objective_per_mwh", "controllers"},
                 {}};
  CsvTable frontier_table{"load_scaling_frontiers",
                          {"case", "series", "rho_star", "status", "controllers", "control_set"},
                          {}};
  std::size_t j = 0;
  for (std::size_t c = 0; c < cases.size(); ++c) {
    // Objectives per MWh of the unscaled demand, which never changes with rho.
    const double demand = cases[c].grid.total_demand();
    for (std::size_t s = 0; s < ns; ++s) {
      bool stopped = false;
      for (; j < jobs.size() && jobs[j].c == c && jobs[j].s == s; ++j) {
        if (stopped) continue;
        const Point& p = points[j];
        curve.rows.push_back({cases[c].name, series[s].name, FormatNumber(jobs[j].rho), p.status,
                              p.feasible ? FormatNumber(demand > 0.0 ? p.objective / demand : 0.0) : "",
                              p.feasible ? std::to_string(p.controllers) : ""});
        stopped = !p.feasible;
      }
      const Frontier& f = frontiers[c * ns + s];
      frontier_table.rows.push_back({cases[c].name, series[s].name,
                                     f.feasible ? FormatNumber(f.rho) : "",
                                     f.feasible ? "feasible" : "infeasible",
                                     std::to_string(f.controls.size()),
                                     BusList(cases[c].grid, f.controls)});
    }
  }
  return ExperimentReport{{std::move(curve), std::move(frontier_table)}};
}

}  // namespace

const char* ExperimentKindName(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kLambdaSweep: return "lambda-sweep";
    case ExperimentKind::kControllerVsLambda: return "controller-vs-lambda";
    case ExperimentKind::kTopologyComparison: return "topology";
    case ExperimentKind::kLoadScaling: return "load-scaling";
  }
  return "unknown";
}

std::optional<ExperimentKind> ParseExperimentKind(std::string_view name) {
  for (ExperimentKind k : {ExperimentKind::kLambdaSweep, ExperimentKind::kControllerVsLambda,
                           ExperimentKind::kTopologyComparison, ExperimentKind::kLoadScaling}) {
    if (name == ExperimentKindName(k)) return k;
  }
  return std::nullopt;
}

void ExperimentConfig::Validate() const {
  if (cases.empty()) BadConfig("no cases");
  if (lambdas.empty() || !Ascending(lambdas)) BadConfig("lambdas must be non-empty and ascending");
  for (double l : lambdas) {
    if (!(l >= 0.0 && l <= 1.0)) BadConfig("lambda outside [0, 1]");
  }
  if (!rhos.empty()) {
    if (!Ascending(rhos)) BadConfig("rhos must be ascending");
    if (!(rhos.front() >= 1.0)) BadConfig("rho must be >= 1");
  }
  if (!(rho_start >= 1.0) || !(rho_ratio > 1.0) || !(rho_max >= rho_start)) {
    BadConfig("need 1 <= rho_start <= rho_max and rho_ratio > 1");
  }
  for (int k : budgets) {
    if (k < 0) BadConfig("budgets must be non-negative");
  }
  if (!std::is_sorted(budgets.begin(), budgets.end())) BadConfig("budgets must be ascending");
  if (sampling_points < 2) BadConfig("sampling_points must be >= 2");
  if (!(tol > 0.0)) BadConfig("tol must be positive");
  if (placement != "auto" && placement != "exact" && placement != "heuristic" && placement != "milp") {
    BadConfig("placement must be auto, exact, heuristic or milp");
  }
  if (lp_budget < 1) BadConfig("lp_budget must be >= 1");
  if (workers < 0) BadConfig("workers must be >= 0");
}

std::vector<double> ExperimentConfig::RhoGrid() const {
  if (!rhos.empty()) return rhos;
  std::vector<double> out;
  // Powers are taken directly so the grid does not drift.
  for (int i = 0;; ++i) {
    const double rho = rho_start * std::pow(rho_ratio, i);
    if (rho > rho_max * (1.0 + 1e-12)) break;
    out.push_back(rho);
  }
  return out;
}

PlacementOptions ExperimentConfig::Placement(int num_buses) const {
  PlacementOptions options;
  options.tol = tol;
  options.lp_budget = lp_budget;
  if (placement == "exact") {
    options.mode = PlacementMode::kExact;
  } else if (placement == "heuristic") {
    options.mode = PlacementMode::kHeuristic;
  } else if (placement == "milp") {
    options.mode = PlacementMode::kMilp;
  } else {
    options.mode = num_buses <= auto_exact_buses ? PlacementMode::kExact : PlacementMode::kHeuristic;
  }
  return options;
}

ExperimentConfig ParseExperimentConfig(std::string_view json_text, const fs::path& base_dir) {
  Json j;
  try {
    j = Json::parse(json_text);
  } catch (const Json::parse_error& e) {
    BadConfig(e.what());
  }
  if (!j.is_object()) BadConfig("top level must be an object");
  ExperimentConfig config;
  try {
    if (!j.contains("kind")) BadConfig("missing kind");
    const auto kind = ParseExperimentKind(j.at("kind").get<std::string>());
    if (!kind) BadConfig("unknown kind " + j.at("kind").dump());
    config.kind = *kind;
    const bool placement_kind = config.kind == ExperimentKind::kControllerVsLambda ||
                                config.kind == ExperimentKind::kTopologyComparison;
    config.ignore_line_ratings = placement_kind;
    config.lambdas = config.kind == ExperimentKind::kLoadScaling ? std::vector<double>{1.0}
                                                                  : DefaultLambdas();
    for (const auto& [key, value] : j.items()) {
      if (key == "kind") continue;
      if (key == "cases") {
        if (!value.is_array()) BadConfig("cases must be an array of paths");
        for (const auto& c : value) {
          fs::path p = c.get<std::string>();
          config.cases.push_back((p.is_relative() && !base_dir.empty() ? base_dir / p : p).lexically_normal());
        }
      } else if (key == "lambdas") {
        config.lambdas = value.get<std::vector<double>>();
        if (config.kind == ExperimentKind::kLoadScaling &&
            config.lambdas != std::vector<double>{1.0}) {
          BadConfig("load-scaling runs at lambda = 1 only");
        }
      } else if (key == "rhos") {
        config.rhos = value.get<std::vector<double>>();
      } else if (key == "rho_start") {
        config.rho_start = value.get<double>();
      } else if (key == "rho_ratio") {
        config.rho_ratio = value.get<double>();
      } else if (key == "rho_max") {
        config.rho_max = value.get<double>();
      } else if (key == "budgets") {
        config.budgets = value.get<std::vector<int>>();
      } else if (key == "full_series") {
        config.full_series = value.get<bool>();
      } else if (key == "sampling_points") {
        config.sampling_points = value.get<int>();
      } else if (key == "tol") {
        config.tol = value.get<double>();
      } else if (key == "ignore_line_ratings") {
        config.ignore_line_ratings = value.get<bool>();
      } else if (key == "placement") {
        config.placement = value.get<std::string>();
      } else if (key == "auto_exact_buses") {
        config.auto_exact_buses = value.get<int>();
      } else if (key == "lp_budget") {
        config.lp_budget = value.get<std::int64_t>();
      } else if (key == "workers") {
        config.workers = value.get<int>();
      } else if (key == "seed") {
        config.seed = value.get<std::uint64_t>();
      } else if (key == "out_dir") {
        fs::path p = value.get<std::string>();
        config.out_dir = (p.is_relative() && !base_dir.empty() ? base_dir / p : p).lexically_normal();
      } else {
        BadConfig("unknown key \"" + key + "\"");
      }
    }
  } catch (const Json::exception& e) {
    BadConfig(e.what());
  }
  config.Validate();
  return config;
}

ExperimentConfig LoadExperimentConfig(const fs::path& path) {
  return ParseExperimentConfig(ReadFile(path), path.parent_path());
}

std::string ConfigToJson(const ExperimentConfig& config) {
  Json j;
  j["kind"] = ExperimentKindName(config.kind);
  j["cases"] = Json::array();
  for (const fs::path& p : config.cases) j["cases"].push_back(p.generic_string());
  j["lambdas"] = config.lambdas;
  if (config.kind == ExperimentKind::kLoadScaling) {
    j["rhos"] = config.RhoGrid();
    j["budgets"] = config.budgets;
    j["full_series"] = config.full_series;
  }
  j["sampling_points"] = config.sampling_points;
  j["tol"] = config.tol;
  j["ignore_line_ratings"] = config.ignore_line_ratings;
  j["placement"] = config.placement;
  j["auto_exact_buses"] = config.auto_exact_buses;
  j["lp_budget"] = config.lp_budget;
  j["seed"] = config.seed;
  return j.dump(2);
}

std::string FormatNumber(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) value = 0.0;  // no "-0"
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", value);
  return buf;
}

std::string CsvTable::ToCsv() const {
  std::string out;
  auto field = [&](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
      out += s;
      return;
    }
    out += '"';
    for (char ch : s) {
      if (ch == '"') out += '"';
      out += ch;
    }
    out += '"';
  };
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      field(cells[i]);
    }
    out += '\n';
  };
  line(header);
  for (const auto& row : rows) line(row);
  return out;
}

ExperimentReport RunExperiment(const ExperimentConfig& config) {
  config.Validate();
  const std::vector<LoadedCase> cases = LoadCases(config);
  switch (config.kind) {
    case ExperimentKind::kLambdaSweep: return LambdaSweep(config, cases);
    case ExperimentKind::kControllerVsLambda: return ControllerVsLambda(config, cases);
    case ExperimentKind::kTopologyComparison: return TopologyComparison(config, cases);
    case ExperimentKind::kLoadScaling: return LoadScaling(config, cases);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown experiment kind");
}

std::vector<fs::path> WriteReport(const ExperimentConfig& config, const ExperimentReport& report) {
  std::error_code ec;
  fs::create_directories(config.out_dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + config.out_dir.string() + ": " + ec.message());

  const std::string config_json = ConfigToJson(config);
  Json manifest;
  manifest["tool"] = "gridctl";
  manifest["version"] = GRIDCTL_VERSION;
  manifest["experiment"] = ExperimentKindName(config.kind);
  manifest["config"] = Json::parse(config_json);
  manifest["config_sha256"] = Sha256Hex(config_json);
  manifest["cases"] = Json::array();
  for (const fs::path& path : config.cases) {
    const std::string text = ReadFile(path);
    const CaseStatistics stats = ComputeStatistics(ParseCase(text));
    manifest["cases"].push_back({{"path", path.generic_string()},
                                 {"sha256", Sha256Hex(text)},
                                 {"buses", stats.buses},
                                 {"lines", stats.lines},
                                 {"generators", stats.generators},
                                 {"total_demand", stats.total_demand}});
  }
  const LpOptions lp;
  manifest["tolerances"] = {{"full_control", config.tol},
                            {"lp_feasibility", lp.feasibility_tol},
                            {"lp_optimality", lp.optimality_tol}};

  std::vector<fs::path> written;
  manifest["outputs"] = Json::array();
  for (const CsvTable& table : report.tables) {
    const std::string csv = table.ToCsv();
    const fs::path path = config.out_dir / (table.name + ".csv");
    WriteFile(path, csv);
    written.push_back(path);
    manifest["outputs"].push_back({{"file", path.filename().string()},
                                   {"sha256", Sha256Hex(csv)},
                                   {"rows", table.rows.size()}});
  }
  const fs::path manifest_path = config.out_dir / "manifest.json";
  WriteFile(manifest_path, manifest.dump(2) + "\n");
  written.push_back(manifest_path);
  return written;
}

std::string Sha256Hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int size = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &size, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::kIo, "SHA-256 failed");
  }
  static const char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < size; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 15];
  }
  return out;
}

PowerGrid PrescaleCapacities(const PowerGrid& grid) {
  const double demand = grid.total_demand();
  double smallest = kInf;
  for (int e = 0; e < grid.num_branches(); ++e) {
    const Capacity& c = grid.branch(e).capacity;
    if (!c.unbounded() && c.value() > 0.0) smallest = std::min(smallest, c.value());
  }
  std::vector<Capacity> caps;
  for (int e = 0; e < grid.num_branches(); ++e) {
    const Capacity& c = grid.branch(e).capacity;
    if (smallest == kInf) {
      caps.push_back(Capacity::Finite(demand));
    } else if (c.unbounded()) {
      caps.push_back(c);
    } else {
      caps.push_back(c.Scaled(demand / smallest));
    }
  }
  return grid.WithCapacities(caps);
}

}  // namespace gridctl
