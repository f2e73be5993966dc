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

// Batch experiments over IEEE cases. Each run produces CSV tables and a JSON
// manifest with SHA-256 digests of every input and output.
//
// Grid points are independent jobs run by a small worker pool; results are
// stored by job index, so the output never depends on completion order.

#ifndef GRIDCTL_EXPERIMENTS_HPP_
#define GRIDCTL_EXPERIMENTS_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gridctl/grid.hpp"
#include "gridctl/placement.hpp"

namespace gridctl {

enum class ExperimentKind { kLambdaSweep, kControllerVsLambda, kTopologyComparison, kLoadScaling };

// "lambda-sweep", "controller-vs-lambda", "topology", "load-scaling".
const char* ExperimentKindName(ExperimentKind kind);
std::optional<ExperimentKind> ParseExperimentKind(std::string_view name);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::kLambdaSweep;
  std::vector<std::filesystem::path> cases;
  std::vector<double> lambdas;  // ascending
  // Load scaling: explicit factors, or rho_start * rho_ratio^i up to rho_max.
  std::vector<double> rhos;
  double rho_start = 1.0;
  double rho_ratio = 1.1;
  double rho_max = 40.0;
  std::vector<int> budgets = {1, 2};
  bool full_series = true;
  int sampling_points = 5;
  double tol = 1e-5;
  bool ignore_line_ratings = false;
  // "exact", "heuristic", "milp", or "auto" (exact up to auto_exact_buses).
  std::string placement = "auto";
  int auto_exact_buses = 100;
  std::int64_t lp_budget = 400;
  int workers = 1;  // 0 = one per hardware thread
  std::uint64_t seed = 0;  // reserved; every tie-break is deterministic
  std::filesystem::path out_dir = "out";

  // Throws kInvalidArgument unless the grids are non-empty, ascending, lambdas
  // lie in [0, 1] and every rho >= 1.
  void Validate() const;
  // The factors a load-scaling run visits.
  std::vector<double> RhoGrid() const;
  PlacementOptions Placement(int num_buses) const;
};

// JSON config; relative case paths are resolved against `base_dir`. Missing
// keys keep their defaults, except that the kind decides the default for
// ignore_line_ratings (true for controller-vs-lambda and topology) and for
// lambdas. Throws kInvalidArgument on unknown keys or bad values.
ExperimentConfig ParseExperimentConfig(std::string_view json_text,
                                       const std::filesystem::path& base_dir = {});
// Throws kIo as well.
ExperimentConfig LoadExperimentConfig(const std::filesystem::path& path);
// Canonical JSON of the effective config, as recorded in the manifest.
std::string ConfigToJson(const ExperimentConfig& config);

struct CsvTable {
  std::string name;  // file stem
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Comma separated, LF line endings, fields quoted only when needed.
  std::string ToCsv() const;
};

// 9 significant digits; "inf", "-inf" and "nan" for non-finite values.
std::string FormatNumber(double value);

struct ExperimentReport {
  std::vector<CsvTable> tables;
};

// Case files are read and built with the config's sampling options. Input
// errors propagate as Error; per-row model failures become status columns.
ExperimentReport RunExperiment(const ExperimentConfig& config);

// Writes every table as <out_dir>/<name>.csv plus manifest.json. Returns the
// written paths. Throws kIo.
std::vector<std::filesystem::path> WriteReport(const ExperimentConfig& config,
                                               const ExperimentReport& report);

// Hex SHA-256 of a byte string.
std::string Sha256Hex(std::string_view bytes);

// Finite capacities rescaled so that the smallest positive one equals total
// demand; unbounded ones stay unbounded. When no branch has a finite
// capacity, every capacity becomes the total demand.
PowerGrid PrescaleCapacities(const PowerGrid& grid);

}  // namespace gridctl

#endif  // GRIDCTL_EXPERIMENTS_HPP_
