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

// Reader for MATPOWER case files (the `mpc.baseMVA`, `mpc.bus`, `mpc.gen`,
// `mpc.branch` and `mpc.gencost` subset) and conversion into a PowerGrid.

#ifndef GRIDCTL_CASE_IO_HPP_
#define GRIDCTL_CASE_IO_HPP_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "gridctl/grid.hpp"

namespace gridctl {

struct RawBus {
  int id = 0;
  int type = 1;
  double pd = 0.0;  // MW
  int line = 0;
};

struct RawGenerator {
  int bus = 0;
  double pmax = 0.0;  // MW
  double pmin = 0.0;
  bool in_service = true;
  int line = 0;
};

struct RawGenCost {
  int model = 2;  // 1 = piecewise linear, 2 = polynomial
  int n = 0;
  std::vector<double> coefficients;
  int line = 0;
};

struct RawBranch {
  int from = 0;  // external bus numbers
  int to = 0;
  double r = 0.0;
  double x = 0.0;
  double rate_a = 0.0;  // MW, 0 = unlimited
  bool in_service = true;
  int line = 0;
};

struct RawCase {
  std::string name;
  double base_mva = 100.0;
  std::vector<RawBus> buses;
  std::vector<RawGenerator> generators;
  std::vector<RawGenCost> gencost;
  std::vector<RawBranch> branches;
};

// Throws MalformedCaseError (missing matrix, short or ragged rows, non-numeric
// cells) and kDanglingBranch / kUnknownBus for references to absent buses.
RawCase ParseCase(std::string_view text);
// Reads and parses a file; kIo when it cannot be read.
RawCase ReadCaseFile(const std::filesystem::path& path);

struct BuildOptions {
  int sampling_points = 5;
  // Treat every branch as unbounded (rate_A ignored).
  bool ignore_line_ratings = false;
};

// Generator costs become chord interpolations of the cost curve through
// `sampling_points` equally spaced samples on [0, pmax]; branch losses are
// r * f^2 / base_mva sampled the same way on [0, min(capacity, 2 * total
// demand)]. Units sharing a bus are merged. Out-of-service units and
// branches are dropped; pmin is not modelled. Throws kNonConvexCost and
// kInvalidArgument (sampling_points < 2, unsupported cost model).
PowerGrid BuildGrid(const RawCase& raw, const BuildOptions& options = {});

struct CaseStatistics {
  int buses = 0;
  int lines = 0;  // distinct connected bus pairs
  int generators = 0;
  double total_demand = 0.0;  // MW
};

CaseStatistics ComputeStatistics(const RawCase& raw);

}  // namespace gridctl

#endif  // GRIDCTL_CASE_IO_HPP_
