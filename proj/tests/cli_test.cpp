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

// Runs the gridctl binary and checks exit codes and written files.

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

namespace {

namespace fs = std::filesystem;

const std::string kCli = GRIDCTL_CLI;
const std::string kDataDir = GRIDCTL_DATA_DIR;
const std::string kFixtureDir = GRIDCTL_FIXTURE_DIR;

struct Result {
  int exit_code = -1;
  std::string out;
};

Result Run(const std::string& args) {
  const std::string command = "'" + kCli + "' " + args + " 2>/dev/null";
  Result r;
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t n = 0;
  while ((n = std::fread(buf, 1, sizeof(buf), pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  REQUIRE(WIFEXITED(status));
  r.exit_code = WEXITSTATUS(status);
  return r;
}

bool Has(const Result& r, const std::string& line) {
  return r.out.find(line + "\n") != std::string::npos;
}

std::string Slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path Scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("gridctl_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

const std::string kTriangle = "'" + kFixtureDir + "/triangle3.m'";

TEST_CASE("solve") {
  Result r = Run("solve " + kTriangle + " --model flow --lambda 1");
  CHECK(r.exit_code == 0);
  CHECK(Has(r, "objective: 90"));

  r = Run("solve " + kTriangle + " --model electrical --lambda 1");
  CHECK(r.exit_code == 0);
  CHECK(Has(r, "objective: 150"));
  CHECK(Has(r, "verified: yes"));

  const fs::path out = Scratch("solve");
  r = Run("solve " + kTriangle + " --model hybrid --controllers auto --lambda 1 --out '" +
          out.string() + "'");
  CHECK(r.exit_code == 0);
  CHECK(Has(r, "objective: 90"));
  const std::string flows = Slurp(out / "flows.csv");
  CHECK(flows.rfind("branch,from_bus,to_bus,flow_mw\n", 0) == 0);
  CHECK(flows.find('\r') == std::string::npos);
  CHECK(Slurp(out / "generation.csv") == "generator,bus,output_mw\n0,1,90\n1,2,0\n");

  r = Run("solve " + kTriangle + " --model hybrid --controllers 1,3 --lambda 1");
  CHECK(r.exit_code == 0);
  CHECK(Has(r, "controllers: 1 3"));
}

TEST_CASE("place") {
  Result r = Run("place '" + kDataDir + "/case30.m' --lambda 0.5 --ignore-ratings");
  CHECK(r.exit_code == 0);
  CHECK(Has(r, "controllers: 5"));
  CHECK(Has(r, "full_control: yes"));
  CHECK(Has(r, "proven_optimal: yes"));

  r = Run("place '" + kDataDir + "/case30.m' --lambda 0.5 --ignore-ratings --budget 2");
  CHECK(r.exit_code == 0);
  CHECK(Has(r, "budget: 2"));
  CHECK(Has(r, "full_control: no"));

  const fs::path out = Scratch("place");
  r = Run("place '" + kDataDir + "/case9.m' --lambda 1 --exact --out '" + out.string() + "'");
  CHECK(r.exit_code == 0);
  CHECK(Has(r, "controllers: 0"));
  CHECK(Slurp(out / "placement.csv").rfind("lambda,budget,controllers,", 0) == 0);

  r = Run("place '" + kDataDir + "/case9.m' --lambda 0.5 --milp");
  CHECK(r.exit_code == 0);
  CHECK(Has(r, "method: milp"));
}

TEST_CASE("infeasible exits with 2") {
  const std::string starved = "'" + kFixtureDir + "/starved3.m'";
  CHECK(Run("solve " + starved + " --model flow").exit_code == 2);
  CHECK(Run("solve " + starved + " --model electrical").exit_code == 2);
  CHECK(Run("place " + starved + " --lambda 1").exit_code == 2);
}

TEST_CASE("input errors exit with 1") {
  CHECK(Run("solve /nonexistent/case.m --model flow").exit_code == 1);
  CHECK(Run("solve " + kTriangle + " --model magnetic").exit_code == 1);
  CHECK(Run("solve " + kTriangle + " --model hybrid --controllers 42").exit_code == 1);
  CHECK(Run("solve " + kTriangle + " --model hybrid --controllers x").exit_code == 1);
  CHECK(Run("solve " + kTriangle + " --lambda 2").exit_code == 1);
  CHECK(Run("place " + kTriangle + " --exact --milp").exit_code == 1);
  CHECK(Run("experiment lambda-sweep --config /nonexistent.json").exit_code == 1);
  CHECK(Run("frobnicate").exit_code == 1);
  CHECK(Run("").exit_code == 1);
}

TEST_CASE("experiments are reproducible") {
  const fs::path dir = Scratch("experiment");
  std::ofstream(dir / "cvl.json") << R"({"kind": "controller-vs-lambda", "cases": [")" << kDataDir
                                  << R"(/case9.m", ")" << kDataDir
                                  << R"(/case14.m"], "lambdas": [0, 0.5, 1]})";
  const std::string config = " --config '" + (dir / "cvl.json").string() + "'";
  Result a = Run("experiment controller-vs-lambda" + config + " --out '" + (dir / "a").string() + "'");
  Result b = Run("experiment controller-vs-lambda" + config + " --out '" + (dir / "b").string() + "'");
  CHECK(a.exit_code == 0);
  CHECK(b.exit_code == 0);
  CHECK(Has(a, "rows: 8"));
  const std::string csv = Slurp(dir / "a" / "controller_vs_lambda.csv");
  CHECK(!csv.empty());
  CHECK(csv == Slurp(dir / "b" / "controller_vs_lambda.csv"));
  CHECK(Run("experiment topology" + config).exit_code == 1);
}

}  // namespace
