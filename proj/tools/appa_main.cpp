// Copyright 2026 The appa-ed Authors
//
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

#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "harness.hpp"

int main(int argc, char** argv) {
  using namespace appa::harness;

  CLI::App app{"Adaptive plant propagation for economic load dispatch"};
  app.require_subcommand(1);

  ExperimentConfig config;
  config.threads = std::max(1u, std::thread::hardware_concurrency());
  auto* solve = app.add_subcommand("solve", "Run seeded APPA trials and compare with the oracle");
  app.set_config("--config", "", "TOML preset file ([solve] section)");

  solve->fallthrough();
  solve->add_option("--problem", config.problem_path, "Problem file (JSON)")->required();
  solve->add_option("--trials", config.trials, "Independent trials")->capture_default_str();
  solve->add_option("--seed", config.params.seed, "Base seed; trial k uses seed + k")
      ->capture_default_str();
  solve->add_option("--pop", config.params.population_size, "Population size")
      ->capture_default_str();
  solve->add_option("--generations", config.params.max_generations, "Generation budget")
      ->capture_default_str();
  solve->add_option("--max-runners", config.params.max_runners, "Maximum runners per plant")
      ->capture_default_str();
  solve->add_option("--stagnation", config.params.stagnation_threshold,
                    "Generations without improvement before a plant is abandoned")
      ->capture_default_str();
  solve->add_option("--penalty", config.penalty_weight, "Balance penalty weight (Rs/h per MW^2)")
      ->capture_default_str();
  solve->add_option("--tol", config.residual_tol, "Residual tolerance for a feasible trial (MW)")
      ->capture_default_str();
  solve->add_option("--out", config.out_dir, "Output directory")->capture_default_str();
  solve->add_option("--threads", config.threads, "Worker threads for trials")
      ->capture_default_str();

  std::string oracle_problem;
  auto* oracle = app.add_subcommand("oracle", "Solve by equal incremental cost");
  oracle->add_option("--problem", oracle_problem, "Problem file (JSON)")->required();

  std::string validate_problem;
  std::vector<double> outputs;
  double tol = 0.1;
  auto* validate = app.add_subcommand("validate", "Check a dispatch against limits and balance");
  validate->add_option("--problem", validate_problem, "Problem file (JSON)")->required();
  validate->add_option("--outputs", outputs, "Unit outputs in MW, comma separated")
      ->required()
      ->delimiter(',');
  validate->add_option("--tol", tol, "Residual tolerance (MW)")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInputError;
  }

  if (*solve) return cmd_solve(config, std::cout, std::cerr);
  if (*oracle) return cmd_oracle(oracle_problem, std::cout, std::cerr);
  return cmd_validate(validate_problem, outputs, tol, std::cout, std::cerr);
}
