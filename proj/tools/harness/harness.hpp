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

#ifndef APPA_TOOLS_HARNESS_HPP
#define APPA_TOOLS_HARNESS_HPP

// Experiment runner behind the `appa` command-line tool: seeded multi-trial
// APPA runs on a dispatch problem, compared against the lambda oracle.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "appa/dispatch.hpp"
#include "appa/engine.hpp"
#include "appa/oracle.hpp"

namespace appa::harness {

enum ExitCode : int { kExitOk = 0, kExitInvalid = 1, kExitInputError = 2 };

struct ExperimentConfig {
  std::filesystem::path problem_path;
  AppaParams params;  // params.seed is the base seed; trial k uses seed + k
  std::size_t trials = 1;
  double penalty_weight = dispatch::PenaltyConfig::kDefaultWeight;
  double residual_tol = dispatch::kDefaultResidualTolerance;
  std::filesystem::path out_dir = "appa_out";
  std::size_t threads = 1;

  void validate() const;
};

struct TrialResult {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::vector<double> outputs;
  double cost = 0.0;       // fuel cost, no penalty
  double residual = 0.0;   // MW
  double penalized = 0.0;  // objective the engine minimized
  bool feasible = false;
  std::string note;        // why the trial is infeasible
  std::optional<double> gap;  // (cost - oracle) / oracle
};

struct Aggregate {
  double best = 0.0;
  double median = 0.0;
  double worst = 0.0;
  std::size_t best_trial = 0;
  std::optional<double> best_gap;
  std::optional<double> median_gap;
  std::optional<double> worst_gap;
};

struct ComparisonReport {
  std::string problem;
  double demand = 0.0;
  std::size_t units = 0;
  ExperimentConfig config;
  std::vector<TrialResult> trials;
  std::size_t feasible_count = 0;
  std::optional<Aggregate> aggregate;  // over feasible trials only
  std::optional<dispatch::OracleSolution> oracle;
  std::string oracle_note;
};

struct Experiment {
  ComparisonReport report;
  std::vector<RunTrace> traces;  // indexed by trial
};

/// Runs every trial (in parallel when config.threads > 1) and aggregates.
/// Result ordering is by trial index regardless of completion order.
Experiment run_experiment(const dispatch::DispatchProblem& problem,
                          const ExperimentConfig& config);

/// CSV with header `generation,best_cost,mean_cost,residual`.
void write_trace_csv(std::ostream& os, const RunTrace& trace,
                     const dispatch::DispatchProblem& problem);

std::string render_report_text(const ComparisonReport& report);
std::string render_report_json(const ComparisonReport& report);
std::string render_oracle(const dispatch::OracleSolution& solution);

std::filesystem::path trace_path(const std::filesystem::path& out_dir, std::size_t trial);

// Subcommands. Each returns a process exit code.
int cmd_solve(const ExperimentConfig& config, std::ostream& out, std::ostream& err);
int cmd_oracle(const std::filesystem::path& problem_path, std::ostream& out,
               std::ostream& err);
int cmd_validate(const std::filesystem::path& problem_path,
                 std::span<const double> outputs, double tol, std::ostream& out,
                 std::ostream& err);

}  // namespace appa::harness

#endif  // APPA_TOOLS_HARNESS_HPP
