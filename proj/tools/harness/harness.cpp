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

#include "harness.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <ostream>
#include <thread>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "appa/errors.hpp"
#include "appa/problem_io.hpp"
#include "json.hpp"

namespace appa::harness {

namespace {

using dispatch::DispatchProblem;

TrialResult evaluate_trial(const DispatchProblem& problem, const ExperimentConfig& config,
                           std::size_t trial, const RunResult& run) {
  TrialResult t;
  t.trial = trial;
  t.seed = config.params.seed + trial;
  t.outputs = run.best.position;
  t.cost = dispatch::total_cost(problem, t.outputs);
  t.residual = dispatch::balance_residual(problem, t.outputs);
  t.penalized = run.best.objective;
  try {
    dispatch::validate_solution(problem, t.outputs, config.residual_tol);
    t.feasible = true;
  } catch (const ValidationError& e) {
    t.note = e.what();
  }
  return t;
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::optional<double> gap_to(const std::optional<dispatch::OracleSolution>& oracle,
                             double cost) {
  if (!oracle) return std::nullopt;
  return (cost - oracle->cost) / oracle->cost;
}

void aggregate(ComparisonReport& report) {
  std::vector<double> costs;
  for (const auto& t : report.trials) {
    if (!t.feasible) continue;
    costs.push_back(t.cost);
    if (!report.aggregate || t.cost < report.aggregate->best) {
      if (!report.aggregate) report.aggregate.emplace();
      report.aggregate->best = t.cost;
      report.aggregate->best_trial = t.trial;
    }
  }
  report.feasible_count = costs.size();
  if (!report.aggregate) return;
  auto& agg = *report.aggregate;
  agg.median = median_of(costs);
  agg.worst = *std::max_element(costs.begin(), costs.end());
  agg.best_gap = gap_to(report.oracle, agg.best);
  agg.median_gap = gap_to(report.oracle, agg.median);
  agg.worst_gap = gap_to(report.oracle, agg.worst);
}

std::string percent(const std::optional<double>& gap) {
  return gap ? fmt::format("{:+.4f}%", 100.0 * *gap) : std::string("n/a");
}

std::string mw_list(std::span<const double> v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    s += fmt::format("{}{:.4f}", i ? ", " : "", v[i]);
  }
  return s;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (trials < 1) throw InvalidArgument("trials must be >= 1");
  params.validate();
  dispatch::PenaltyConfig{penalty_weight};
  if (!(residual_tol >= 0.0)) throw InvalidArgument("residual tolerance must be >= 0");
}

Experiment run_experiment(const DispatchProblem& problem, const ExperimentConfig& config) {
  config.validate();
  const SearchSpace space = problem.search_space();
  const Objective objective =
      dispatch::make_objective(problem, dispatch::PenaltyConfig{config.penalty_weight});

  std::vector<RunResult> runs(config.trials);
  std::vector<std::exception_ptr> failures(config.trials);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < config.trials; k = next++) {
      try {
        AppaParams params = config.params;
        params.seed = config.params.seed + k;
        runs[k] = appa::run(objective, space, params);
      } catch (...) {
        failures[k] = std::current_exception();
      }
    }
  };
  const std::size_t n_threads = std::clamp<std::size_t>(config.threads, 1, config.trials);
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  Experiment ex;
  auto& report = ex.report;
  report.problem = config.problem_path.string();
  report.demand = problem.demand();
  report.units = problem.size();
  report.config = config;
  try {
    report.oracle = dispatch::solve_lambda(problem);
  } catch (const Error& e) {
    report.oracle_note = e.what();
  }
  for (std::size_t k = 0; k < config.trials; ++k) {
    auto t = evaluate_trial(problem, config, k, runs[k]);
    t.gap = gap_to(report.oracle, t.cost);
    report.trials.push_back(std::move(t));
    ex.traces.push_back(std::move(runs[k].trace));
  }
  aggregate(report);
  return ex;
}

void write_trace_csv(std::ostream& os, const RunTrace& trace, const DispatchProblem& problem) {
  os << "generation,best_cost,mean_cost,residual\n";
  for (const auto& g : trace.generations) {
    fmt::print(os, "{},{},{},{}\n", g.generation, g.best_objective, g.mean_objective,
               dispatch::balance_residual(problem, g.best_position));
  }
}

std::filesystem::path trace_path(const std::filesystem::path& out_dir, std::size_t trial) {
  return out_dir / fmt::format("trace_trial_{:03d}.csv", trial);
}

std::string render_oracle(const dispatch::OracleSolution& s) {
  std::string text = "unit  output_mw  binding\n";
  for (std::size_t i = 0; i < s.outputs.size(); ++i) {
    text += fmt::format("{:<4}  {:>9.4f}  {}\n", i + 1, s.outputs[i],
                        dispatch::to_string(s.binding[i]));
  }
  text += fmt::format("lambda: {:.4f} Rs/MWh\n", s.lambda);
  text += fmt::format("cost: {:.1f} Rs/h\n", s.cost);
  return text;
}

std::string render_report_text(const ComparisonReport& r) {
  const auto& c = r.config;
  std::string text;
  text += fmt::format("problem: {} ({} units, demand {:.4f} MW)\n", r.problem, r.units, r.demand);
  text += fmt::format(
      "settings: trials {}, seed {}, population {}, generations {}, max runners {}, "
      "stagnation {}, penalty {}, residual tol {} MW\n\n",
      c.trials, c.params.seed, c.params.population_size, c.params.max_generations,
      c.params.max_runners, c.params.stagnation_threshold, c.penalty_weight, c.residual_tol);

  if (r.oracle) {
    text += fmt::format("oracle: cost {:.1f} Rs/h, lambda {:.4f} Rs/MWh, outputs ({})\n\n",
                        r.oracle->cost, r.oracle->lambda, mw_list(r.oracle->outputs));
  } else {
    text += fmt::format("oracle: unavailable ({})\n\n", r.oracle_note);
  }

  text += "trial  seed  cost_rs_h  residual_mw  gap  status  outputs_mw\n";
  for (const auto& t : r.trials) {
    text += fmt::format("{:>5}  {}  {:.1f}  {:+.4f}  {}  {}  ({})\n", t.trial, t.seed, t.cost,
                        t.residual, percent(t.gap), t.feasible ? "feasible" : "infeasible",
                        mw_list(t.outputs));
  }
  text += fmt::format("\nfeasible trials: {}/{}\n", r.feasible_count, r.trials.size());
  if (r.aggregate) {
    const auto& a = *r.aggregate;
    text += fmt::format("best:   {:.1f} Rs/h (trial {}, gap {})\n", a.best, a.best_trial,
                        percent(a.best_gap));
    text += fmt::format("median: {:.1f} Rs/h (gap {})\n", a.median, percent(a.median_gap));
    text += fmt::format("worst:  {:.1f} Rs/h (gap {})\n", a.worst, percent(a.worst_gap));
  }
  return text;
}

std::string render_report_json(const ComparisonReport& r) {
  using nlohmann::ordered_json;
  const auto opt = [](const std::optional<double>& v) {
    return v ? ordered_json(*v) : ordered_json(nullptr);
  };
  ordered_json doc;
  doc["problem"] = r.problem;
  doc["demand_mw"] = r.demand;
  doc["units"] = r.units;
  doc["settings"] = {{"trials", r.config.trials},
                     {"seed", r.config.params.seed},
                     {"population_size", r.config.params.population_size},
                     {"max_generations", r.config.params.max_generations},
                     {"max_runners", r.config.params.max_runners},
                     {"stagnation_threshold", r.config.params.stagnation_threshold},
                     {"penalty_weight", r.config.penalty_weight},
                     {"residual_tol_mw", r.config.residual_tol}};
  if (r.oracle) {
    ordered_json tags = ordered_json::array();
    for (auto b : r.oracle->binding) tags.push_back(std::string(dispatch::to_string(b)));
    doc["oracle"] = {{"cost", r.oracle->cost},
                     {"lambda", r.oracle->lambda},
                     {"outputs_mw", r.oracle->outputs},
                     {"binding", tags}};
  } else {
    doc["oracle"] = nullptr;
    doc["oracle_note"] = r.oracle_note;
  }
  doc["trials"] = ordered_json::array();
  for (const auto& t : r.trials) {
    ordered_json j;
    j["trial"] = t.trial;
    j["seed"] = t.seed;
    j["cost"] = t.cost;
    j["residual_mw"] = t.residual;
    j["penalized_objective"] = t.penalized;
    j["feasible"] = t.feasible;
    if (!t.feasible) j["note"] = t.note;
    j["gap"] = opt(t.gap);
    j["outputs_mw"] = t.outputs;
    doc["trials"].push_back(std::move(j));
  }
  doc["feasible_count"] = r.feasible_count;
  if (r.aggregate) {
    const auto& a = *r.aggregate;
    doc["aggregate"] = {{"best", a.best},           {"median", a.median},
                        {"worst", a.worst},         {"best_trial", a.best_trial},
                        {"best_gap", opt(a.best_gap)}, {"median_gap", opt(a.median_gap)},
                        {"worst_gap", opt(a.worst_gap)}};
  } else {
    doc["aggregate"] = nullptr;
  }
  return doc.dump(2) + "\n";
}

int cmd_solve(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
  Experiment ex;
  try {
    config.validate();
    const DispatchProblem problem = dispatch::load_problem(config.problem_path);
    ex = run_experiment(problem, config);

    std::filesystem::create_directories(config.out_dir);
    for (std::size_t k = 0; k < ex.traces.size(); ++k) {
      std::ofstream csv(trace_path(config.out_dir, k), std::ios::binary);
      if (!csv) throw ParseError("cannot write " + trace_path(config.out_dir, k).string());
      write_trace_csv(csv, ex.traces[k], problem);
    }
    std::ofstream(config.out_dir / "report.txt", std::ios::binary)
        << render_report_text(ex.report);
    std::ofstream(config.out_dir / "report.json", std::ios::binary)
        << render_report_json(ex.report);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  out << render_report_text(ex.report);
  return ex.report.feasible_count > 0 ? kExitOk : kExitInvalid;
}

int cmd_oracle(const std::filesystem::path& problem_path, std::ostream& out,
               std::ostream& err) {
  try {
    const DispatchProblem problem = dispatch::load_problem(problem_path);
    out << render_oracle(dispatch::solve_lambda(problem));
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitOk;
}

int cmd_validate(const std::filesystem::path& problem_path, std::span<const double> outputs,
                 double tol, std::ostream& out, std::ostream& err) {
  std::optional<DispatchProblem> problem;
  try {
    problem = dispatch::load_problem(problem_path);
    if (outputs.size() != problem->size()) {
      throw InvalidArgument(fmt::format("expected {} outputs, got {}", problem->size(),
                                        outputs.size()));
    }
    if (!(tol >= 0.0)) throw InvalidArgument("tolerance must be >= 0");
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  out << fmt::format("cost: {:.1f} Rs/h\n", dispatch::total_cost(*problem, outputs));
  out << fmt::format("residual: {:+.4f} MW\n", dispatch::balance_residual(*problem, outputs));
  try {
    dispatch::validate_solution(*problem, outputs, tol);
  } catch (const ValidationError& e) {
    out << "verdict: invalid (" << e.what() << ")\n";
    return kExitInvalid;
  }
  out << "verdict: valid\n";
  return kExitOk;
}

}  // namespace appa::harness
