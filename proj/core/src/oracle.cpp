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

#include "appa/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "appa/errors.hpp"

namespace appa::dispatch {

namespace {

std::vector<double> dispatch_at(const DispatchProblem& problem, double lambda) {
  std::vector<double> p(problem.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto& u = problem.unit(i);
    p[i] = std::clamp((lambda - u.lin) / (2.0 * u.quad), u.p_min, u.p_max);
  }
  return p;
}

std::vector<Binding> classify(const DispatchProblem& problem,
                              const std::vector<double>& outputs) {
  std::vector<Binding> tags(outputs.size());
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    const auto& u = problem.unit(i);
    if (outputs[i] <= u.p_min) {
      tags[i] = Binding::kAtLower;
    } else if (outputs[i] >= u.p_max) {
      tags[i] = Binding::kAtUpper;
    } else {
      tags[i] = Binding::kInterior;
    }
  }
  return tags;
}

OracleSolution make_solution(const DispatchProblem& problem, std::vector<double> outputs,
                             double lambda, std::size_t iterations) {
  OracleSolution s;
  s.binding = classify(problem, outputs);
  s.cost = total_cost(problem, outputs);
  s.outputs = std::move(outputs);
  s.lambda = lambda;
  s.iterations = iterations;
  return s;
}

struct GridSearch {
  const DispatchProblem& problem;
  double step;
  std::size_t eliminated;
  std::vector<std::size_t> free_units;
  std::vector<std::size_t> counts;
  std::vector<double> rest_min;  // sum of p_min over free_units[k..]
  std::vector<double> rest_max;

  std::vector<double> current;
  std::vector<double> best_outputs;
  double best_cost = std::numeric_limits<double>::infinity();
  std::size_t visited = 0;

  double grid_value(std::size_t k, std::size_t idx) const {
    const auto& u = problem.unit(free_units[k]);
    return std::min(u.p_min + static_cast<double>(idx) * step, u.p_max);
  }

  void descend(std::size_t k, double sum, double cost) {
    const auto& elim = problem.unit(eliminated);
    const double slack = 1e-9;
    if (k == free_units.size()) {
      ++visited;
      const double p = problem.demand() - sum;
      if (p < elim.p_min - slack || p > elim.p_max + slack) return;
      const double pe = std::clamp(p, elim.p_min, elim.p_max);
      const double total = cost + elim.cost(pe);
      if (total < best_cost) {
        best_cost = total;
        current[eliminated] = pe;
        best_outputs = current;
      }
      return;
    }
    // Prune branches where the eliminated unit can no longer land in range.
    if (problem.demand() - (sum + rest_max[k]) > elim.p_max + slack) return;
    if (problem.demand() - (sum + rest_min[k]) < elim.p_min - slack) return;

    const std::size_t unit = free_units[k];
    const auto& u = problem.unit(unit);
    for (std::size_t idx = 0; idx < counts[k]; ++idx) {
      const double p = grid_value(k, idx);
      current[unit] = p;
      descend(k + 1, sum + p, cost + u.cost(p));
    }
  }
};

}  // namespace

std::string_view to_string(Binding b) noexcept {
  switch (b) {
    case Binding::kAtLower: return "at-lower";
    case Binding::kAtUpper: return "at-upper";
    case Binding::kInterior: return "interior";
  }
  return "interior";
}

OracleSolution solve_lambda(const DispatchProblem& problem, double balance_tol) {
  for (std::size_t i = 0; i < problem.size(); ++i) {
    if (!(problem.unit(i).quad > 0.0)) {
      throw UnsupportedInstance("unit " + std::to_string(i + 1) +
                                " has a non-positive quadratic coefficient; the "
                                "lambda solver needs strictly convex units");
    }
  }
  if (!(balance_tol > 0.0)) throw InvalidArgument("balance tolerance must be positive");

  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& u : problem.units()) {
    lo = std::min(lo, u.incremental_cost(u.p_min));
    hi = std::max(hi, u.incremental_cost(u.p_max));
  }

  const double demand = problem.demand();
  // Corner cases: the only feasible point is all-min or all-max.
  if (demand <= problem.total_min()) {
    std::vector<double> p;
    for (const auto& u : problem.units()) p.push_back(u.p_min);
    return make_solution(problem, std::move(p), lo, 0);
  }
  if (demand >= problem.total_max()) {
    std::vector<double> p;
    for (const auto& u : problem.units()) p.push_back(u.p_max);
    return make_solution(problem, std::move(p), hi, 0);
  }

  double lambda = 0.5 * (lo + hi);
  std::vector<double> outputs;
  double residual = std::numeric_limits<double>::infinity();
  std::size_t it = 0;
  while (it < kMaxLambdaIterations) {
    ++it;
    lambda = 0.5 * (lo + hi);
    outputs = dispatch_at(problem, lambda);
    residual = balance_residual(problem, outputs);
    if (std::abs(residual) <= balance_tol) break;
    if (residual < 0.0) {
      lo = lambda;
    } else {
      hi = lambda;
    }
  }
  if (!(std::abs(residual) <= balance_tol)) {
    throw Error("lambda bisection did not reach balance tolerance after " +
                std::to_string(it) + " iterations (residual " +
                std::to_string(residual) + " MW)");
  }

  // Closed-form lambda on the active set found by bisection.
  const auto tags = classify(problem, outputs);
  double fixed_output = 0.0;
  double inv_slope = 0.0;
  double offset = 0.0;
  for (std::size_t i = 0; i < problem.size(); ++i) {
    const auto& u = problem.unit(i);
    if (tags[i] == Binding::kInterior) {
      inv_slope += 1.0 / (2.0 * u.quad);
      offset += u.lin / (2.0 * u.quad);
    } else {
      fixed_output += outputs[i];
    }
  }
  if (inv_slope > 0.0) {
    const double exact = (demand - fixed_output + offset) / inv_slope;
    auto refined = dispatch_at(problem, exact);
    const double refined_residual = balance_residual(problem, refined);
    if (classify(problem, refined) == tags &&
        std::abs(refined_residual) <= std::abs(residual)) {
      lambda = exact;
      outputs = std::move(refined);
    }
  }
  return make_solution(problem, std::move(outputs), lambda, it);
}

GridSolution brute_force_check(const DispatchProblem& problem, double grid_step) {
  if (!(grid_step > 0.0) || !std::isfinite(grid_step)) {
    throw InvalidArgument("grid step must be positive and finite");
  }

  std::size_t eliminated = 0;
  for (std::size_t i = 1; i < problem.size(); ++i) {
    const auto& u = problem.unit(i);
    const auto& e = problem.unit(eliminated);
    if (u.p_max - u.p_min > e.p_max - e.p_min) eliminated = i;
  }

  GridSearch search{problem, grid_step, eliminated, {}, {}, {}, {}, {}, {}};
  double points = 1.0;
  for (std::size_t i = 0; i < problem.size(); ++i) {
    if (i == eliminated) continue;
    const auto& u = problem.unit(i);
    auto n = static_cast<std::size_t>(std::floor((u.p_max - u.p_min) / grid_step + 1e-9)) + 1;
    // Off-grid upper limit: add it as a final point.
    if (u.p_min + static_cast<double>(n - 1) * grid_step < u.p_max - 1e-9) ++n;
    search.free_units.push_back(i);
    search.counts.push_back(n);
    points *= static_cast<double>(n);
  }
  if (points > kMaxGridPoints) {
    throw UnsupportedInstance("grid of " + std::to_string(points) +
                              " points exceeds the brute-force limit; use a coarser step");
  }

  const std::size_t n_free = search.free_units.size();
  search.rest_min.assign(n_free + 1, 0.0);
  search.rest_max.assign(n_free + 1, 0.0);
  for (std::size_t k = n_free; k-- > 0;) {
    const auto& u = problem.unit(search.free_units[k]);
    search.rest_min[k] = search.rest_min[k + 1] + u.p_min;
    search.rest_max[k] = search.rest_max[k + 1] + u.p_max;
  }
  search.current.assign(problem.size(), 0.0);
  search.descend(0, 0.0, 0.0);

  if (search.best_outputs.empty()) {
    throw InfeasibleDemand("no grid point at step " + std::to_string(grid_step) +
                           " MW satisfies the balance within unit limits");
  }
  return GridSolution{std::move(search.best_outputs), search.best_cost, eliminated,
                      search.visited};
}

}  // namespace appa::dispatch
