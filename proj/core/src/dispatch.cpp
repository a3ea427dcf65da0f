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

#include "appa/dispatch.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "appa/errors.hpp"

namespace appa::dispatch {

namespace {

void require_length(const DispatchProblem& problem, std::span<const double> outputs) {
  if (outputs.size() != problem.size()) {
    throw InvalidArgument("expected " + std::to_string(problem.size()) +
                          " unit outputs, got " + std::to_string(outputs.size()));
  }
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

void validate_unit(const GeneratorUnit& u, std::size_t index) {
  const std::string where = "unit " + std::to_string(index + 1);
  if (!std::isfinite(u.quad) || !std::isfinite(u.lin) || !std::isfinite(u.fixed)) {
    throw InvalidArgument(where + ": cost coefficients must be finite");
  }
  if (!std::isfinite(u.p_min) || !std::isfinite(u.p_max)) {
    throw InvalidArgument(where + ": limits must be finite");
  }
  if (u.p_min < 0.0) throw InvalidArgument(where + ": p_min must be non-negative");
  if (!(u.p_min < u.p_max)) throw InvalidArgument(where + ": p_min must be below p_max");
  if (u.quad < 0.0) throw InvalidArgument(where + ": quad coefficient must be non-negative");
}

}  // namespace

DispatchProblem::DispatchProblem(std::vector<GeneratorUnit> units, double demand)
    : units_(std::move(units)), demand_(demand) {
  if (units_.empty()) throw InvalidArgument("dispatch problem needs at least one unit");
  for (std::size_t i = 0; i < units_.size(); ++i) validate_unit(units_[i], i);
  if (!std::isfinite(demand_)) throw InvalidArgument("demand must be finite");
  if (demand_ < total_min()) {
    throw InfeasibleDemand("demand " + num(demand_) +
                           " MW is below the aggregate lower limit " +
                           num(total_min()) + " MW");
  }
  if (demand_ > total_max()) {
    throw InfeasibleDemand("demand " + num(demand_) +
                           " MW exceeds the aggregate upper limit " +
                           num(total_max()) + " MW");
  }
}

double DispatchProblem::total_min() const noexcept {
  double s = 0.0;
  for (const auto& u : units_) s += u.p_min;
  return s;
}

double DispatchProblem::total_max() const noexcept {
  double s = 0.0;
  for (const auto& u : units_) s += u.p_max;
  return s;
}

SearchSpace DispatchProblem::search_space() const {
  std::vector<double> lo, hi;
  lo.reserve(units_.size());
  hi.reserve(units_.size());
  for (const auto& u : units_) {
    lo.push_back(u.p_min);
    hi.push_back(u.p_max);
  }
  return SearchSpace(std::move(lo), std::move(hi));
}

PenaltyConfig::PenaltyConfig(double weight) : weight_(weight) {
  if (!std::isfinite(weight) || !(weight > 0.0)) {
    throw InvalidArgument("penalty weight must be positive and finite");
  }
}

double total_cost(const DispatchProblem& problem, std::span<const double> outputs) {
  require_length(problem, outputs);
  double cost = 0.0;
  for (std::size_t i = 0; i < outputs.size(); ++i) cost += problem.unit(i).cost(outputs[i]);
  return cost;
}

double balance_residual(const DispatchProblem& problem, std::span<const double> outputs) {
  require_length(problem, outputs);
  double total = 0.0;
  for (double p : outputs) total += p;
  return total - problem.demand();
}

double penalized_objective(const DispatchProblem& problem, const PenaltyConfig& penalty,
                           std::span<const double> outputs) {
  const double r = balance_residual(problem, outputs);
  return total_cost(problem, outputs) + penalty.weight() * r * r;
}

Objective make_objective(const DispatchProblem& problem, const PenaltyConfig& penalty) {
  return [problem, penalty](std::span<const double> x) {
    return penalized_objective(problem, penalty, x);
  };
}

DispatchSolution validate_solution(const DispatchProblem& problem,
                                   std::span<const double> outputs,
                                   double residual_tol) {
  require_length(problem, outputs);
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    const auto& u = problem.unit(i);
    if (!(outputs[i] >= u.p_min)) {
      throw ValidationError("unit " + std::to_string(i + 1) + " output " +
                            num(outputs[i]) + " MW is below p_min " + num(u.p_min) + " MW");
    }
    if (!(outputs[i] <= u.p_max)) {
      throw ValidationError("unit " + std::to_string(i + 1) + " output " +
                            num(outputs[i]) + " MW is above p_max " + num(u.p_max) + " MW");
    }
  }
  DispatchSolution sol{std::vector<double>(outputs.begin(), outputs.end()),
                       total_cost(problem, outputs), balance_residual(problem, outputs)};
  if (!(std::abs(sol.residual) <= residual_tol)) {
    throw ValidationError("balance residual " + num(sol.residual) +
                          " MW exceeds tolerance " + num(residual_tol) + " MW");
  }
  return sol;
}

}  // namespace appa::dispatch
