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

#ifndef APPA_DISPATCH_HPP
#define APPA_DISPATCH_HPP

// Economic load dispatch without transmission losses: minimize the summed
// quadratic fuel cost of a fleet subject to the power balance
// sum(P_i) = demand and per-unit limits p_min <= P_i <= p_max.

#include <cstddef>
#include <span>
#include <vector>

#include "appa/engine.hpp"

namespace appa::dispatch {

/// Cost curve fixed + lin * P + quad * P^2 (Rs/h, P in MW) and limits.
struct GeneratorUnit {
  double quad = 0.0;   // Rs/MW^2h
  double lin = 0.0;    // Rs/MWh
  double fixed = 0.0;  // Rs/h
  double p_min = 0.0;  // MW
  double p_max = 0.0;  // MW

  double cost(double p) const noexcept { return fixed + lin * p + quad * p * p; }
  double incremental_cost(double p) const noexcept { return lin + 2.0 * quad * p; }

  bool operator==(const GeneratorUnit&) const = default;
};

class DispatchProblem {
 public:
  /// Throws InvalidArgument for malformed units and InfeasibleDemand when
  /// demand lies outside [sum p_min, sum p_max].
  DispatchProblem(std::vector<GeneratorUnit> units, double demand);

  std::span<const GeneratorUnit> units() const noexcept { return units_; }
  const GeneratorUnit& unit(std::size_t i) const { return units_[i]; }
  std::size_t size() const noexcept { return units_.size(); }
  double demand() const noexcept { return demand_; }
  double total_min() const noexcept;
  double total_max() const noexcept;

  /// The box [p_min, p_max] per unit, in unit order.
  SearchSpace search_space() const;

  bool operator==(const DispatchProblem&) const = default;

 private:
  std::vector<GeneratorUnit> units_;
  double demand_;
};

/// Quadratic exterior penalty weight (Rs/h per MW^2) on the balance residual.
class PenaltyConfig {
 public:
  static constexpr double kDefaultWeight = 1e6;

  explicit PenaltyConfig(double weight = kDefaultWeight);
  double weight() const noexcept { return weight_; }

 private:
  double weight_;
};

struct DispatchSolution {
  std::vector<double> outputs;  // MW
  double cost = 0.0;            // Rs/h, no penalty
  double residual = 0.0;        // sum(outputs) - demand, MW
};

inline constexpr double kDefaultResidualTolerance = 0.1;  // MW

double total_cost(const DispatchProblem& problem, std::span<const double> outputs);
double balance_residual(const DispatchProblem& problem, std::span<const double> outputs);
double penalized_objective(const DispatchProblem& problem, const PenaltyConfig& penalty,
                           std::span<const double> outputs);

/// The penalized objective as an engine Objective. Captures by value.
Objective make_objective(const DispatchProblem& problem, const PenaltyConfig& penalty);

/// Checks unit limits (closed intervals) and |residual| <= residual_tol.
/// Throws ValidationError naming the offending unit and bound, or the
/// residual and tolerance.
DispatchSolution validate_solution(const DispatchProblem& problem,
                                   std::span<const double> outputs,
                                   double residual_tol = kDefaultResidualTolerance);

}  // namespace appa::dispatch

#endif  // APPA_DISPATCH_HPP
