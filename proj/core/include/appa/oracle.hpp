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

#ifndef APPA_ORACLE_HPP
#define APPA_ORACLE_HPP

// Reference solvers for the lossless dispatch problem. Independent of the
// metaheuristic engine and used to verify it.

#include <cstddef>
#include <string_view>
#include <vector>

#include "appa/dispatch.hpp"

namespace appa::dispatch {

enum class Binding { kInterior, kAtLower, kAtUpper };

std::string_view to_string(Binding b) noexcept;

struct OracleSolution {
  std::vector<double> outputs;   // MW
  double lambda = 0.0;           // system incremental cost, Rs/MWh
  double cost = 0.0;             // Rs/h
  std::vector<Binding> binding;  // per unit
  std::size_t iterations = 0;    // bisection steps taken
};

inline constexpr double kDefaultBalanceTolerance = 1e-6;  // MW
inline constexpr std::size_t kMaxLambdaIterations = 200;

/// Equal-incremental-cost dispatch. Bisects lambda over
/// [min incr(p_min), max incr(p_max)]; each unit outputs
/// clamp((lambda - lin) / (2 quad), p_min, p_max). Once the balance residual
/// is within `balance_tol`, lambda is solved in closed form on the resulting
/// active set.
///
/// Throws UnsupportedInstance if any unit has quad <= 0. Demand feasibility
/// is enforced by DispatchProblem itself.
OracleSolution solve_lambda(const DispatchProblem& problem,
                            double balance_tol = kDefaultBalanceTolerance);

struct GridSolution {
  std::vector<double> outputs;
  double cost = 0.0;
  std::size_t eliminated_unit = 0;
  std::size_t points_visited = 0;
};

inline constexpr double kMaxGridPoints = 5e8;

/// Exhaustive grid search. The widest unit is eliminated through the balance
/// equation; every other unit is gridded at p_min + k * grid_step plus p_max
/// itself when the step does not land on it. Points
/// that push the eliminated unit outside its limits are discarded.
///
/// Throws InvalidArgument for a non-positive step, UnsupportedInstance when
/// the grid exceeds kMaxGridPoints, and InfeasibleDemand when no grid point
/// is feasible.
GridSolution brute_force_check(const DispatchProblem& problem, double grid_step);

}  // namespace appa::dispatch

#endif  // APPA_ORACLE_HPP
