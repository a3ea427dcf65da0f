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

#ifndef APPA_ENGINE_HPP
#define APPA_ENGINE_HPP

// Adaptive Plant Propagation Algorithm (APPA) for bounded continuous
// minimization.
//
// Each generation every plant receives a fitness in [0,1] derived from its
// rank in objective space. Fit plants send many short runners, poor plants a
// few long ones. Runners that leave the box are clamped back onto it. Parents
// and runners compete in a single sorted pool and the best `population_size`
// survive. Plants that stop producing improvements are replaced by fresh
// random plants, except the incumbent best.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "appa/rng.hpp"

namespace appa {

/// Objective to minimize. Must be total and finite on the search box.
using Objective = std::function<double(std::span<const double>)>;

/// Axis-aligned box [lower[j], upper[j]] with lower[j] < upper[j].
class SearchSpace {
 public:
  /// Throws InvalidArgument on size mismatch, empty bounds, non-finite
  /// entries or a coordinate with lower >= upper.
  SearchSpace(std::vector<double> lower, std::vector<double> upper);

  std::size_t dims() const noexcept { return lower_.size(); }
  std::span<const double> lower() const noexcept { return lower_; }
  std::span<const double> upper() const noexcept { return upper_; }
  double lower(std::size_t j) const { return lower_[j]; }
  double upper(std::size_t j) const { return upper_[j]; }
  double width(std::size_t j) const { return upper_[j] - lower_[j]; }

  bool contains(std::span<const double> x) const noexcept;
  double clamp(std::size_t j, double value) const noexcept;

 private:
  std::vector<double> lower_;
  std::vector<double> upper_;
};

struct Plant {
  std::vector<double> position;
  double objective = 0.0;
  double fitness = 0.0;          // normalized, in [0,1]
  std::size_t stagnation = 0;    // generations without a surviving improvement
};

struct AppaParams {
  std::size_t population_size = 30;
  std::size_t max_generations = 200;
  std::size_t max_runners = 5;
  std::size_t stagnation_threshold = 10;
  std::uint64_t seed = 1;

  /// Throws InvalidArgument when a field is outside its allowed range.
  void validate() const;
};

struct GenerationRecord {
  std::size_t generation = 0;   // 1-based
  double best_objective = 0.0;   // best ever seen up to this generation
  double mean_objective = 0.0;   // mean over the current population
  std::vector<double> best_position;

  bool operator==(const GenerationRecord&) const = default;
};

struct RunTrace {
  std::vector<GenerationRecord> generations;

  bool operator==(const RunTrace&) const = default;
};

struct RunResult {
  Plant best;
  RunTrace trace;
};

/// Fitness squashing map N(z) = (tanh(4z - 2) + 1) / 2 for z in [0,1].
double fitness_map(double z);

/// Min-max rescales raw objectives (lower is better) to z in [0,1] and
/// applies fitness_map. If every objective is equal, z = 0.5 for all.
/// Throws InvalidObjective on non-finite input and InvalidArgument when
/// fewer than two values are given.
std::vector<double> normalize_fitness(std::span<const double> objectives);

/// max(1, ceil(max_runners * fitness * r)) for an explicit draw r in [0,1].
std::size_t runner_count(double fitness, std::size_t max_runners, double r);
std::size_t runner_count(double fitness, std::size_t max_runners,
                         RngStream& rng);

/// d[j] = (1 - fitness) * (r[j] - 0.5) for explicit draws r[j] in [0,1].
std::vector<double> runner_offsets(double fitness,
                                   std::span<const double> draws);
/// Same, with one fresh draw per coordinate.
std::vector<double> runner_offsets(double fitness, std::size_t dims,
                                   RngStream& rng);

/// x[j] = clamp(parent[j] + width[j] * offsets[j], lower[j], upper[j]).
std::vector<double> spawn_runner(std::span<const double> parent,
                                 std::span<const double> offsets,
                                 const SearchSpace& space);

/// Indices of the `population_size` best objectives in ascending order.
/// Equal objectives keep their input order.
std::vector<std::size_t> survivor_indices(std::span<const double> objectives,
                                          std::size_t population_size);

/// Sorts the pool ascending by objective (stable) and keeps the first
/// `population_size` plants.
std::vector<Plant> survive(std::vector<Plant> pool,
                           std::size_t population_size);

/// Index of the plant with the lowest objective (first one on ties).
std::size_t best_index(std::span<const Plant> population);

/// Replaces every plant whose stagnation counter reached `threshold` with a
/// uniformly random, freshly evaluated plant. The current best plant is
/// never replaced.
std::vector<Plant> apply_abandonment(std::vector<Plant> population,
                                     std::size_t threshold,
                                     const SearchSpace& space,
                                     RngStream& rng,
                                     const Objective& objective);

/// Called once per generation with the population after survival and
/// abandonment. Must not retain the span.
using GenerationObserver =
    std::function<void(const GenerationRecord&, std::span<const Plant>)>;

/// Runs the full algorithm. Deterministic in (objective, space, params).
/// Throws InvalidObjective naming the position if the objective returns a
/// non-finite value.
RunResult run(const Objective& objective, const SearchSpace& space,
              const AppaParams& params, const GenerationObserver& observer = {});

}  // namespace appa

#endif  // APPA_ENGINE_HPP
