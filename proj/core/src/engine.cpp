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

#include "appa/engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

#include "appa/errors.hpp"

namespace appa {

namespace {

std::string format_position(std::span<const double> x) {
  std::ostringstream os;
  os.precision(17);
  os << '[';
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (j) os << ", ";
    os << x[j];
  }
  os << ']';
  return os.str();
}

double evaluate_checked(const Objective& objective, std::span<const double> x) {
  const double value = objective(x);
  if (!std::isfinite(value)) {
    throw InvalidObjective("objective returned non-finite value " +
                           std::to_string(value) + " at position " +
                           format_position(x));
  }
  return value;
}

void require_unit_interval(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw InvalidArgument(std::string(what) + " must lie in [0,1], got " +
                          std::to_string(v));
  }
}

Plant random_plant(const SearchSpace& space, RngStream& rng,
                   const Objective& objective) {
  Plant p;
  p.position.resize(space.dims());
  for (std::size_t j = 0; j < space.dims(); ++j) {
    p.position[j] = rng.uniform(space.lower(j), space.upper(j));
  }
  p.objective = evaluate_checked(objective, p.position);
  return p;
}

double mean_objective(std::span<const Plant> population) {
  double sum = 0.0;
  for (const auto& p : population) sum += p.objective;
  return sum / static_cast<double>(population.size());
}

}  // namespace

SearchSpace::SearchSpace(std::vector<double> lower, std::vector<double> upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.empty()) throw InvalidArgument("search space needs at least one dimension");
  if (lower_.size() != upper_.size()) {
    throw InvalidArgument("search space bounds differ in length (" +
                          std::to_string(lower_.size()) + " lower vs " +
                          std::to_string(upper_.size()) + " upper)");
  }
  for (std::size_t j = 0; j < lower_.size(); ++j) {
    if (!std::isfinite(lower_[j]) || !std::isfinite(upper_[j])) {
      throw InvalidArgument("search space bound " + std::to_string(j) +
                            " is not finite");
    }
    if (!(lower_[j] < upper_[j])) {
      throw InvalidArgument("search space coordinate " + std::to_string(j) +
                            " has lower >= upper");
    }
  }
}

bool SearchSpace::contains(std::span<const double> x) const noexcept {
  if (x.size() != dims()) return false;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (!(x[j] >= lower_[j] && x[j] <= upper_[j])) return false;
  }
  return true;
}

double SearchSpace::clamp(std::size_t j, double value) const noexcept {
  return std::clamp(value, lower_[j], upper_[j]);
}

void AppaParams::validate() const {
  if (population_size < 2) throw InvalidArgument("population_size must be >= 2");
  if (max_generations < 1) throw InvalidArgument("max_generations must be >= 1");
  if (max_runners < 1) throw InvalidArgument("max_runners must be >= 1");
  if (stagnation_threshold < 1) {
    throw InvalidArgument("stagnation_threshold must be >= 1");
  }
}

double fitness_map(double z) { return 0.5 * (std::tanh(4.0 * z - 2.0) + 1.0); }

std::vector<double> normalize_fitness(std::span<const double> objectives) {
  if (objectives.size() < 2) {
    throw InvalidArgument("fitness normalization needs at least two objectives");
  }
  for (std::size_t i = 0; i < objectives.size(); ++i) {
    if (!std::isfinite(objectives[i])) {
      throw InvalidObjective("objective " + std::to_string(i) +
                             " is not finite");
    }
  }
  const auto [lo, hi] = std::minmax_element(objectives.begin(), objectives.end());
  const double f_min = *lo;
  const double f_max = *hi;
  const double range = f_max - f_min;

  std::vector<double> fitness(objectives.size());
  for (std::size_t i = 0; i < objectives.size(); ++i) {
    double z = 0.5;
    if (range > 0.0) z = std::clamp((f_max - objectives[i]) / range, 0.0, 1.0);
    fitness[i] = fitness_map(z);
  }
  return fitness;
}

std::size_t runner_count(double fitness, std::size_t max_runners, double r) {
  require_unit_interval(fitness, "fitness");
  require_unit_interval(r, "runner draw");
  if (max_runners < 1) throw InvalidArgument("max_runners must be >= 1");
  const double raw = std::ceil(static_cast<double>(max_runners) * fitness * r);
  if (raw < 1.0) return 1;
  return std::min(static_cast<std::size_t>(raw), max_runners);
}

std::size_t runner_count(double fitness, std::size_t max_runners,
                         RngStream& rng) {
  return runner_count(fitness, max_runners, rng.uniform01());
}

std::vector<double> runner_offsets(double fitness,
                                   std::span<const double> draws) {
  require_unit_interval(fitness, "fitness");
  std::vector<double> d(draws.size());
  for (std::size_t j = 0; j < draws.size(); ++j) {
    require_unit_interval(draws[j], "runner draw");
    d[j] = (1.0 - fitness) * (draws[j] - 0.5);
  }
  return d;
}

std::vector<double> runner_offsets(double fitness, std::size_t dims,
                                   RngStream& rng) {
  std::vector<double> draws(dims);
  for (auto& r : draws) r = rng.uniform01();
  return runner_offsets(fitness, draws);
}

std::vector<double> spawn_runner(std::span<const double> parent,
                                 std::span<const double> offsets,
                                 const SearchSpace& space) {
  if (parent.size() != space.dims() || offsets.size() != space.dims()) {
    throw InvalidArgument("runner dimensions do not match the search space");
  }
  std::vector<double> x(space.dims());
  for (std::size_t j = 0; j < x.size(); ++j) {
    x[j] = space.clamp(j, parent[j] + space.width(j) * offsets[j]);
  }
  return x;
}

std::vector<std::size_t> survivor_indices(std::span<const double> objectives,
                                          std::size_t population_size) {
  if (objectives.size() < population_size) {
    throw Error("internal: survival pool of " +
                std::to_string(objectives.size()) +
                " is smaller than the population size " +
                std::to_string(population_size));
  }
  std::vector<std::size_t> order(objectives.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return objectives[a] < objectives[b];
                   });
  order.resize(population_size);
  return order;
}

std::vector<Plant> survive(std::vector<Plant> pool,
                           std::size_t population_size) {
  std::vector<double> objectives(pool.size());
  std::transform(pool.begin(), pool.end(), objectives.begin(),
                 [](const Plant& p) { return p.objective; });
  std::vector<Plant> survivors;
  survivors.reserve(population_size);
  for (std::size_t idx : survivor_indices(objectives, population_size)) {
    survivors.push_back(std::move(pool[idx]));
  }
  return survivors;
}

std::size_t best_index(std::span<const Plant> population) {
  if (population.empty()) throw InvalidArgument("empty population");
  std::size_t best = 0;
  for (std::size_t i = 1; i < population.size(); ++i) {
    if (population[i].objective < population[best].objective) best = i;
  }
  return best;
}

std::vector<Plant> apply_abandonment(std::vector<Plant> population,
                                     std::size_t threshold,
                                     const SearchSpace& space,
                                     RngStream& rng,
                                     const Objective& objective) {
  if (threshold < 1) throw InvalidArgument("stagnation threshold must be >= 1");
  const std::size_t elite = best_index(population);
  for (std::size_t i = 0; i < population.size(); ++i) {
    if (i == elite || population[i].stagnation < threshold) continue;
    population[i] = random_plant(space, rng, objective);
  }
  return population;
}

RunResult run(const Objective& objective, const SearchSpace& space,
              const AppaParams& params, const GenerationObserver& observer) {
  params.validate();
  RngStream rng(params.seed);
  const std::size_t n_pop = params.population_size;
  const std::size_t dims = space.dims();

  std::vector<Plant> population;
  population.reserve(n_pop);
  for (std::size_t i = 0; i < n_pop; ++i) {
    population.push_back(random_plant(space, rng, objective));
  }
  Plant best = population[best_index(population)];

  auto track_best = [&best](std::span<const Plant> plants) {
    const Plant& candidate = plants[best_index(plants)];
    if (candidate.objective < best.objective) best = candidate;
  };

  RunResult result;
  result.trace.generations.reserve(params.max_generations);

  std::vector<Plant> pool;
  std::vector<std::size_t> parent_of;
  std::vector<double> pool_objectives;
  std::vector<double> objectives(n_pop);
  std::vector<bool> improved(n_pop);

  for (std::size_t gen = 0; gen < params.max_generations; ++gen) {
    for (std::size_t i = 0; i < n_pop; ++i) objectives[i] = population[i].objective;
    const std::vector<double> fitness = normalize_fitness(objectives);
    for (std::size_t i = 0; i < n_pop; ++i) population[i].fitness = fitness[i];

    // Parents occupy pool[0, n_pop); runners follow in creation order.
    pool = population;
    parent_of.assign(n_pop, n_pop);
    for (std::size_t i = 0; i < n_pop; ++i) {
      const Plant& parent = population[i];
      const std::size_t n_runners =
          runner_count(parent.fitness, params.max_runners, rng);
      for (std::size_t k = 0; k < n_runners; ++k) {
        const auto offsets = runner_offsets(parent.fitness, dims, rng);
        Plant runner;
        runner.position = spawn_runner(parent.position, offsets, space);
        runner.objective = evaluate_checked(objective, runner.position);
        pool.push_back(std::move(runner));
        parent_of.push_back(i);
      }
    }

    pool_objectives.resize(pool.size());
    for (std::size_t k = 0; k < pool.size(); ++k) {
      pool_objectives[k] = pool[k].objective;
    }
    const auto survivors = survivor_indices(pool_objectives, n_pop);

    std::fill(improved.begin(), improved.end(), false);
    for (std::size_t idx : survivors) {
      if (idx < n_pop) continue;
      const std::size_t p = parent_of[idx];
      if (pool[idx].objective < pool[p].objective) improved[p] = true;
    }

    std::vector<Plant> next;
    next.reserve(n_pop);
    for (std::size_t idx : survivors) {
      Plant plant = std::move(pool[idx]);
      if (idx < n_pop) {
        plant.stagnation = improved[idx] ? 0 : plant.stagnation + 1;
      } else {
        plant.stagnation = 0;
      }
      next.push_back(std::move(plant));
    }
    track_best(next);

    population = apply_abandonment(std::move(next), params.stagnation_threshold,
                                   space, rng, objective);
    track_best(population);

    result.trace.generations.push_back(GenerationRecord{
        gen + 1, best.objective, mean_objective(population), best.position});
    if (observer) observer(result.trace.generations.back(), population);
  }

  result.best = std::move(best);
  return result;
}

}  // namespace appa
