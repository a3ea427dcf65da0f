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

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "appa/dispatch.hpp"
#include "appa/engine.hpp"
#include "appa/oracle.hpp"

namespace {

using namespace appa;
using namespace appa::dispatch;

DispatchProblem problem1() {
  return DispatchProblem({{0.004, 5.3, 500, 350, 450},
                          {0.006, 5.5, 400, 200, 300},
                          {0.009, 5.8, 200, 100, 200}},
                         800);
}

DispatchProblem problem2() {
  return DispatchProblem({{0.15247, 38.53973, 756.79886, 10, 30},
                          {0.10587, 46.15916, 451.32513, 20, 40},
                          {0.02803, 40.39655, 1049.99770, 40, 55},
                          {0.03546, 38.30553, 1243.53110, 40, 55},
                          {0.02111, 36.32782, 1658.56960, 120, 140},
                          {0.01799, 38.27041, 1356.65920, 120, 140}},
                         410);
}

void BM_NormalizeFitness(benchmark::State& state) {
  std::mt19937_64 g(1);
  std::vector<double> f(static_cast<std::size_t>(state.range(0)));
  for (auto& v : f) v = std::uniform_real_distribution<double>(0, 1e4)(g);
  for (auto _ : state) benchmark::DoNotOptimize(normalize_fitness(f));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_NormalizeFitness)->Arg(30)->Arg(200)->Arg(1000);

void BM_RunProblem1(benchmark::State& state) {
  const auto p = problem1();
  const auto objective = make_objective(p, PenaltyConfig{});
  AppaParams params;
  params.population_size = 30;
  params.max_generations = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run(objective, p.search_space(), params));
}
BENCHMARK(BM_RunProblem1)->Arg(5)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_RunProblem2(benchmark::State& state) {
  const auto p = problem2();
  const auto objective = make_objective(p, PenaltyConfig{});
  AppaParams params;
  params.population_size = static_cast<std::size_t>(state.range(0));
  params.max_generations = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(run(objective, p.search_space(), params));
}
BENCHMARK(BM_RunProblem2)->Args({200, 300})->Args({1000, 100})->Unit(benchmark::kMillisecond);

void BM_SolveLambda(benchmark::State& state) {
  const auto p = problem2();
  for (auto _ : state) benchmark::DoNotOptimize(solve_lambda(p));
}
BENCHMARK(BM_SolveLambda);

void BM_BruteForce(benchmark::State& state) {
  const auto p = state.range(0) == 1 ? problem1() : problem2();
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_check(p, 0.5));
}
BENCHMARK(BM_BruteForce)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
