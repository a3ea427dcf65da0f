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

// Acceptance gate. Each criterion prints one PASS/FAIL line followed by its
// measured values. `--only N` runs a single criterion (used by ctest).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "appa/dispatch.hpp"
#include "appa/engine.hpp"
#include "appa/oracle.hpp"
#include "appa/problem_io.hpp"
#include "harness.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace appa;
using namespace appa::dispatch;

namespace {

struct Outcome {
  bool passed = true;
  std::vector<std::string> details;

  void check(bool ok, std::string what) {
    details.push_back(fmt::format("{} {}", ok ? "ok  " : "FAIL", what));
    passed = passed && ok;
  }
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string data(const std::string& rel) { return std::string(APPA_DATA_DIR) + "/" + rel; }

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// ---------------------------------------------------------------------------
// Shared multi-trial runs for criteria 3, 4 and 5, executed through the same
// code path as `appa solve` and read back from the files it writes.

struct TraceRow {
  double best_cost;
  double residual;
};

struct SolveRun {
  nlohmann::json report;
  std::vector<std::vector<TraceRow>> traces;
  double seconds = 0.0;
  int exit_code = 0;
};

std::vector<TraceRow> read_trace(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  if (line != "generation,best_cost,mean_cost,residual") {
    throw std::runtime_error("bad trace header in " + p.string());
  }
  std::vector<TraceRow> rows;
  while (std::getline(in, line)) {
    std::vector<std::string> cols;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cols.push_back(c);
    rows.push_back({std::stod(cols.at(1)), std::stod(cols.at(3))});
  }
  return rows;
}

SolveRun solve(const std::string& name, const std::string& problem, std::size_t pop,
               std::size_t generations) {
  harness::ExperimentConfig cfg;
  cfg.problem_path = data("problems/" + problem);
  cfg.trials = 20;
  cfg.params.seed = 1;
  cfg.params.population_size = pop;
  cfg.params.max_generations = generations;
  cfg.params.max_runners = 5;
  cfg.params.stagnation_threshold = 10;
  cfg.penalty_weight = 1e6;
  cfg.residual_tol = 0.1;
  cfg.threads = 1;
  cfg.out_dir = fs::path(APPA_TEST_TMP) / name;
  fs::remove_all(cfg.out_dir);

  SolveRun run;
  std::ostringstream out, err;
  Stopwatch sw;
  run.exit_code = harness::cmd_solve(cfg, out, err);
  run.seconds = sw.seconds();
  if (run.exit_code == harness::kExitInputError) throw std::runtime_error(err.str());

  std::ifstream report(cfg.out_dir / "report.json");
  run.report = nlohmann::json::parse(report);
  for (std::size_t k = 0; k < cfg.trials; ++k) {
    run.traces.push_back(read_trace(harness::trace_path(cfg.out_dir, k)));
  }
  return run;
}

const SolveRun& problem1_runs() {
  static const SolveRun run = solve("problem1", "problem1.json", 30, 200);
  return run;
}

const SolveRun& problem2_runs() {
  static const SolveRun run = solve("problem2", "problem2.json", 200, 300);
  return run;
}

// ---------------------------------------------------------------------------

Outcome c1_oracle_exactness() {
  Outcome o;
  Stopwatch sw;
  std::ostringstream out, err;
  const int rc = harness::cmd_oracle(data("problems/problem1.json"), out, err);
  const auto s = solve_lambda(load_problem(data("problems/problem1.json")));
  const double secs = sw.seconds();
  o.check(rc == 0, fmt::format("cmd_oracle exit code {}", rc));
  const double expected[] = {400.0, 250.0, 150.0};
  for (std::size_t i = 0; i < 3; ++i) {
    o.check(std::abs(s.outputs[i] - expected[i]) <= 1e-6,
            fmt::format("P{} = {:.10f} MW (target {}, tol 1e-6)", i + 1, s.outputs[i], expected[i]));
  }
  o.check(std::abs(s.cost - 6682.5) <= 1e-6,
          fmt::format("cost = {:.10f} Rs/h (target 6682.5, tol 1e-6)", s.cost));
  o.check(std::abs(s.lambda - 8.5) <= 1e-6,
          fmt::format("lambda = {:.10f} Rs/MWh (target 8.5)", s.lambda));
  o.check(out.str().find("400.0000") != std::string::npos &&
              out.str().find("cost: 6682.5 Rs/h") != std::string::npos,
          "printed outputs and cost");
  o.check(secs < 1.0, fmt::format("runtime {:.3f} s < 1 s", secs));
  return o;
}

Outcome c2_oracle_self_consistency() {
  Outcome o;
  Stopwatch sw;
  for (const char* name : {"problem1.json", "problem2.json"}) {
    const auto p = load_problem(data(std::string("problems/") + name));
    const auto exact = solve_lambda(p);
    const auto grid = brute_force_check(p, 0.5);
    const double diff = std::abs(exact.cost - grid.cost);
    o.check(diff <= 0.5, fmt::format("{}: lambda {:.4f} vs grid(0.5 MW) {:.4f} Rs/h, |diff| {:.2e} <= 0.5 "
                                     "({} grid points)",
                                     name, exact.cost, grid.cost, diff, grid.points_visited));
  }
  const double secs = sw.seconds();
  o.check(secs < 60.0, fmt::format("runtime {:.3f} s < 60 s", secs));
  return o;
}

Outcome c3_problem1() {
  Outcome o;
  const auto& run = problem1_runs();
  const double target = 6682.5;
  double worst_gap = 0.0, worst_residual = 0.0;
  std::vector<double> costs;
  for (const auto& t : run.report["trials"]) {
    const double cost = t["cost"].get<double>();
    costs.push_back(cost);
    worst_gap = std::max(worst_gap, std::abs(cost - target) / target);
    worst_residual = std::max(worst_residual, std::abs(t["residual_mw"].get<double>()));
  }
  const double med_gap = std::abs(median(costs) - target) / target;
  o.check(costs.size() == 20, fmt::format("{} trials", costs.size()));
  o.check(worst_gap <= 0.005, fmt::format("worst gap {:.4f}% <= 0.5%", 100 * worst_gap));
  o.check(worst_residual <= 0.1, fmt::format("worst |residual| {:.2e} MW <= 0.1", worst_residual));
  o.check(med_gap <= 0.0005, fmt::format("median gap {:.4f}% <= 0.05%", 100 * med_gap));
  o.check(run.seconds < 10.0, fmt::format("runtime {:.3f} s < 10 s", run.seconds));
  return o;
}

Outcome c4_problem2() {
  Outcome o;
  const auto& run = problem2_runs();
  const auto p = load_problem(data("problems/problem2.json"));
  const double target = solve_lambda(p).cost;
  double worst_gap = 0.0;
  bool inside = true;
  std::vector<double> costs;
  for (const auto& t : run.report["trials"]) {
    const double cost = t["cost"].get<double>();
    costs.push_back(cost);
    worst_gap = std::max(worst_gap, std::abs(cost - target) / target);
    const auto outputs = t["outputs_mw"].get<std::vector<double>>();
    for (std::size_t i = 0; i < p.size(); ++i) {
      inside = inside && outputs[i] >= p.unit(i).p_min && outputs[i] <= p.unit(i).p_max;
    }
  }
  const double med_gap = std::abs(median(costs) - target) / target;
  o.check(costs.size() == 20, fmt::format("{} trials vs oracle {:.4f} Rs/h", costs.size(), target));
  o.check(worst_gap <= 0.01, fmt::format("worst gap {:.4f}% <= 1%", 100 * worst_gap));
  o.check(med_gap <= 0.002, fmt::format("median gap {:.4f}% <= 0.2%", 100 * med_gap));
  o.check(inside, "all outputs inside unit limits");
  o.check(run.seconds < 60.0, fmt::format("runtime {:.3f} s < 60 s", run.seconds));
  return o;
}

Outcome c5_convergence() {
  Outcome o;
  for (const auto* run : {&problem1_runs(), &problem2_runs()}) {
    const std::string name = run == &problem1_runs() ? "problem1" : "problem2";
    std::size_t monotone = 0, settled = 0;
    for (const auto& rows : run->traces) {
      bool ok = !rows.empty();
      for (std::size_t g = 1; g < rows.size(); ++g) ok = ok && rows[g].best_cost <= rows[g - 1].best_cost;
      monotone += ok;
      settled += !rows.empty() && std::abs(rows.back().residual) <= 0.1;
    }
    o.check(monotone == run->traces.size(),
            fmt::format("{}: non-increasing best_cost in {}/{} traces", name, monotone,
                        run->traces.size()));
    o.check(settled >= 19, fmt::format("{}: final |residual| <= 0.1 MW in {}/{} traces (need 19)",
                                       name, settled, run->traces.size()));
  }
  return o;
}

// Byte image of a trace, for the determinism property.
std::string trace_bytes(const RunTrace& trace) {
  std::string bytes;
  auto put = [&bytes](const auto& v) {
    bytes.append(reinterpret_cast<const char*>(&v), sizeof v);
  };
  for (const auto& g : trace.generations) {
    put(g.generation);
    put(g.best_objective);
    put(g.mean_objective);
    for (double x : g.best_position) put(x);
  }
  return bytes;
}

Outcome c6_engine_properties() {
  Outcome o;
  constexpr int kCases = 10000;
  Stopwatch sw;
  std::mt19937_64 g(2026);
  auto real = [&g](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(g); };
  auto count = [&g](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(g);
  };
  const double n_lo = fitness_map(0.0), n_hi = fitness_map(1.0);

  int failures = 0;
  for (int c = 0; c < kCases; ++c) {
    std::vector<double> f(count(2, 50));
    const double scale = std::pow(10.0, real(-3, 9));
    for (auto& v : f) v = c % 10 == 0 ? 1.0 : real(-scale, scale);
    const auto n = normalize_fitness(f);
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (n[i] < n_lo - 1e-15 || n[i] > n_hi + 1e-15) ++failures;
      for (std::size_t k = 0; k < f.size(); ++k) {
        if (f[i] < f[k] && !(n[i] > n[k])) ++failures;
      }
    }
  }
  o.check(failures == 0, fmt::format("fitness map range/monotonicity: {} cases, {} failures", kCases, failures));

  failures = 0;
  RngStream rng(7);
  for (int c = 0; c < kCases; ++c) {
    const double fit = c % 4 == 0 ? static_cast<double>(c % 8 == 0) : real(0, 1);
    const std::size_t n_max = count(1, 50);
    const std::size_t k = runner_count(fit, n_max, rng);
    const std::size_t k_edge = runner_count(fit, n_max, static_cast<double>(c % 2));
    if (k < 1 || k > n_max || k_edge < 1 || k_edge > n_max) ++failures;
  }
  o.check(failures == 0, fmt::format("runner count in [1, n_max]: {} cases, {} failures", kCases, failures));

  failures = 0;
  for (int c = 0; c < kCases; ++c) {
    const double fit = c % 5 == 0 ? 1.0 : (c % 5 == 1 ? 0.0 : real(0, 1));
    const auto d = runner_offsets(fit, count(1, 30), rng);
    for (double v : d) {
      if (v < -0.5 || v > 0.5) ++failures;
      if (fit == 1.0 && v != 0.0) ++failures;
    }
  }
  o.check(failures == 0, fmt::format("runner offsets in [-0.5, 0.5]: {} cases, {} failures", kCases, failures));

  failures = 0;
  for (int c = 0; c < kCases; ++c) {
    const std::size_t dims = count(1, 10);
    std::vector<double> lo(dims), hi(dims), parent(dims), d(dims);
    for (std::size_t j = 0; j < dims; ++j) {
      lo[j] = real(-1e4, 1e4);
      hi[j] = lo[j] + std::pow(10.0, real(-6, 4));
      const int mode = static_cast<int>(count(0, 2));
      parent[j] = mode == 0 ? lo[j] : (mode == 1 ? hi[j] : real(lo[j], hi[j]));
      const int dmode = static_cast<int>(count(0, 3));
      d[j] = dmode == 0 ? -0.5 : (dmode == 1 ? 0.5 : real(-0.5, 0.5));
    }
    const SearchSpace space(lo, hi);
    if (!space.contains(spawn_runner(parent, d, space))) ++failures;
  }
  o.check(failures == 0, fmt::format("clamped runners inside the box: {} cases, {} failures", kCases, failures));

  auto small_problem = [&](std::uint64_t seed) {
    std::mt19937_64 local(seed);
    auto r = [&local](double a, double b) { return std::uniform_real_distribution<double>(a, b)(local); };
    const std::size_t dims = 1 + local() % 4;
    std::vector<double> lo(dims), hi(dims), centre(dims);
    for (std::size_t j = 0; j < dims; ++j) {
      lo[j] = r(-10, 10);
      hi[j] = lo[j] + r(0.1, 20);
      centre[j] = r(lo[j], hi[j]);
    }
    AppaParams params;
    params.population_size = 2 + local() % 7;
    params.max_generations = 1 + local() % 4;
    params.max_runners = 1 + local() % 6;
    params.stagnation_threshold = 1 + local() % 3;
    params.seed = local();
    const int kind = static_cast<int>(local() % 3);
    Objective obj = [centre, kind](std::span<const double> x) {
      double s = 0.0;
      for (std::size_t j = 0; j < x.size(); ++j) {
        const double dx = x[j] - centre[j];
        s += kind == 0 ? dx * dx : (kind == 1 ? std::abs(dx) : dx * dx - 3.0 * std::cos(2.0 * dx));
      }
      return s;
    };
    return std::tuple{SearchSpace(lo, hi), params, obj};
  };

  failures = 0;
  for (int c = 0; c < kCases; ++c) {
    const auto [space, params, obj] = small_problem(static_cast<std::uint64_t>(c));
    const auto result = run(obj, space, params, [&](const GenerationRecord&, std::span<const Plant> pop) {
      if (pop.size() != params.population_size) ++failures;
    });
    if (result.trace.generations.size() != params.max_generations) ++failures;
  }
  o.check(failures == 0, fmt::format("constant population size: {} runs, {} failures", kCases, failures));

  failures = 0;
  for (int c = 0; c < kCases; ++c) {
    const auto [space, params, obj] = small_problem(1'000'000 + static_cast<std::uint64_t>(c));
    if (trace_bytes(run(obj, space, params).trace) != trace_bytes(run(obj, space, params).trace)) ++failures;
  }
  o.check(failures == 0, fmt::format("seed determinism (byte-identical traces): {} runs, {} failures", kCases,
                                     failures));

  const double secs = sw.seconds();
  o.check(secs < 30.0, fmt::format("runtime {:.3f} s < 30 s", secs));
  return o;
}

Outcome c7_sphere() {
  Outcome o;
  Stopwatch sw;
  const SearchSpace space(std::vector<double>(5, -1.0), std::vector<double>(5, 1.0));
  const Objective sphere = [](std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
  };
  std::size_t hits = 0;
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    AppaParams params;
    params.population_size = 30;
    params.max_generations = 200;
    params.seed = seed;
    const double best = run(sphere, space, params).best.objective;
    hits += best <= 1e-3;
    worst = std::max(worst, best);
  }
  const double secs = sw.seconds();
  o.check(hits >= 18, fmt::format("best <= 1e-3 in {}/20 seeds (need 18); worst {:.3e}", hits, worst));
  o.check(secs < 5.0, fmt::format("runtime {:.3f} s < 5 s", secs));
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"APPA acceptance criteria"};
  int only = 0;
  app.add_option("--only", only, "Run a single criterion (1-7)")->check(CLI::Range(1, 7));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"oracle exactness on problem1", c1_oracle_exactness},
      {"oracle self-consistency (lambda vs grid)", c2_oracle_self_consistency},
      {"APPA on problem1, 20 trials", c3_problem1},
      {"APPA on problem2, 20 trials", c4_problem2},
      {"convergence traces", c5_convergence},
      {"engine property suite", c6_engine_properties},
      {"sphere sanity", c7_sphere},
  };

  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only && static_cast<std::size_t>(only) != i + 1) continue;
    Outcome outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome.check(false, std::string("exception: ") + e.what());
    }
    std::cout << (outcome.passed ? "[PASS] " : "[FAIL] ") << "C" << i + 1 << " "
              << criteria[i].first << "\n";
    for (const auto& d : outcome.details) std::cout << "         " << d << "\n";
    all = all && outcome.passed;
  }
  return all ? 0 : 1;
}
