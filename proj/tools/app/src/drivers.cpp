// Copyright 2026 The kvbf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "kvbf/app/drivers.hpp"

#include <array>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "kvbf/app/scenario.hpp"

namespace kvbf::app {

namespace {

std::string zero_padded(int n, int width) {
  std::string s = std::to_string(n);
  if (static_cast<int>(s.size()) < width) s.insert(0, width - s.size(), '0');
  return s;
}

std::string shortest(double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

std::string kappa_label(double kappa) { return "kappa_" + shortest(kappa); }

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create " + dir.string() + ": " + ec.message());
}

}  // namespace

int threads_from_environment() {
  const char* env = std::getenv("KVBF_THREADS");
  if (env == nullptr || *env == '\0') return 1;
  int n = 0;
  const char* end = env + std::char_traits<char>::length(env);
  const auto res = std::from_chars(env, end, n);
  if (res.ec != std::errc() || res.ptr != end || n < 1) {
    throw ConfigError(std::string("KVBF_THREADS: expected a positive integer, got '") + env + "'");
  }
  return n;
}

std::vector<ErrorReport> run_convergence(const RunConfig& config, const RunOptions& options) {
  const std::optional<ExactSolution> exact = scenario_exact(config);
  if (!exact) throw ConfigError("convergence needs a scenario with a known exact solution");
  const TimeGrid grid = config.time_grid();
  std::vector<ErrorReport> reports;
  for (int n : config.levels) {
    const auto start = std::chrono::steady_clock::now();
    const Mesh mesh = scenario_mesh(config, n);
    const SpaceSet spaces(mesh, config.element);
    TransientSolver solver(mesh, spaces, scenario_problem(config), options.threads);
    const Trajectory traj = solver.run(grid);
    reports.push_back(error_norms(traj, *exact, mesh, spaces, grid));
    if (options.log != nullptr) {
      const ErrorReport& r = reports.back();
      std::array<char, 160> line{};
      std::snprintf(line.data(), line.size(),
                    "n=%d dof=%d h=%.3f iter=%.2f eu_h1=%.2e eu_l2=%.2e ew=%.2e ep=%.2e (%.1fs)\n",
                    n, r.dofs, r.h, r.iterations, r.eu_linf_h1, r.eu_l2_l2, r.ew_l2_l2,
                    r.ep_l2_l2, seconds_since(start));
      *options.log << line.data() << std::flush;
    }
  }
  return reports;
}

std::vector<ErrorReport> convergence(const RunConfig& config, const std::filesystem::path& out_dir,
                                     const RunOptions& options) {
  std::vector<ErrorReport> reports = run_convergence(config, options);
  ensure_directory(out_dir);
  write_table(reports, out_dir / "table.csv");
  return reports;
}

SimulationResult run_simulation(const RunConfig& config, const std::filesystem::path& out_dir,
                                const RunOptions& options) {
  const TimeGrid grid = config.time_grid();
  const Mesh mesh = scenario_mesh(config, config.levels.back());
  const SpaceSet spaces(mesh, config.element);
  TransientSolver solver(mesh, spaces, scenario_problem(config), options.threads);
  ensure_directory(out_dir);
  TimeseriesWriter series(out_dir / "timeseries.csv");
  const int width = std::max(4, static_cast<int>(std::to_string(grid.steps).size()));

  SimulationResult result;
  result.kappa = config.model.kappa;
  const auto start = std::chrono::steady_clock::now();
  const Trajectory traj =
      solver.run(grid, [&](int n, const SystemState& s, const NewtonReport& report) {
        const RegionSpeeds speeds = region_mean_speeds(s, mesh, spaces);
        result.speeds.push_back(speeds);
        series.row(n, s.time, report.iterations, speeds);
        if (config.write_vtk) {
          write_vtk(s, mesh, spaces, out_dir / ("state_" + zero_padded(n, width) + ".vtk"));
        }
      });
  result.average_iterations = traj.average_iterations();
  if (options.log != nullptr) {
    std::array<char, 160> line{};
    std::snprintf(line.data(), line.size(),
                  "kappa=%g steps=%d iter=%.2f channel=%.4e matrix=%.4e (%.1fs)\n",
                  config.model.kappa, grid.steps, result.average_iterations,
                  result.speeds.back().channel, result.speeds.back().matrix, seconds_since(start));
    *options.log << line.data() << std::flush;
  }
  return result;
}

std::vector<SimulationResult> simulate(const RunConfig& config,
                                       const std::filesystem::path& out_dir,
                                       const RunOptions& options) {
  if (config.kappa_sweep.empty()) return {run_simulation(config, out_dir, options)};
  std::vector<SimulationResult> results;
  std::string summary = "kappa,mean_speed_channel,mean_speed_matrix,average_iterations\n";
  for (double kappa : config.kappa_sweep) {
    RunConfig run = config;
    run.model.kappa = kappa;
    results.push_back(run_simulation(run, out_dir / kappa_label(kappa), options));
    const SimulationResult& r = results.back();
    std::array<char, 160> line{};
    std::snprintf(line.data(), line.size(), ",%.9e,%.9e,%.4f\n", r.speeds.back().channel,
                  r.speeds.back().matrix, r.average_iterations);
    summary += shortest(kappa) + line.data();
  }
  ensure_directory(out_dir);
  write_text(out_dir / "sweep.csv", summary);
  return results;
}

}  // namespace kvbf::app
