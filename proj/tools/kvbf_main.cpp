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


// kvbf <convergence|simulate|check> <config.toml> [--out DIR]
//
// Exit codes: 0 success, 1 configuration or I/O error, 2 solver failure,
// 3 property check failure.

#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "kvbf/app/checks.hpp"
#include "kvbf/app/config.hpp"
#include "kvbf/app/drivers.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitSolver = 2;
constexpr int kExitCheck = 3;

int run_checks(const kvbf::app::RunConfig& config, int threads) {
  const auto results = kvbf::app::run_property_checks(config.model, threads);
  bool all = true;
  for (const auto& r : results) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << "\n";
    all = all && r.passed;
  }
  std::cout << (all ? "all checks passed" : "some checks failed") << std::endl;
  return all ? 0 : kExitCheck;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mixed finite element solver for Kelvin-Voigt-Brinkman-Forchheimer flow"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_dir;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", config_path, "Run configuration (TOML)")->required();
    sub->add_option("--out", out_dir, "Output directory (overrides output.directory)");
  };
  CLI::App* conv = app.add_subcommand("convergence", "Run the mesh ladder and write table.csv");
  CLI::App* sim = app.add_subcommand("simulate", "Run one transient; write VTK and timeseries.csv");
  CLI::App* check = app.add_subcommand("check", "Run the invariant and property suite");
  for (CLI::App* sub : {conv, sim, check}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  kvbf::app::RunConfig config;
  kvbf::app::RunOptions options;
  try {
    config = kvbf::app::load_config(config_path);
    if (!out_dir.empty()) config.output_directory = out_dir;
    options.threads = kvbf::app::threads_from_environment();
  } catch (const kvbf::Error& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return kExitConfig;
  }
  options.log = &std::cout;

  try {
    if (check->parsed()) return run_checks(config, options.threads);
    if (conv->parsed()) {
      const auto reports = kvbf::app::convergence(config, config.output_directory, options);
      std::cout << "wrote " << config.output_directory << "/table.csv (" << reports.size()
                << " levels)" << std::endl;
    } else {
      kvbf::app::simulate(config, config.output_directory, options);
      std::cout << "wrote " << config.output_directory << std::endl;
    }
  } catch (const kvbf::ConfigError& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return kExitConfig;
  } catch (const kvbf::SolverError& e) {
    std::cerr << "solver failure: " << e.what() << std::endl;
    return kExitSolver;
  } catch (const kvbf::Error& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return kExitConfig;
  }
  return 0;
}
