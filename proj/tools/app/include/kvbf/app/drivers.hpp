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


#pragma once

#include <filesystem>
#include <ostream>
#include <vector>

#include "kvbf/app/config.hpp"
#include "kvbf/app/output.hpp"
#include "kvbf/mms.hpp"

namespace kvbf::app {

struct RunOptions {
  int threads = 1;
  std::ostream* log = nullptr;  ///< progress lines; null for silence
};

/// Error reports for every mesh level of an mms2d configuration.
/// Throws ConfigError for other scenarios and SolverError on failure.
std::vector<ErrorReport> run_convergence(const RunConfig& config, const RunOptions& options);

/// run_convergence plus table.csv in out_dir.
std::vector<ErrorReport> convergence(const RunConfig& config, const std::filesystem::path& out_dir,
                                     const RunOptions& options);

struct SimulationResult {
  double kappa = 0.0;
  double average_iterations = 0.0;
  std::vector<RegionSpeeds> speeds;  ///< n = 0..N
};

/// One transient on the finest configured level. Writes state_NNNN.vtk for
/// n = 0..N (when enabled) and timeseries.csv into out_dir.
SimulationResult run_simulation(const RunConfig& config, const std::filesystem::path& out_dir,
                                const RunOptions& options);

/// run_simulation for each sweep value of kappa in out_dir/kappa_<value>,
/// plus sweep.csv summarizing the final mean speeds. Without a sweep this is a
/// single run_simulation in out_dir.
std::vector<SimulationResult> simulate(const RunConfig& config,
                                       const std::filesystem::path& out_dir,
                                       const RunOptions& options);

/// Number of worker threads from KVBF_THREADS (default 1); throws ConfigError
/// on a malformed value.
int threads_from_environment();

}  // namespace kvbf::app
