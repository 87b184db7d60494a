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

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "kvbf/assembly.hpp"
#include "kvbf/mesh.hpp"
#include "kvbf/spaces.hpp"
#include "kvbf/timeloop.hpp"

namespace kvbf::app {

enum class ScenarioKind : std::uint8_t { Mms2d, Channel };

std::string_view to_string(ScenarioKind kind);

/// Run configuration. File format (TOML):
///
///   scenario = "mms2d" | "channel"
///   element  = "taylor_hood" | "mini"
///   [model]   rho, nu, kappa, darcy, forchheimer (both regions) or
///             darcy_matrix, darcy_channel, forchheimer_matrix, forchheimer_channel
///   [time]    dt, final_time
///   [mesh]    levels = [n, ...]   (simulate and check use the last level)
///   [newton]  tol, max_iterations
///   [initial] mode = "interpolate" | "discrete_problem"
///   [output]  directory, vtk
///   [sweep]   kappa = [...]       (simulate runs once per value)
///   [channel] inflow, rectangles = [[x0, y0, x1, y1], ...]
///
/// Every key is optional; unknown keys are rejected.
struct RunConfig {
  ScenarioKind scenario = ScenarioKind::Mms2d;
  ElementFamily element = ElementFamily::TaylorHood;
  ModelParams model;
  double dt = 1e-4;
  double final_time = 1e-3;
  std::vector<int> levels = {4, 8, 16, 32, 64};
  double newton_tol = 1e-6;
  int newton_max_iterations = 25;
  InitialMode initial_mode = InitialMode::Interpolate;
  std::string output_directory = "out";
  bool write_vtk = true;
  std::vector<double> kappa_sweep;
  double inflow = 0.2;
  /// Channel network; empty means ChannelNetwork::default_network().
  std::vector<Rectangle> channel_rectangles;

  /// Throws ConfigError on out-of-range values.
  void validate() const;

  TimeGrid time_grid() const { return TimeGrid::from(final_time, dt); }
  NewtonOptions newton() const;
  ChannelNetwork channel_network() const;

  bool operator==(const RunConfig& other) const;
};

/// Parses and validates; throws ConfigError with the offending key.
RunConfig parse_config(std::string_view text);

/// Reads a file and parses it; throws ConfigError when unreadable.
RunConfig load_config(const std::filesystem::path& path);

/// Canonical text form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);

}  // namespace kvbf::app
