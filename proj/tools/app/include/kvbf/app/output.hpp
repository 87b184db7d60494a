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
#include <fstream>
#include <string>
#include <vector>

#include "kvbf/mesh.hpp"
#include "kvbf/mms.hpp"
#include "kvbf/spaces.hpp"
#include "kvbf/timeloop.hpp"

namespace kvbf::app {

/// Legacy VTK 3.0 ASCII unstructured grid. Point data at mesh vertices:
/// velocity (z = 0), vorticity, pressure; cell data: region (0 matrix,
/// 1 channel). Numbers use the shortest round-trip form with -0 written as 0,
/// so equal states give identical bytes.
std::string vtk_text(const SystemState& state, const Mesh& mesh, const SpaceSet& spaces);
void write_vtk(const SystemState& state, const Mesh& mesh, const SpaceSet& spaces,
               const std::filesystem::path& path);

/// CSV convergence table, one row per level:
/// dof,h,iter,eu_linf_h1,rate,eu_l2_l2,rate,ew_l2_l2,rate,ep_l2_l2,rate
/// Errors as %.2e, rates as %.3f, "--" for the first row.
std::string table_text(const std::vector<ErrorReport>& reports);
void write_table(const std::vector<ErrorReport>& reports, const std::filesystem::path& path);

/// Area-weighted mean of |u_h| over channel and matrix cells; NaN for a
/// region without cells.
struct RegionSpeeds {
  double channel = 0.0;
  double matrix = 0.0;
};
RegionSpeeds region_mean_speeds(const SystemState& state, const Mesh& mesh,
                                const SpaceSet& spaces);

/// timeseries.csv: step,time,iterations,mean_speed_channel,mean_speed_matrix.
/// Rows are flushed as they are written.
class TimeseriesWriter {
 public:
  explicit TimeseriesWriter(const std::filesystem::path& path);
  void row(int step, double time, int iterations, const RegionSpeeds& speeds);

 private:
  std::ofstream out_;
};

/// Throws kvbf::Error when the file cannot be written.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace kvbf::app
