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

#include <optional>

#include "kvbf/app/config.hpp"
#include "kvbf/mesh.hpp"
#include "kvbf/mms.hpp"
#include "kvbf/timeloop.hpp"

namespace kvbf::app {

/// mms2d: unit square, structured n x n.
/// channel: (-1,1)^2, structured n x n, cells tagged by the channel network.
Mesh scenario_mesh(const RunConfig& config, int n);

/// Manufactured solution of the mms2d scenario; empty for channel.
std::optional<ExactSolution> scenario_exact(const RunConfig& config);

/// mms2d: forcing and Dirichlet data from the manufactured solution on all
/// four sides. channel: f = 0, zero initial velocity, u = (inflow, 0) on the
/// left side and natural conditions elsewhere.
Problem scenario_problem(const RunConfig& config);

}  // namespace kvbf::app
