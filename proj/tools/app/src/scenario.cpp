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


#include "kvbf/app/scenario.hpp"

namespace kvbf::app {

Mesh scenario_mesh(const RunConfig& config, int n) {
  switch (config.scenario) {
    case ScenarioKind::Mms2d:
      return build_structured({0.0, 0.0, 1.0, 1.0}, n);
    case ScenarioKind::Channel: {
      const ChannelNetwork network = config.channel_network();
      return tag_channel(build_structured({-1.0, -1.0, 1.0, 1.0}, n),
                         [&network](Point p) { return network.contains(p); });
    }
  }
  throw ConfigError("unknown scenario");
}

std::optional<ExactSolution> scenario_exact(const RunConfig& config) {
  if (config.scenario != ScenarioKind::Mms2d) return std::nullopt;
  return example1_solution();
}

Problem scenario_problem(const RunConfig& config) {
  Problem p;
  p.params = config.model;
  p.initial_mode = config.initial_mode;
  p.newton = config.newton();
  if (config.scenario == ScenarioKind::Mms2d) {
    const ExactSolution ex = example1_solution();
    p.forcing = forcing_from_exact(ex, config.model);
    p.initial_velocity = ex.u;
    p.initial_gradient = ex.grad_u;
    p.boundary_velocity = ex.u;
    p.dirichlet_sides = {BoundaryTag::Left, BoundaryTag::Right, BoundaryTag::Top,
                         BoundaryTag::Bottom};
  } else {
    const double inflow = config.inflow;
    p.boundary_velocity = [inflow](Point, double) { return Vec2{inflow, 0.0}; };
    p.dirichlet_sides = {BoundaryTag::Left};
  }
  return p;
}

}  // namespace kvbf::app
