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

#include <random>

#include "kvbf/mesh.hpp"
#include "kvbf/types.hpp"

namespace kvbf::testing {

/// The triangle (0,0), (2,0), (0.5,1.5) as a one-cell mesh.
inline Mesh single_cell_mesh() {
  return Mesh({{0.0, 0.0}, {2.0, 0.0}, {0.5, 1.5}}, {{0, 1, 2}},
              {{{0, 1}, BoundaryTag::Bottom}, {{1, 2}, BoundaryTag::Right},
               {{2, 0}, BoundaryTag::Left}},
              {Region::Matrix});
}

inline Vector random_vector(std::size_t n, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> dist(-scale, scale);
  Vector v(n);
  for (double& x : v) x = dist(rng);
  return v;
}

}  // namespace kvbf::testing
