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

#include <array>
#include <vector>

#include "kvbf/types.hpp"

namespace kvbf {

/// Symmetric rule on the reference triangle (0,0), (1,0), (0,1).
///
/// Points are barycentric triples (l0, l1, l2); the reference coordinates are
/// (xi, eta) = (l1, l2). Weights sum to the reference area 1/2.
struct QuadratureRule {
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;
  int degree = 0;

  int size() const { return static_cast<int>(weights.size()); }
};

inline constexpr int kMaxQuadratureDegree = 10;

/// Positive-weight rule exact for total degree >= d, 1 <= d <= 10.
/// The returned rule's `degree` may exceed d (degrees 3 and 7 are served by
/// the positive degree-4 and degree-8 rules).
const QuadratureRule& rule_for_degree(int d);

struct MappedQuadrature {
  std::vector<Point> points;
  std::vector<double> weights;
};

/// Affine image of `rule` on a triangle; weights scaled by |det J| = 2 * area.
MappedQuadrature map_to_cell(const QuadratureRule& rule, const std::array<Point, 3>& cell);

}  // namespace kvbf
