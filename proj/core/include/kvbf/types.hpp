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
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace kvbf {

using Vector = std::vector<double>;

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// 2D vector value (velocity, forcing, gradients of scalars).
using Vec2 = std::array<double, 2>;

/// Row-major 2x2 matrix; for a velocity gradient, m[a][b] = d u_a / d x_b.
using Mat2 = std::array<std::array<double, 2>, 2>;

/// Space-time vector field, e.g. f(x, t) or boundary data g(x, t).
using VectorField = std::function<Vec2(Point, double)>;
/// Space-time matrix field, e.g. the velocity gradient of an exact solution.
using MatrixField = std::function<Mat2(Point, double)>;
/// Space-time scalar field.
using ScalarField = std::function<double(Point, double)>;

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-range configuration / parameters.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure in a linear or nonlinear solve.
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace kvbf
