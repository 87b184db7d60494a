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
#include <vector>

#include "kvbf/assembly.hpp"
#include "kvbf/mesh.hpp"
#include "kvbf/spaces.hpp"
#include "kvbf/timeloop.hpp"
#include "kvbf/types.hpp"

namespace kvbf {

/// Closed-form solution with the derivatives needed to synthesize a forcing.
/// w is the scalar curl d u_2/dx - d u_1/dy.
struct ExactSolution {
  VectorField u;
  MatrixField grad_u;
  VectorField dt_u;
  VectorField dt_laplacian_u;
  ScalarField p;
  VectorField grad_p;
  ScalarField w;
  VectorField grad_w;
};

/// u = e^t (sin(pi x) cos(pi y), -cos(pi x) sin(pi y)),
/// p = e^t cos(pi x) sin(pi y / 2) on the unit square.
ExactSolution example1_solution();

/// f = du/dt - k^2 d(lap u)/dt + D u + F |u|^{rho-2} u + (grad u) u
///     + nu curl(w) + grad p,   curl(w) = (dw/dy, -dw/dx).
/// Needs region-independent D and F; throws ConfigError otherwise.
VectorField forcing_from_exact(const ExactSolution& exact, const ModelParams& params);

/// Errors of one discrete state against the exact solution at its time.
struct StateErrors {
  double u_l2 = 0.0;
  double u_h1 = 0.0;  ///< full H1 norm (L2 part plus gradient seminorm)
  double w_l2 = 0.0;
  double p_l2 = 0.0;
};

/// Errors of one state, integrated with a degree-10 rule.
StateErrors state_errors(const SystemState& state, const ExactSolution& exact, const Mesh& mesh,
                         const SpaceSet& spaces);

struct ErrorReport {
  int dofs = 0;
  double h = 0.0;
  double iterations = 0.0;
  double eu_linf_h1 = 0.0;  ///< max over n = 0..N
  double eu_l2_l2 = 0.0;    ///< sqrt(dt sum_{n=1..N} ||.||^2)
  double ew_l2_l2 = 0.0;
  double ep_l2_l2 = 0.0;
};

/// Discrete-in-time error norms of a complete trajectory.
ErrorReport error_norms(const Trajectory& trajectory, const ExactSolution& exact, const Mesh& mesh,
                        const SpaceSet& spaces, const TimeGrid& grid);

/// Combines per-state errors (index n = 0..N) into the discrete norms.
ErrorReport combine_errors(const std::vector<StateErrors>& per_state, double dt);

/// Observed order between consecutive levels: log(e_i/e_{i+1}) / log(h_i/h_{i+1}).
/// Infinite when either error is zero.
double observed_rate(double e_coarse, double e_fine, double h_coarse, double h_fine);

/// Rates for the four error columns; row 0 is empty (no coarser level).
/// Throws Error when fewer than 2 reports or h is not strictly decreasing.
struct RateRow {
  std::optional<double> eu_linf_h1;
  std::optional<double> eu_l2_l2;
  std::optional<double> ew_l2_l2;
  std::optional<double> ep_l2_l2;
};
std::vector<RateRow> observed_rates(const std::vector<ErrorReport>& reports);

}  // namespace kvbf
