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
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kvbf/assembly.hpp"
#include "kvbf/mesh.hpp"
#include "kvbf/solver.hpp"
#include "kvbf/spaces.hpp"
#include "kvbf/sparse.hpp"
#include "kvbf/types.hpp"

namespace kvbf {

/// Uniform time grid t_n = n * dt, n = 0..steps.
struct TimeGrid {
  double dt = 0.0;
  int steps = 0;

  /// dt must divide T up to 1e-12 relative; throws ConfigError otherwise.
  static TimeGrid from(double final_time, double dt);

  double final_time() const { return steps * dt; }
  double time(int n) const { return n * dt; }
};

enum class InitialMode : std::uint8_t { Interpolate, DiscreteProblem };

std::string_view to_string(InitialMode mode);

/// Continuous problem data.
struct Problem {
  ModelParams params;
  VectorField forcing;             ///< empty means f = 0
  VectorField initial_velocity;    ///< u0(x); empty means u0 = 0
  MatrixField initial_gradient;    ///< grad u0, required by DiscreteProblem
  VectorField boundary_velocity;   ///< Dirichlet data g(x, t); empty means 0
  std::set<BoundaryTag> dirichlet_sides;
  InitialMode initial_mode = InitialMode::Interpolate;
  NewtonOptions newton;

  /// A zero-mean pressure multiplier is needed when velocity is prescribed on
  /// the whole boundary.
  bool needs_pressure_multiplier() const { return dirichlet_sides.size() == 4; }
};

/// Unknown ordering of the global system: [u | w | p | lambda].
struct BlockLayout {
  int n_u = 0;
  int n_w = 0;
  int n_p = 0;
  bool multiplier = false;

  int w_offset() const { return n_u; }
  int p_offset() const { return n_u + n_w; }
  int lambda_offset() const { return n_u + n_w + n_p; }
  int size() const { return n_u + n_w + n_p + (multiplier ? 1 : 0); }
};

struct SystemState {
  double time = 0.0;
  Vector u;
  Vector w;
  Vector p;
  double lambda = 0.0;
};

struct Trajectory {
  std::vector<SystemState> states;   ///< t_0 .. t_N
  std::vector<NewtonReport> reports; ///< one per step (n = 1..N)

  /// Mean Newton iterations per step; 0 for an empty trajectory.
  double average_iterations() const;
};

/// Raised when a step fails; carries the steps completed before it.
class TransientFailure : public SolverError {
 public:
  TransientFailure(const std::string& what, int step, Trajectory partial)
      : SolverError(what), step_(step), partial_(std::move(partial)) {}
  int step() const { return step_; }
  const Trajectory& partial() const { return partial_; }

 private:
  int step_;
  Trajectory partial_;
};

/// Fully discrete backward-Euler scheme for the velocity-vorticity-pressure
/// system. The residual of one step at x = (u, w, p, lambda) is
///
///   u: (M_u + k^2 K_u)(u - u_prev)/dt + M_D u + N(u) + nu C w + B^T p - b
///   w: nu M_w w - nu C^T u
///   p: B u + lambda m
///   l: m^T p
///
/// with N the Forchheimer and skew-symmetric convection terms and b the load.
/// Dirichlet velocity data are imposed on every Newton iterate.
class TransientSolver {
 public:
  TransientSolver(const Mesh& mesh, const SpaceSet& spaces, Problem problem, int threads = 1);

  const BlockLayout& layout() const { return layout_; }
  const LinearBlocks& blocks() const { return blocks_; }
  const Problem& problem() const { return problem_; }
  const Assembler& assembler() const { return assembler_; }
  const std::vector<int>& dirichlet() const { return dirichlet_; }

  /// Initial state at t = 0 in the configured mode. Throws NewtonFailure.
  SystemState initial_state();

  /// One step from prev to prev.time + dt, warm-started from prev.
  std::pair<SystemState, NewtonReport> step(const SystemState& prev, double dt);

  /// Called with (n, state, Newton report of step n); the report is empty for
  /// the initial state n = 0.
  using Observer = std::function<void(int, const SystemState&, const NewtonReport&)>;

  /// Runs all steps of the grid from initial_state(). The observer sees every
  /// state (including the initial one) as it is produced.
  Trajectory run(const TimeGrid& grid, const Observer& observer = {});

  /// L2 projection of curl u onto the vorticity space (M_w w = C^T u).
  Vector project_vorticity(std::span<const double> u);

  /// Full-system residual with velocity operator alpha M_u + beta K_u + M_D
  /// and right-hand side rhs_u (exposed for tests).
  void residual(std::span<const double> x, double alpha, double beta, std::span<const double> rhs_u,
                Vector& r) const;
  /// Matching Jacobian (unconstrained).
  void jacobian(std::span<const double> x, double alpha, double beta, SparseMatrix& j) const;

  Vector pack(const SystemState& s) const;
  SystemState unpack(std::span<const double> x, double time) const;

 private:
  std::pair<SystemState, NewtonReport> advance(const SystemState& prev, double t, double dt);
  std::pair<Vector, NewtonReport> solve(Vector init, double alpha, double beta, const Vector& rhs_u,
                                        double time, const VectorField& boundary);
  void ensure_operator(double alpha, double beta) const;

  const Mesh& mesh_;
  const SpaceSet& spaces_;
  Problem problem_;
  Assembler assembler_;
  LinearBlocks blocks_;
  BlockLayout layout_;
  std::vector<int> dirichlet_;

  SparseMatrix pattern_;          ///< global Jacobian pattern with constant blocks filled
  std::vector<int> vv_positions_; ///< velocity-pattern slot -> global slot

  mutable SparseMatrix velocity_operator_;  ///< alpha M_u + beta K_u + M_D
  mutable double op_alpha_ = -1.0;
  mutable double op_beta_ = -1.0;

  SparseDirectSolver solver_;
  std::optional<SparseDirectSolver> vorticity_solver_;
};

}  // namespace kvbf
