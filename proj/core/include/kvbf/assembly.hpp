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
#include <span>
#include <vector>

#include "kvbf/mesh.hpp"
#include "kvbf/spaces.hpp"
#include "kvbf/sparse.hpp"
#include "kvbf/types.hpp"

namespace kvbf {

/// Piecewise-constant coefficient, one value per region.
struct RegionValues {
  double matrix = 1.0;
  double channel = 1.0;

  static RegionValues uniform(double v) { return {v, v}; }
  double operator()(Region r) const { return r == Region::Channel ? channel : matrix; }
  bool is_uniform() const { return matrix == channel; }
};

/// Model coefficients: Forchheimer exponent rho, Brinkman coefficient nu,
/// elasticity length scale kappa, Darcy D and Forchheimer F per region.
struct ModelParams {
  double rho = 3.0;
  double nu = 1.0;
  double kappa = 1.0;
  RegionValues darcy = RegionValues::uniform(1.0);
  RegionValues forchheimer = RegionValues::uniform(10.0);

  /// rho in [3,4], nu > 0, kappa > 0, D > 0, F > 0; throws ConfigError.
  void validate() const;
};

/// Linear operator blocks of the weak form.
///
///   mass_u      M_u[i,j]   = (phi_j, phi_i)
///   stiffness_u K_u[i,j]   = (grad phi_j, grad phi_i)
///   darcy_u     M_D[i,j]   = (D phi_j, phi_i)
///   mass_w      M_w[i,j]   = (psi_j, psi_i)
///   coupling    C[i,j]     = (psi_j, curl phi_i)        n_u x n_w
///   divergence  B[i,j]     = -(q_i, div phi_j)          n_p x n_u
///   mean        m[i]       = (q_i, 1)
///
/// The four velocity-velocity matrices share one sparsity pattern (every pair
/// of velocity dofs sharing a cell, both components).
struct LinearBlocks {
  SparseMatrix mass_u;
  SparseMatrix stiffness_u;
  SparseMatrix darcy_u;
  SparseMatrix mass_w;
  SparseMatrix coupling;
  SparseMatrix divergence;
  Vector mean;
};

enum class NonlinearTerm : std::uint8_t {
  Forchheimer = 1,
  Convection = 2,
  Both = 3,
};

/// Cell-loop assembler bound to one mesh, space set and parameter set.
///
/// Nonlinear assembly computes cell contributions (optionally on several
/// threads) into per-cell buffers and scatters them in cell-index order, so
/// the output is bit-identical for any thread count.
class Assembler {
 public:
  Assembler(const Mesh& mesh, const SpaceSet& spaces, const ModelParams& params, int threads = 1);

  const Mesh& mesh() const { return mesh_; }
  const SpaceSet& spaces() const { return spaces_; }
  const ModelParams& params() const { return params_; }

  LinearBlocks linear_blocks() const;

  /// Zero matrix with the velocity-velocity pattern.
  const SparseMatrix& velocity_pattern() const { return vv_pattern_; }

  /// Residual of the selected nonlinear terms at u (overwrites `residual`)
  /// and, when `jacobian` is non-null, its derivative (overwrites values;
  /// must carry the velocity pattern).
  ///   Forchheimer: F (|u|^{rho-2} u, v)
  ///   Convection:  ((grad u) u, v) + 1/2 (div(u) u, v)
  void nonlinear(std::span<const double> u, NonlinearTerm terms, Vector& residual,
                 SparseMatrix* jacobian) const;

  /// (f(., t), phi_i) with a degree-8 rule.
  Vector load(const VectorField& f, double t) const;

  /// (G(., t), grad phi_i) with a degree-8 rule.
  Vector gradient_load(const MatrixField& g, double t) const;

  /// Right-hand side of the stationary initial-data problem:
  /// (1 + nu)(grad u0, grad v) + (D u0 + F |u0|^{rho-2} u0 + (grad u0) u0, v).
  Vector initial_problem_rhs(const VectorField& u0, const MatrixField& grad_u0, double t) const;

 private:
  void gather_velocity(int cell, std::span<const double> u, std::span<double> local) const;

  const Mesh& mesh_;
  const SpaceSet& spaces_;
  ModelParams params_;
  int threads_;
  std::vector<CellGeometry> geometry_;
  BasisTable velocity_table_;
  BasisTable scalar_table_;
  SparseMatrix vv_pattern_;
  int n_local_u_ = 0;
  std::vector<int> vv_positions_;  ///< [cell][i * n_local_u + j] -> CSR slot
};

LinearBlocks assemble_linear_blocks(const Mesh& mesh, const SpaceSet& spaces,
                                    const ModelParams& params);

struct NonlinearContribution {
  Vector residual;
  SparseMatrix jacobian;
};

/// Forchheimer term; the (rho-2)|u|^{rho-4} u (x) u Jacobian part is taken as 0
/// where |u| < 1e-12.
NonlinearContribution assemble_forchheimer(const Mesh& mesh, const SpaceSet& spaces,
                                           const ModelParams& params, std::span<const double> u);

/// Skew-symmetric convection c_h(u)(u, .) and its derivative in u.
NonlinearContribution assemble_convection(const Mesh& mesh, const SpaceSet& spaces,
                                          std::span<const double> u);

Vector assemble_load(const Mesh& mesh, const SpaceSet& spaces, const VectorField& f, double t);

/// Symmetric elimination of Dirichlet rows/columns:
/// rhs -= A[:, dofs] * values; constrained rows and columns zeroed with unit
/// diagonal; rhs[dof] = value. Throws on an out-of-range dof or a missing
/// diagonal entry.
void apply_dirichlet(SparseMatrix& a, Vector& rhs, std::span<const int> dofs,
                     std::span<const double> values);

}  // namespace kvbf
