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
#include <cstdint>
#include <functional>
#include <set>
#include <span>
#include <string_view>
#include <vector>

#include "kvbf/mesh.hpp"
#include "kvbf/quadrature.hpp"
#include "kvbf/types.hpp"

namespace kvbf {

/// Velocity/pressure/vorticity element triple.
///   TaylorHood: velocity P2^2, pressure P1, vorticity P1.
///   Mini:       velocity (P1 + cubic bubble)^2, pressure P1, vorticity P1.
enum class ElementFamily : std::uint8_t { TaylorHood, Mini };

std::string_view to_string(ElementFamily family);

/// Scalar Lagrange-type element on a triangle.
enum class ScalarKind : std::uint8_t { P1, P2, P1Bubble };

/// Local basis size: 3 (P1), 6 (P2), 4 (P1Bubble).
int local_dimension(ScalarKind kind);

/// Basis values at a barycentric point. Local order: vertices 0..2, then
/// P2 edge functions 4*l_a*l_b for the edges opposite vertices 0..2, or the
/// bubble 27*l0*l1*l2.
void basis_values(ScalarKind kind, const std::array<double, 3>& bary, std::span<double> out);

/// Gradients with respect to the reference coordinates (xi, eta) = (l1, l2).
void basis_reference_gradients(ScalarKind kind, const std::array<double, 3>& bary,
                               std::span<Vec2> out);

/// Affine map data for one cell.
struct CellGeometry {
  std::array<Point, 3> vertices;
  double det = 0.0;      ///< det of the reference-to-physical Jacobian (2 * area)
  Mat2 inv_jac_t{};      ///< J^{-T}: physical gradient = J^{-T} * reference gradient

  explicit CellGeometry(const std::array<Point, 3>& v);

  double area() const { return 0.5 * det; }
  Point map(const std::array<double, 3>& bary) const;
  Vec2 physical_gradient(const Vec2& ref) const {
    return {inv_jac_t[0][0] * ref[0] + inv_jac_t[0][1] * ref[1],
            inv_jac_t[1][0] * ref[0] + inv_jac_t[1][1] * ref[1]};
  }
};

/// Basis values and reference gradients tabulated at a quadrature rule.
struct BasisTable {
  ScalarKind kind = ScalarKind::P1;
  int n_local = 0;
  int n_points = 0;
  std::vector<double> values;    ///< [q * n_local + i]
  std::vector<Vec2> ref_grads;   ///< [q * n_local + i]

  BasisTable() = default;
  BasisTable(ScalarKind kind, const QuadratureRule& rule);

  double value(int q, int i) const { return values[q * n_local + i]; }
  const Vec2& ref_grad(int q, int i) const { return ref_grads[q * n_local + i]; }
};

/// Continuous scalar space with its cell -> global dof map.
struct ScalarSpace {
  ScalarKind kind = ScalarKind::P1;
  int n_dofs = 0;
  int dofs_per_cell = 0;
  std::vector<int> cell_dofs;  ///< [cell * dofs_per_cell + local]
  std::vector<Point> nodes;    ///< nodal coordinates; bubbles sit at the centroid
  int first_bubble = 0;        ///< dofs >= first_bubble are interior bubbles

  std::span<const int> dofs(int cell) const {
    return {cell_dofs.data() + static_cast<std::size_t>(cell) * dofs_per_cell,
            static_cast<std::size_t>(dofs_per_cell)};
  }
  bool is_bubble(int dof) const { return dof >= first_bubble; }
};

/// Velocity, vorticity and pressure spaces on one mesh.
///
/// Velocity dofs interleave components: global index 2 * node + component,
/// where node indexes the scalar velocity space.
class SpaceSet {
 public:
  SpaceSet(const Mesh& mesh, ElementFamily family);

  ElementFamily family() const { return family_; }
  const ScalarSpace& velocity() const { return velocity_; }
  const ScalarSpace& vorticity() const { return vorticity_; }
  const ScalarSpace& pressure() const { return pressure_; }

  int n_u() const { return 2 * velocity_.n_dofs; }
  int n_w() const { return vorticity_.n_dofs; }
  int n_p() const { return pressure_.n_dofs; }
  /// n_u + n_w + n_p (the pressure-mean multiplier is not counted).
  int total_dofs() const { return n_u() + n_w() + n_p(); }

  static int velocity_dof(int node, int component) { return 2 * node + component; }

 private:
  ElementFamily family_;
  ScalarSpace velocity_;
  ScalarSpace vorticity_;
  ScalarSpace pressure_;
};

SpaceSet build_spaces(const Mesh& mesh, ElementFamily family);

/// Velocity dofs (both components) whose nodes lie on edges with one of `tags`.
/// Sorted ascending. Bubble dofs are never included.
std::vector<int> dirichlet_dofs(const Mesh& mesh, const SpaceSet& spaces,
                                const std::set<BoundaryTag>& tags);

/// Nodal interpolant of a velocity field at time t (bubble coefficients 0).
Vector interpolate_velocity(const SpaceSet& spaces, const VectorField& field, double t = 0.0);

/// Nodal interpolant in a scalar space.
Vector interpolate_scalar(const ScalarSpace& space, const ScalarField& field, double t = 0.0);

/// Evaluates a finite element function of `space` with coefficients `coeffs`
/// on `cell` at a barycentric point.
double evaluate_scalar(const ScalarSpace& space, std::span<const double> coeffs, int cell,
                       const std::array<double, 3>& bary);
Vec2 evaluate_velocity(const SpaceSet& spaces, std::span<const double> coeffs, int cell,
                       const std::array<double, 3>& bary);

}  // namespace kvbf
