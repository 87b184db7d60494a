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

#include "kvbf/spaces.hpp"

#include <algorithm>

namespace kvbf {

std::string_view to_string(ElementFamily family) {
  switch (family) {
    case ElementFamily::TaylorHood: return "taylor_hood";
    case ElementFamily::Mini: return "mini";
  }
  return "unknown";
}

int local_dimension(ScalarKind kind) {
  switch (kind) {
    case ScalarKind::P1: return 3;
    case ScalarKind::P2: return 6;
    case ScalarKind::P1Bubble: return 4;
  }
  return 0;
}

namespace {

constexpr std::array<Vec2, 3> kBaryGrad = {Vec2{-1.0, -1.0}, Vec2{1.0, 0.0}, Vec2{0.0, 1.0}};

}  // namespace

void basis_values(ScalarKind kind, const std::array<double, 3>& l, std::span<double> out) {
  switch (kind) {
    case ScalarKind::P1:
      out[0] = l[0];
      out[1] = l[1];
      out[2] = l[2];
      break;
    case ScalarKind::P2:
      for (int i = 0; i < 3; ++i) out[i] = l[i] * (2.0 * l[i] - 1.0);
      for (int e = 0; e < 3; ++e) out[3 + e] = 4.0 * l[(e + 1) % 3] * l[(e + 2) % 3];
      break;
    case ScalarKind::P1Bubble:
      out[0] = l[0];
      out[1] = l[1];
      out[2] = l[2];
      out[3] = 27.0 * l[0] * l[1] * l[2];
      break;
  }
}

void basis_reference_gradients(ScalarKind kind, const std::array<double, 3>& l,
                               std::span<Vec2> out) {
  auto scaled = [](const Vec2& g, double s) { return Vec2{g[0] * s, g[1] * s}; };
  switch (kind) {
    case ScalarKind::P1:
      for (int i = 0; i < 3; ++i) out[i] = kBaryGrad[i];
      break;
    case ScalarKind::P2:
      for (int i = 0; i < 3; ++i) out[i] = scaled(kBaryGrad[i], 4.0 * l[i] - 1.0);
      for (int e = 0; e < 3; ++e) {
        const int a = (e + 1) % 3, b = (e + 2) % 3;
        out[3 + e] = {4.0 * (l[b] * kBaryGrad[a][0] + l[a] * kBaryGrad[b][0]),
                      4.0 * (l[b] * kBaryGrad[a][1] + l[a] * kBaryGrad[b][1])};
      }
      break;
    case ScalarKind::P1Bubble: {
      for (int i = 0; i < 3; ++i) out[i] = kBaryGrad[i];
      Vec2 g{0.0, 0.0};
      for (int i = 0; i < 3; ++i) {
        const double w = 27.0 * l[(i + 1) % 3] * l[(i + 2) % 3];
        g[0] += w * kBaryGrad[i][0];
        g[1] += w * kBaryGrad[i][1];
      }
      out[3] = g;
      break;
    }
  }
}

CellGeometry::CellGeometry(const std::array<Point, 3>& v) : vertices(v) {
  const double j00 = v[1].x - v[0].x, j01 = v[2].x - v[0].x;
  const double j10 = v[1].y - v[0].y, j11 = v[2].y - v[0].y;
  det = j00 * j11 - j01 * j10;
  if (det == 0.0) throw Error("CellGeometry: degenerate cell");
  inv_jac_t = {{{j11 / det, -j10 / det}, {-j01 / det, j00 / det}}};
}

Point CellGeometry::map(const std::array<double, 3>& l) const {
  return {l[0] * vertices[0].x + l[1] * vertices[1].x + l[2] * vertices[2].x,
          l[0] * vertices[0].y + l[1] * vertices[1].y + l[2] * vertices[2].y};
}

BasisTable::BasisTable(ScalarKind k, const QuadratureRule& rule)
    : kind(k), n_local(local_dimension(k)), n_points(rule.size()) {
  values.resize(static_cast<std::size_t>(n_points) * n_local);
  ref_grads.resize(values.size());
  for (int q = 0; q < n_points; ++q) {
    basis_values(kind, rule.points[q], std::span(values).subspan(q * n_local, n_local));
    basis_reference_gradients(kind, rule.points[q],
                              std::span(ref_grads).subspan(q * n_local, n_local));
  }
}

namespace {

ScalarSpace build_p1(const Mesh& mesh) {
  ScalarSpace s;
  s.kind = ScalarKind::P1;
  s.n_dofs = mesh.n_vertices();
  s.first_bubble = s.n_dofs;
  s.dofs_per_cell = 3;
  s.nodes.assign(mesh.vertices().begin(), mesh.vertices().end());
  s.cell_dofs.reserve(3 * static_cast<std::size_t>(mesh.n_cells()));
  for (const Cell& c : mesh.cells()) s.cell_dofs.insert(s.cell_dofs.end(), c.begin(), c.end());
  return s;
}

ScalarSpace build_p2(const Mesh& mesh) {
  ScalarSpace s;
  s.kind = ScalarKind::P2;
  const int nv = mesh.n_vertices();
  s.n_dofs = nv + mesh.n_edges();
  s.first_bubble = s.n_dofs;
  s.dofs_per_cell = 6;
  s.nodes.assign(mesh.vertices().begin(), mesh.vertices().end());
  for (const Edge& e : mesh.edges()) {
    const Point a = mesh.vertex(e[0]), b = mesh.vertex(e[1]);
    s.nodes.push_back({0.5 * (a.x + b.x), 0.5 * (a.y + b.y)});
  }
  s.cell_dofs.reserve(6 * static_cast<std::size_t>(mesh.n_cells()));
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const Cell& cell = mesh.cell(c);
    s.cell_dofs.insert(s.cell_dofs.end(), cell.begin(), cell.end());
    for (int e : mesh.cell_edges(c)) s.cell_dofs.push_back(nv + e);
  }
  return s;
}

ScalarSpace build_p1_bubble(const Mesh& mesh) {
  ScalarSpace s;
  s.kind = ScalarKind::P1Bubble;
  const int nv = mesh.n_vertices();
  s.n_dofs = nv + mesh.n_cells();
  s.first_bubble = nv;
  s.dofs_per_cell = 4;
  s.nodes.assign(mesh.vertices().begin(), mesh.vertices().end());
  for (int c = 0; c < mesh.n_cells(); ++c) s.nodes.push_back(mesh.centroid(c));
  s.cell_dofs.reserve(4 * static_cast<std::size_t>(mesh.n_cells()));
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const Cell& cell = mesh.cell(c);
    s.cell_dofs.insert(s.cell_dofs.end(), cell.begin(), cell.end());
    s.cell_dofs.push_back(nv + c);
  }
  return s;
}

}  // namespace

SpaceSet::SpaceSet(const Mesh& mesh, ElementFamily family)
    : family_(family),
      velocity_(family == ElementFamily::TaylorHood ? build_p2(mesh) : build_p1_bubble(mesh)),
      vorticity_(build_p1(mesh)),
      pressure_(build_p1(mesh)) {}

SpaceSet build_spaces(const Mesh& mesh, ElementFamily family) { return SpaceSet(mesh, family); }

std::vector<int> dirichlet_dofs(const Mesh& mesh, const SpaceSet& spaces,
                                const std::set<BoundaryTag>& tags) {
  const ScalarSpace& v = spaces.velocity();
  std::vector<char> on_boundary(v.n_dofs, 0);
  const bool has_edge_nodes = v.kind == ScalarKind::P2;

  for (const BoundaryEdge& be : mesh.boundary_edges()) {
    if (!tags.contains(be.tag)) continue;
    on_boundary[be.vertices[0]] = 1;
    on_boundary[be.vertices[1]] = 1;
  }
  // P2 midpoint nodes of tagged boundary edges.
  if (has_edge_nodes) {
    const int nv = mesh.n_vertices();
    std::set<Edge> tagged;
    for (const BoundaryEdge& be : mesh.boundary_edges()) {
      if (!tags.contains(be.tag)) continue;
      tagged.insert(be.vertices[0] < be.vertices[1] ? be.vertices
                                                    : Edge{be.vertices[1], be.vertices[0]});
    }
    for (int e = 0; e < mesh.n_edges(); ++e) {
      if (mesh.edge_cell_count(e) == 1 && tagged.contains(mesh.edges()[e])) on_boundary[nv + e] = 1;
    }
  }

  std::vector<int> dofs;
  for (int node = 0; node < v.n_dofs; ++node) {
    if (!on_boundary[node]) continue;
    dofs.push_back(SpaceSet::velocity_dof(node, 0));
    dofs.push_back(SpaceSet::velocity_dof(node, 1));
  }
  return dofs;
}

Vector interpolate_velocity(const SpaceSet& spaces, const VectorField& field, double t) {
  const ScalarSpace& v = spaces.velocity();
  Vector out(spaces.n_u(), 0.0);
  for (int node = 0; node < v.first_bubble; ++node) {
    const Vec2 val = field(v.nodes[node], t);
    out[SpaceSet::velocity_dof(node, 0)] = val[0];
    out[SpaceSet::velocity_dof(node, 1)] = val[1];
  }
  return out;
}

Vector interpolate_scalar(const ScalarSpace& space, const ScalarField& field, double t) {
  Vector out(space.n_dofs, 0.0);
  for (int node = 0; node < space.first_bubble; ++node) out[node] = field(space.nodes[node], t);
  return out;
}

double evaluate_scalar(const ScalarSpace& space, std::span<const double> coeffs, int cell,
                       const std::array<double, 3>& bary) {
  std::array<double, 6> phi{};
  basis_values(space.kind, bary, phi);
  const auto dofs = space.dofs(cell);
  double value = 0.0;
  for (std::size_t i = 0; i < dofs.size(); ++i) value += coeffs[dofs[i]] * phi[i];
  return value;
}

Vec2 evaluate_velocity(const SpaceSet& spaces, std::span<const double> coeffs, int cell,
                       const std::array<double, 3>& bary) {
  const ScalarSpace& v = spaces.velocity();
  std::array<double, 6> phi{};
  basis_values(v.kind, bary, phi);
  const auto dofs = v.dofs(cell);
  Vec2 value{0.0, 0.0};
  for (std::size_t i = 0; i < dofs.size(); ++i) {
    value[0] += coeffs[SpaceSet::velocity_dof(dofs[i], 0)] * phi[i];
    value[1] += coeffs[SpaceSet::velocity_dof(dofs[i], 1)] * phi[i];
  }
  return value;
}

}  // namespace kvbf
