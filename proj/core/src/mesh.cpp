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

#include "kvbf/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>

namespace kvbf {

std::string_view to_string(BoundaryTag tag) {
  switch (tag) {
    case BoundaryTag::Left: return "left";
    case BoundaryTag::Right: return "right";
    case BoundaryTag::Top: return "top";
    case BoundaryTag::Bottom: return "bottom";
  }
  return "unknown";
}

namespace {

Edge sorted_edge(int a, int b) { return a < b ? Edge{a, b} : Edge{b, a}; }

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

}  // namespace

Mesh::Mesh(std::vector<Point> vertices, std::vector<Cell> cells,
           std::vector<BoundaryEdge> boundary_edges, std::vector<Region> cell_region)
    : vertices_(std::move(vertices)),
      cells_(std::move(cells)),
      boundary_edges_(std::move(boundary_edges)),
      cell_region_(std::move(cell_region)) {
  if (cell_region_.size() != cells_.size()) {
    throw Error("mesh: cell_region size does not match number of cells");
  }
  const int nv = n_vertices();
  for (int c = 0; c < n_cells(); ++c) {
    for (int v : cells_[c]) {
      if (v < 0 || v >= nv) throw Error("mesh: cell " + std::to_string(c) + " has invalid vertex");
    }
    if (!(signed_area(c) > 0.0)) {
      throw Error("mesh: cell " + std::to_string(c) + " is not counter-clockwise");
    }
  }

  std::map<Edge, int> edge_index;
  cell_edges_.resize(cells_.size());
  for (int c = 0; c < n_cells(); ++c) {
    const Cell& cell = cells_[c];
    for (int e = 0; e < 3; ++e) {
      const Edge key = sorted_edge(cell[(e + 1) % 3], cell[(e + 2) % 3]);
      auto [it, inserted] = edge_index.emplace(key, n_edges());
      if (inserted) {
        edges_.push_back(key);
        edge_cell_count_.push_back(0);
      }
      cell_edges_[c][e] = it->second;
      if (++edge_cell_count_[it->second] > 2) {
        throw Error("mesh: edge shared by more than two cells (non-conforming)");
      }
    }
  }

  int n_single = 0;
  for (int count : edge_cell_count_) n_single += (count == 1);
  for (const BoundaryEdge& be : boundary_edges_) {
    auto it = edge_index.find(sorted_edge(be.vertices[0], be.vertices[1]));
    if (it == edge_index.end() || edge_cell_count_[it->second] != 1) {
      throw Error("mesh: boundary edge does not belong to exactly one cell");
    }
  }
  if (n_single != static_cast<int>(boundary_edges_.size())) {
    throw Error("mesh: untagged boundary edges");
  }
}

std::array<Point, 3> Mesh::cell_vertices(int c) const {
  const Cell& cell = cells_[c];
  return {vertices_[cell[0]], vertices_[cell[1]], vertices_[cell[2]]};
}

double Mesh::signed_area(int c) const {
  const auto [a, b, d] = cell_vertices(c);
  return 0.5 * ((b.x - a.x) * (d.y - a.y) - (d.x - a.x) * (b.y - a.y));
}

Point Mesh::centroid(int c) const {
  const auto [a, b, d] = cell_vertices(c);
  return {(a.x + b.x + d.x) / 3.0, (a.y + b.y + d.y) / 3.0};
}

Mesh Mesh::with_regions(std::vector<Region> cell_region) const {
  if (cell_region.size() != cells_.size()) {
    throw Error("mesh: cell_region size does not match number of cells");
  }
  Mesh copy = *this;
  copy.cell_region_ = std::move(cell_region);
  return copy;
}

Mesh build_structured(const Rectangle& rect, int n) {
  if (n < 1) throw Error("build_structured: need n >= 1");
  if (!(rect.x1 > rect.x0) || !(rect.y1 > rect.y0)) {
    throw Error("build_structured: degenerate rectangle");
  }
  const int stride = n + 1;
  auto id = [stride](int i, int j) { return j * stride + i; };

  std::vector<Point> vertices;
  vertices.reserve(static_cast<std::size_t>(stride) * stride);
  const double hx = (rect.x1 - rect.x0) / n;
  const double hy = (rect.y1 - rect.y0) / n;
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      // Pin the last row/column to the exact rectangle bounds.
      const double x = i == n ? rect.x1 : rect.x0 + i * hx;
      const double y = j == n ? rect.y1 : rect.y0 + j * hy;
      vertices.push_back({x, y});
    }
  }

  std::vector<Cell> cells;
  cells.reserve(2 * static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int v00 = id(i, j), v10 = id(i + 1, j), v11 = id(i + 1, j + 1), v01 = id(i, j + 1);
      cells.push_back({v00, v10, v11});
      cells.push_back({v00, v11, v01});
    }
  }

  std::vector<BoundaryEdge> boundary;
  boundary.reserve(4 * static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    boundary.push_back({{id(i, 0), id(i + 1, 0)}, BoundaryTag::Bottom});
    boundary.push_back({{id(n, i), id(n, i + 1)}, BoundaryTag::Right});
    boundary.push_back({{id(i + 1, n), id(i, n)}, BoundaryTag::Top});
    boundary.push_back({{id(0, i + 1), id(0, i)}, BoundaryTag::Left});
  }

  std::vector<Region> regions(cells.size(), Region::Matrix);
  return Mesh(std::move(vertices), std::move(cells), std::move(boundary), std::move(regions));
}

Mesh tag_channel(const Mesh& mesh, const std::function<bool(Point)>& indicator) {
  std::vector<Region> regions(mesh.n_cells());
  for (int c = 0; c < mesh.n_cells(); ++c) {
    regions[c] = indicator(mesh.centroid(c)) ? Region::Channel : Region::Matrix;
  }
  return mesh.with_regions(std::move(regions));
}

double mesh_size(const Mesh& mesh) {
  if (mesh.n_cells() == 0) throw Error("mesh_size: empty mesh");
  double h = 0.0;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const auto p = mesh.cell_vertices(c);
    h = std::max({h, distance(p[0], p[1]), distance(p[1], p[2]), distance(p[2], p[0])});
  }
  return h;
}

bool ChannelNetwork::contains(Point p) const {
  return std::any_of(rectangles.begin(), rectangles.end(),
                     [p](const Rectangle& r) { return r.contains(p); });
}

ChannelNetwork ChannelNetwork::default_network() {
  return ChannelNetwork{{
      {-1.0, -0.1, 1.0, 0.1},
      {-0.55, -1.0, -0.45, 1.0},
      {0.45, -1.0, 0.55, 1.0},
  }};
}

}  // namespace kvbf
