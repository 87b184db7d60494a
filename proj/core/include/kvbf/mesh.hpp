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
#include <span>
#include <string_view>
#include <vector>

#include "kvbf/types.hpp"

namespace kvbf {

enum class BoundaryTag : std::uint8_t { Left, Right, Top, Bottom };
enum class Region : std::uint8_t { Matrix, Channel };

std::string_view to_string(BoundaryTag tag);

/// Axis-aligned rectangle [x0, x1] x [y0, y1].
struct Rectangle {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 1.0;
  double y1 = 1.0;

  double area() const { return (x1 - x0) * (y1 - y0); }
  bool contains(Point p) const { return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1; }
};

using Cell = std::array<int, 3>;
using Edge = std::array<int, 2>;

struct BoundaryEdge {
  Edge vertices;
  BoundaryTag tag;
};

/// Conforming triangulation with boundary tags and per-cell region tags.
///
/// Cells are counter-clockwise. Local edge e of a cell joins local vertices
/// (e+1)%3 and (e+2)%3, i.e. it is the edge opposite vertex e. The edge list is
/// numbered in order of first appearance while walking cells in index order.
class Mesh {
 public:
  Mesh() = default;

  /// Validates orientation and conformity; throws kvbf::Error on violation.
  Mesh(std::vector<Point> vertices, std::vector<Cell> cells,
       std::vector<BoundaryEdge> boundary_edges, std::vector<Region> cell_region);

  int n_vertices() const { return static_cast<int>(vertices_.size()); }
  int n_cells() const { return static_cast<int>(cells_.size()); }
  int n_edges() const { return static_cast<int>(edges_.size()); }

  std::span<const Point> vertices() const { return vertices_; }
  std::span<const Cell> cells() const { return cells_; }
  std::span<const Edge> edges() const { return edges_; }
  std::span<const BoundaryEdge> boundary_edges() const { return boundary_edges_; }
  std::span<const Region> cell_regions() const { return cell_region_; }

  const Point& vertex(int v) const { return vertices_[v]; }
  const Cell& cell(int c) const { return cells_[c]; }
  Region region(int c) const { return cell_region_[c]; }
  /// Global edge indices of the three local edges of cell c.
  const std::array<int, 3>& cell_edges(int c) const { return cell_edges_[c]; }
  /// Number of cells adjacent to edge e (1 on the boundary, 2 inside).
  int edge_cell_count(int e) const { return edge_cell_count_[e]; }

  std::array<Point, 3> cell_vertices(int c) const;
  double signed_area(int c) const;
  Point centroid(int c) const;

  /// Returns a copy with new per-cell regions (geometry unchanged).
  Mesh with_regions(std::vector<Region> cell_region) const;

 private:
  std::vector<Point> vertices_;
  std::vector<Cell> cells_;
  std::vector<BoundaryEdge> boundary_edges_;
  std::vector<Region> cell_region_;
  std::vector<Edge> edges_;
  std::vector<std::array<int, 3>> cell_edges_;
  std::vector<int> edge_cell_count_;
};

/// (n+1)^2 vertices, 2n^2 cells; each grid square is cut along its
/// lower-left to upper-right diagonal.
Mesh build_structured(const Rectangle& rect, int n);

/// Tags cells by centroid: Channel where indicator(centroid) holds, else Matrix.
Mesh tag_channel(const Mesh& mesh, const std::function<bool(Point)>& indicator);

/// Max over cells of the longest edge. Throws on an empty mesh.
double mesh_size(const Mesh& mesh);

/// Union of axis-aligned rectangles describing a channel network.
struct ChannelNetwork {
  std::vector<Rectangle> rectangles;

  bool contains(Point p) const;

  /// Horizontal main channel |y| <= 0.1 plus vertical branches
  /// x in [-0.55,-0.45] and [0.45,0.55], on (-1,1)^2.
  static ChannelNetwork default_network();
};

}  // namespace kvbf
