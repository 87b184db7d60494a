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


#include <gtest/gtest.h>

#include <cmath>

#include "kvbf/mesh.hpp"
#include "test_util.hpp"

namespace kvbf {
namespace {

TEST(Mesh, StructuredCounts) {
  const Mesh mesh = build_structured({0.0, 0.0, 1.0, 1.0}, 4);
  EXPECT_EQ(mesh.n_vertices(), 25);
  EXPECT_EQ(mesh.n_cells(), 32);
  // Euler: E = V + F - 1 for a disk.
  EXPECT_EQ(mesh.n_edges(), 25 + 32 - 1);
  EXPECT_EQ(mesh.boundary_edges().size(), 16u);
  EXPECT_NEAR(mesh_size(mesh), std::sqrt(2.0) / 4.0, 1e-15);
}

TEST(Mesh, CellsAreCounterClockwiseAndTileTheDomain) {
  const Mesh mesh = build_structured({-1.0, -1.0, 1.0, 1.0}, 5);
  double area = 0.0;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    EXPECT_GT(mesh.signed_area(c), 0.0);
    area += mesh.signed_area(c);
  }
  EXPECT_NEAR(area, 4.0, 1e-13);
}

TEST(Mesh, BoundaryTagsMatchSides) {
  const Mesh mesh = build_structured({0.0, 0.0, 1.0, 2.0}, 3);
  int counts[4] = {0, 0, 0, 0};
  for (const BoundaryEdge& be : mesh.boundary_edges()) {
    const Point a = mesh.vertex(be.vertices[0]), b = mesh.vertex(be.vertices[1]);
    switch (be.tag) {
      case BoundaryTag::Left: EXPECT_TRUE(a.x == 0.0 && b.x == 0.0); break;
      case BoundaryTag::Right: EXPECT_TRUE(a.x == 1.0 && b.x == 1.0); break;
      case BoundaryTag::Bottom: EXPECT_TRUE(a.y == 0.0 && b.y == 0.0); break;
      case BoundaryTag::Top: EXPECT_TRUE(a.y == 2.0 && b.y == 2.0); break;
    }
    ++counts[static_cast<int>(be.tag)];
  }
  for (int c : counts) EXPECT_EQ(c, 3);
}

TEST(Mesh, EdgeAdjacency) {
  const Mesh mesh = build_structured({0.0, 0.0, 1.0, 1.0}, 3);
  int boundary = 0;
  for (int e = 0; e < mesh.n_edges(); ++e) boundary += mesh.edge_cell_count(e) == 1;
  EXPECT_EQ(boundary, 12);
  // Local edge e is opposite local vertex e.
  for (int c = 0; c < mesh.n_cells(); ++c) {
    for (int e = 0; e < 3; ++e) {
      const Edge& edge = mesh.edges()[mesh.cell_edges(c)[e]];
      EXPECT_NE(edge[0], mesh.cell(c)[e]);
      EXPECT_NE(edge[1], mesh.cell(c)[e]);
    }
  }
}

TEST(Mesh, RejectsClockwiseCell) {
  EXPECT_THROW(Mesh({{0, 0}, {0, 1}, {1, 0}}, {{0, 1, 2}},
                    {{{0, 1}, BoundaryTag::Left}, {{1, 2}, BoundaryTag::Top},
                     {{2, 0}, BoundaryTag::Bottom}},
                    {Region::Matrix}),
               Error);
}

TEST(Mesh, RejectsUntaggedBoundary) {
  EXPECT_THROW(Mesh({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}}, {{{0, 1}, BoundaryTag::Bottom}},
                    {Region::Matrix}),
               Error);
}

TEST(Mesh, RejectsInteriorEdgeTaggedAsBoundary) {
  const Mesh square = build_structured({0, 0, 1, 1}, 1);
  std::vector<BoundaryEdge> edges(square.boundary_edges().begin(), square.boundary_edges().end());
  edges.push_back({{0, 3}, BoundaryTag::Left});
  EXPECT_THROW(Mesh({square.vertices().begin(), square.vertices().end()},
                    {square.cells().begin(), square.cells().end()}, edges,
                    {Region::Matrix, Region::Matrix}),
               Error);
}

TEST(Mesh, RejectsBadArguments) {
  EXPECT_THROW(build_structured({0, 0, 1, 1}, 0), Error);
  EXPECT_THROW(build_structured({0, 0, 0, 1}, 2), Error);
  EXPECT_THROW(mesh_size(Mesh()), Error);
}

TEST(Mesh, ChannelTaggingByCentroid) {
  const Mesh base = build_structured({-1.0, -1.0, 1.0, 1.0}, 40);
  const ChannelNetwork net = ChannelNetwork::default_network();
  const Mesh mesh = tag_channel(base, [&](Point p) { return net.contains(p); });
  double channel_area = 0.0;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    if (mesh.region(c) == Region::Channel) channel_area += mesh.signed_area(c);
  }
  // 2 x 0.2 strip plus two 0.1 x 2 strips, overlaps of 0.1 x 0.2 counted once.
  EXPECT_NEAR(channel_area, 0.4 + 0.2 + 0.2 - 2 * 0.02, 1e-12);
  EXPECT_TRUE(net.contains({0.0, 0.0}));
  EXPECT_TRUE(net.contains({-0.5, 0.9}));
  EXPECT_FALSE(net.contains({0.0, 0.5}));
}

TEST(Mesh, SingleCellHelperIsValid) {
  const Mesh mesh = testing::single_cell_mesh();
  EXPECT_NEAR(mesh.signed_area(0), 1.5, 1e-15);
  EXPECT_EQ(mesh.n_edges(), 3);
}

}  // namespace
}  // namespace kvbf
