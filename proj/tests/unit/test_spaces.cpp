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

#include <array>
#include <cmath>
#include <random>

#include "kvbf/spaces.hpp"
#include "test_util.hpp"

namespace kvbf {
namespace {

constexpr ScalarKind kKinds[] = {ScalarKind::P1, ScalarKind::P2, ScalarKind::P1Bubble};

std::array<double, 3> random_bary(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double a = u(rng), b = u(rng);
  if (a + b > 1.0) {
    a = 1.0 - a;
    b = 1.0 - b;
  }
  return {1.0 - a - b, a, b};
}

TEST(Basis, NodalProperty) {
  const std::array<std::array<double, 3>, 6> nodes = {{{1, 0, 0},
                                                       {0, 1, 0},
                                                       {0, 0, 1},
                                                       {0, 0.5, 0.5},
                                                       {0.5, 0, 0.5},
                                                       {0.5, 0.5, 0}}};
  std::array<double, 6> v{};
  for (int k = 0; k < 6; ++k) {
    basis_values(ScalarKind::P2, nodes[k], v);
    for (int i = 0; i < 6; ++i) EXPECT_NEAR(v[i], i == k ? 1.0 : 0.0, 1e-15);
  }
  std::array<double, 4> b{};
  basis_values(ScalarKind::P1Bubble, {1.0 / 3, 1.0 / 3, 1.0 / 3}, b);
  EXPECT_NEAR(b[3], 1.0, 1e-15);
}

TEST(Basis, PartitionOfUnity) {
  std::mt19937_64 rng(7);
  for (ScalarKind kind : {ScalarKind::P1, ScalarKind::P2}) {
    const int n = local_dimension(kind);
    std::vector<double> v(n);
    std::vector<Vec2> g(n);
    for (int trial = 0; trial < 20; ++trial) {
      const auto l = random_bary(rng);
      basis_values(kind, l, v);
      basis_reference_gradients(kind, l, g);
      double s = 0.0, gx = 0.0, gy = 0.0;
      for (int i = 0; i < n; ++i) {
        s += v[i];
        gx += g[i][0];
        gy += g[i][1];
      }
      EXPECT_NEAR(s, 1.0, 1e-14);
      EXPECT_NEAR(gx, 0.0, 1e-13);
      EXPECT_NEAR(gy, 0.0, 1e-13);
    }
  }
}

TEST(Basis, GradientsMatchFiniteDifferences) {
  std::mt19937_64 rng(11);
  const double h = 1e-6;
  for (ScalarKind kind : kKinds) {
    const int n = local_dimension(kind);
    std::vector<double> vp(n), vm(n);
    std::vector<Vec2> g(n);
    for (int trial = 0; trial < 10; ++trial) {
      const auto l = random_bary(rng);
      basis_reference_gradients(kind, l, g);
      for (int dir = 0; dir < 2; ++dir) {
        // Reference coordinates are (l1, l2); l0 = 1 - l1 - l2.
        auto lp = l, lm = l;
        lp[dir + 1] += h;
        lp[0] -= h;
        lm[dir + 1] -= h;
        lm[0] += h;
        basis_values(kind, lp, vp);
        basis_values(kind, lm, vm);
        for (int i = 0; i < n; ++i) EXPECT_NEAR(g[i][dir], (vp[i] - vm[i]) / (2 * h), 1e-8);
      }
    }
  }
}

TEST(Spaces, DofCounts) {
  const Mesh mesh = build_structured({0, 0, 1, 1}, 4);
  const SpaceSet th(mesh, ElementFamily::TaylorHood);
  EXPECT_EQ(th.velocity().n_dofs, 25 + 56);
  EXPECT_EQ(th.n_u(), 2 * 81);
  EXPECT_EQ(th.n_w(), 25);
  EXPECT_EQ(th.n_p(), 25);
  EXPECT_EQ(th.total_dofs(), 162 + 50);
  const SpaceSet mini(mesh, ElementFamily::Mini);
  EXPECT_EQ(mini.velocity().n_dofs, 25 + 32);
  EXPECT_EQ(mini.velocity().first_bubble, 25);
  EXPECT_TRUE(mini.velocity().is_bubble(25));
  EXPECT_FALSE(mini.velocity().is_bubble(24));
  EXPECT_EQ(mini.total_dofs(), 114 + 50);
}

TEST(Spaces, DirichletDofs) {
  const Mesh mesh = build_structured({0, 0, 1, 1}, 4);
  const SpaceSet th(mesh, ElementFamily::TaylorHood);
  const auto all = dirichlet_dofs(
      mesh, th, {BoundaryTag::Left, BoundaryTag::Right, BoundaryTag::Top, BoundaryTag::Bottom});
  EXPECT_EQ(all.size(), 2u * (16 + 16));
  EXPECT_TRUE(std::is_sorted(all.begin(), all.end()));
  const auto left = dirichlet_dofs(mesh, th, {BoundaryTag::Left});
  EXPECT_EQ(left.size(), 2u * (5 + 4));
  for (int d : left) EXPECT_EQ(th.velocity().nodes[d / 2].x, 0.0);

  const SpaceSet mini(mesh, ElementFamily::Mini);
  const auto mleft = dirichlet_dofs(mesh, mini, {BoundaryTag::Left});
  EXPECT_EQ(mleft.size(), 2u * 5);
  for (int d : mleft) EXPECT_FALSE(mini.velocity().is_bubble(d / 2));
}

TEST(Spaces, P2InterpolatesQuadraticsExactly) {
  const Mesh mesh = build_structured({0, 0, 1, 1}, 3);
  const SpaceSet th(mesh, ElementFamily::TaylorHood);
  const VectorField field = [](Point p, double t) {
    return Vec2{p.x * p.x - 2 * p.x * p.y + t, 3 * p.y * p.y + p.x - 1};
  };
  const Vector u = interpolate_velocity(th, field, 0.5);
  std::mt19937_64 rng(3);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const auto l = random_bary(rng);
    const Point p = CellGeometry(mesh.cell_vertices(c)).map(l);
    const Vec2 exact = field(p, 0.5);
    const Vec2 fe = evaluate_velocity(th, u, c, l);
    EXPECT_NEAR(fe[0], exact[0], 1e-14);
    EXPECT_NEAR(fe[1], exact[1], 1e-14);
  }
}

TEST(Spaces, P1InterpolantOfLinearIsExact) {
  const Mesh mesh = build_structured({-1, -1, 1, 1}, 3);
  const SpaceSet mini(mesh, ElementFamily::Mini);
  const ScalarField f = [](Point p, double) { return 2 * p.x - p.y + 0.25; };
  const Vector q = interpolate_scalar(mini.pressure(), f);
  std::mt19937_64 rng(5);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const auto l = random_bary(rng);
    const Point p = CellGeometry(mesh.cell_vertices(c)).map(l);
    EXPECT_NEAR(evaluate_scalar(mini.pressure(), q, c, l), f(p, 0.0), 1e-14);
  }
  // Bubble coefficients of an interpolant are zero.
  const Vector u = interpolate_velocity(mini, [](Point p, double) { return Vec2{p.x, p.y}; });
  for (int n = mini.velocity().first_bubble; n < mini.velocity().n_dofs; ++n) {
    EXPECT_EQ(u[2 * n], 0.0);
    EXPECT_EQ(u[2 * n + 1], 0.0);
  }
}

TEST(Spaces, CellGeometryGradients) {
  const CellGeometry g({Point{0, 0}, Point{2, 0}, Point{0.5, 1.5}});
  EXPECT_NEAR(g.area(), 1.5, 1e-15);
  // lambda_1 = (x - y/3)/2 on this cell.
  const Vec2 grad = g.physical_gradient({1.0, 0.0});
  EXPECT_NEAR(grad[0], 0.5, 1e-15);
  EXPECT_NEAR(grad[1], -1.0 / 6.0, 1e-15);
  EXPECT_THROW(CellGeometry({Point{0, 0}, Point{1, 1}, Point{2, 2}}), Error);
}

}  // namespace
}  // namespace kvbf
