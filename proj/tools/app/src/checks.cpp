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


#include "kvbf/app/checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>

#include "kvbf/quadrature.hpp"
#include "kvbf/timeloop.hpp"

namespace kvbf::app {

namespace {

using Table = std::vector<std::vector<double>>;

const std::set<BoundaryTag> kAllSides = {BoundaryTag::Left, BoundaryTag::Right, BoundaryTag::Top,
                                         BoundaryTag::Bottom};

std::string describe(const char* label, double worst, double limit) {
  std::array<char, 128> buf{};
  std::snprintf(buf.data(), buf.size(), "%s %.3e (limit %.1e)", label, worst, limit);
  return buf.data();
}

Vector random_vector(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Vector v(n);
  for (double& x : v) x = dist(rng);
  return v;
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

CheckResult check_quadrature() {
  double worst = 0.0;
  for (int d = 1; d <= kMaxQuadratureDegree; ++d) {
    const QuadratureRule& rule = rule_for_degree(d);
    for (int a = 0; a <= d; ++a) {
      for (int b = 0; a + b <= d; ++b) {
        double sum = 0.0;
        for (int q = 0; q < rule.size(); ++q) {
          sum += rule.weights[q] * std::pow(rule.points[q][1], a) * std::pow(rule.points[q][2], b);
        }
        const double exact = factorial(a) * factorial(b) / factorial(a + b + 2);
        worst = std::max(worst, std::abs(sum - exact) / exact);
      }
    }
  }
  return {"quadrature exactness", worst <= 1e-13, describe("max relative error", worst, 1e-13)};
}

// Exact element matrices on the triangle (0,0), (2,0), (0.5,1.5).
const Table kP2Mass = {
    {0.05, -1.0 / 120, -1.0 / 120, -1.0 / 30, 0, 0},
    {-1.0 / 120, 0.05, -1.0 / 120, 0, -1.0 / 30, 0},
    {-1.0 / 120, -1.0 / 120, 0.05, 0, 0, -1.0 / 30},
    {-1.0 / 30, 0, 0, 4.0 / 15, 2.0 / 15, 2.0 / 15},
    {0, -1.0 / 30, 0, 2.0 / 15, 4.0 / 15, 2.0 / 15},
    {0, 0, -1.0 / 30, 2.0 / 15, 2.0 / 15, 4.0 / 15}};
const Table kP2Stiffness = {
    {0.75, 1.0 / 12, 1.0 / 6, 0, -2.0 / 3, -1.0 / 3},
    {1.0 / 12, 5.0 / 12, 1.0 / 18, -2.0 / 9, 0, -1.0 / 3},
    {1.0 / 6, 1.0 / 18, 2.0 / 3, -2.0 / 9, -2.0 / 3, 0},
    {0, -2.0 / 9, -2.0 / 9, 22.0 / 9, -2.0 / 3, -4.0 / 3},
    {-2.0 / 3, 0, -2.0 / 3, -2.0 / 3, 22.0 / 9, -4.0 / 9},
    {-1.0 / 3, -1.0 / 3, 0, -4.0 / 3, -4.0 / 9, 22.0 / 9}};
const Table kBubbleMass = {{0.25, 0.125, 0.125, 0.225},
                           {0.125, 0.25, 0.125, 0.225},
                           {0.125, 0.125, 0.25, 0.225},
                           {0.225, 0.225, 0.225, 243.0 / 560}};
const Table kBubbleStiffness = {{0.75, -0.25, -0.5, 0},
                                {-0.25, 5.0 / 12, -1.0 / 6, 0},
                                {-0.5, -1.0 / 6, 2.0 / 3, 0},
                                {0, 0, 0, 7.425}};
const Table kP1Mass = {{0.25, 0.125, 0.125}, {0.125, 0.25, 0.125}, {0.125, 0.125, 0.25}};

CheckResult check_element_matrices() {
  const Mesh mesh({{0.0, 0.0}, {2.0, 0.0}, {0.5, 1.5}}, {{0, 1, 2}},
                  {{{0, 1}, BoundaryTag::Bottom}, {{1, 2}, BoundaryTag::Right},
                   {{2, 0}, BoundaryTag::Left}},
                  {Region::Matrix});
  double worst = 0.0;
  auto compare_velocity = [&](const SpaceSet& spaces, const SparseMatrix& m, const Table& exact) {
    const auto dofs = spaces.velocity().dofs(0);
    for (std::size_t i = 0; i < exact.size(); ++i) {
      for (std::size_t j = 0; j < exact.size(); ++j) {
        for (int c = 0; c < 2; ++c) {
          const double v = m.coeff(SpaceSet::velocity_dof(dofs[i], c), SpaceSet::velocity_dof(dofs[j], c));
          worst = std::max(worst, std::abs(v - exact[i][j]));
        }
      }
    }
  };
  for (ElementFamily family : {ElementFamily::TaylorHood, ElementFamily::Mini}) {
    const SpaceSet spaces(mesh, family);
    const LinearBlocks b = assemble_linear_blocks(mesh, spaces, ModelParams{});
    const bool th = family == ElementFamily::TaylorHood;
    compare_velocity(spaces, b.mass_u, th ? kP2Mass : kBubbleMass);
    compare_velocity(spaces, b.stiffness_u, th ? kP2Stiffness : kBubbleStiffness);
    const auto wd = spaces.vorticity().dofs(0);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        worst = std::max(worst, std::abs(b.mass_w.coeff(wd[i], wd[j]) - kP1Mass[i][j]));
      }
    }
  }
  return {"element mass/stiffness matrices", worst <= 1e-12, describe("max abs deviation", worst, 1e-12)};
}

double jacobian_fd_error(const Assembler& assembler, NonlinearTerm terms, const Vector& u,
                         std::mt19937_64& rng) {
  Vector r0;
  SparseMatrix jac = assembler.velocity_pattern();
  assembler.nonlinear(u, terms, r0, &jac);
  const Vector dir = random_vector(u.size(), rng);
  const double h = 1e-6;
  Vector up = u, um = u;
  for (std::size_t i = 0; i < u.size(); ++i) {
    up[i] += h * dir[i];
    um[i] -= h * dir[i];
  }
  Vector rp, rm;
  assembler.nonlinear(up, terms, rp, nullptr);
  assembler.nonlinear(um, terms, rm, nullptr);
  const Vector jd = jac * dir;
  Vector diff(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) diff[i] = (rp[i] - rm[i]) / (2 * h) - jd[i];
  return norm2(diff) / std::max(norm2(jd), 1e-300);
}

CheckResult check_jacobians(int threads) {
  const Mesh mesh = build_structured({0, 0, 1, 1}, 3);
  std::mt19937_64 rng(1234);
  double worst = 0.0;
  for (ElementFamily family : {ElementFamily::TaylorHood, ElementFamily::Mini}) {
    const SpaceSet spaces(mesh, family);
    for (double rho : {3.0, 3.5, 4.0}) {
      ModelParams params;
      params.rho = rho;
      const Assembler assembler(mesh, spaces, params, threads);
      for (int trial = 0; trial < 20; ++trial) {
        const Vector u = random_vector(spaces.n_u(), rng);
        for (NonlinearTerm t : {NonlinearTerm::Forchheimer, NonlinearTerm::Convection}) {
          worst = std::max(worst, jacobian_fd_error(assembler, t, u, rng));
        }
      }
    }
  }
  return {"nonlinear Jacobians vs finite differences", worst <= 1e-6,
          describe("max relative error", worst, 1e-6)};
}

CheckResult check_skew_symmetry() {
  const Mesh mesh = build_structured({0, 0, 1, 1}, 4);
  std::mt19937_64 rng(5);
  double worst = 0.0;
  for (ElementFamily family : {ElementFamily::TaylorHood, ElementFamily::Mini}) {
    const SpaceSet spaces(mesh, family);
    const Assembler assembler(mesh, spaces, ModelParams{});
    const auto boundary = dirichlet_dofs(mesh, spaces, kAllSides);
    for (int trial = 0; trial < 10; ++trial) {
      Vector u = random_vector(spaces.n_u(), rng);
      for (int d : boundary) u[d] = 0.0;
      Vector r;
      assembler.nonlinear(u, NonlinearTerm::Convection, r, nullptr);
      worst = std::max(worst, std::abs(dot(r, u)) / (norm2(u) * norm2(r)));
    }
  }
  return {"convection skew-symmetry", worst <= 1e-11, describe("max |c(u;u,u)|/(|u||r|)", worst, 1e-11)};
}

CheckResult check_monotonicity(const ModelParams& base) {
  const Mesh mesh = build_structured({0, 0, 1, 1}, 3);
  std::mt19937_64 rng(8);
  double worst = std::numeric_limits<double>::infinity();
  int trials = 0;
  for (ElementFamily family : {ElementFamily::TaylorHood, ElementFamily::Mini}) {
    const SpaceSet spaces(mesh, family);
    for (double rho : {3.0, base.rho, 4.0}) {
      ModelParams params = base;
      params.rho = rho;
      const Assembler assembler(mesh, spaces, params);
      for (int trial = 0; trial < 50; ++trial, ++trials) {
        const Vector u = random_vector(spaces.n_u(), rng);
        const Vector v = random_vector(spaces.n_u(), rng);
        Vector ru, rv;
        assembler.nonlinear(u, NonlinearTerm::Forchheimer, ru, nullptr);
        assembler.nonlinear(v, NonlinearTerm::Forchheimer, rv, nullptr);
        double s = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) s += (ru[i] - rv[i]) * (u[i] - v[i]);
        worst = std::min(worst, s);
      }
    }
  }
  return {"Forchheimer monotonicity", worst >= -1e-12,
          describe("min (N(u)-N(v)).(u-v)", worst, -1e-12) + ", " + std::to_string(trials) + " pairs"};
}

VectorField random_smooth_field(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::array<double, 8> c{};
  for (double& v : c) v = dist(rng);
  return [c](Point q, double) {
    const double pi = std::numbers::pi;
    const double b1 = std::sin(pi * q.x) * std::sin(pi * q.y);
    const double b2 = std::sin(2 * pi * q.x) * std::sin(pi * q.y);
    const double b3 = std::sin(pi * q.x) * std::sin(3 * pi * q.y);
    const double b4 = std::sin(2 * pi * q.x) * std::sin(2 * pi * q.y);
    return Vec2{c[0] * b1 + c[1] * b2 + c[2] * b3 + c[3] * b4,
                c[4] * b1 + c[5] * b2 + c[6] * b3 + c[7] * b4};
  };
}

// Runs 50 unforced steps from random smooth data and checks, on every step,
// energy decay, B u = 0, m.p = 0 and M_w w = C^T u.
std::vector<CheckResult> check_transient(const ModelParams& base, int threads) {
  const Mesh mesh = build_structured({0, 0, 1, 1}, 8);
  std::mt19937_64 rng(2024);
  double energy_growth = -1e300, div = 0.0, mean = 0.0, proj = 0.0;
  bool completed = true;
  std::string failure;
  for (ElementFamily family : {ElementFamily::TaylorHood, ElementFamily::Mini}) {
    const SpaceSet spaces(mesh, family);
    Problem p;
    p.params = base;
    p.dirichlet_sides = kAllSides;
    p.initial_velocity = random_smooth_field(rng);
    TransientSolver solver(mesh, spaces, p, threads);
    const LinearBlocks& b = solver.blocks();
    const double k2 = base.kappa * base.kappa;
    auto energy = [&](const Vector& u) {
      return 0.5 * (dot(b.mass_u * u, u) + k2 * dot(b.stiffness_u * u, u));
    };
    double previous = 0.0;
    try {
      solver.run(TimeGrid::from(0.5, 0.01), [&](int n, const SystemState& s, const NewtonReport&) {
        const double e = energy(s.u);
        if (n > 0) {
          energy_growth = std::max(energy_growth, e - previous);
          div = std::max(div, norm2(b.divergence * s.u));
          mean = std::max(mean, std::abs(dot(b.mean, s.p)));
          Vector residual = b.mass_w * s.w;
          Vector ctu(residual.size());
          b.coupling.multiply_transpose(s.u, ctu);
          for (std::size_t i = 0; i < residual.size(); ++i) residual[i] -= ctu[i];
          proj = std::max(proj, norm2(residual) / std::max(norm2(ctu), 1.0));
        }
        previous = e;
      });
    } catch (const Error& e) {
      completed = false;
      failure = e.what();
    }
  }
  auto result = [&](std::string name, bool ok, std::string detail) {
    return CheckResult{std::move(name), completed && ok, completed ? detail : failure};
  };
  return {
      result("energy decay (f = 0, 50 steps)", energy_growth <= 1e-12,
             describe("max E^n - E^{n-1}", energy_growth, 1e-12)),
      result("discrete incompressibility", div <= 1e-9, describe("max |B u^n|", div, 1e-9)),
      result("zero mean pressure", mean <= 1e-9, describe("max |m.p^n|", mean, 1e-9)),
      result("vorticity projection consistency", proj <= 1e-9,
             describe("max |M_w w - C^T u| / |C^T u|", proj, 1e-9)),
  };
}

}  // namespace

std::vector<CheckResult> run_property_checks(const ModelParams& params, int threads) {
  params.validate();
  std::vector<CheckResult> out = {check_quadrature(), check_element_matrices(),
                                  check_jacobians(threads), check_skew_symmetry(),
                                  check_monotonicity(params)};
  for (CheckResult& r : check_transient(params, threads)) out.push_back(std::move(r));
  return out;
}

}  // namespace kvbf::app
