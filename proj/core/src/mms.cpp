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


#include "kvbf/mms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "kvbf/quadrature.hpp"

namespace kvbf {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kErrorDegree = 10;

}  // namespace

ExactSolution example1_solution() {
  ExactSolution s;
  s.u = [](Point q, double t) {
    const double e = std::exp(t);
    return Vec2{e * std::sin(kPi * q.x) * std::cos(kPi * q.y),
                -e * std::cos(kPi * q.x) * std::sin(kPi * q.y)};
  };
  s.grad_u = [](Point q, double t) {
    const double e = kPi * std::exp(t);
    const double sx = std::sin(kPi * q.x), cx = std::cos(kPi * q.x);
    const double sy = std::sin(kPi * q.y), cy = std::cos(kPi * q.y);
    return Mat2{{{e * cx * cy, -e * sx * sy}, {e * sx * sy, -e * cx * cy}}};
  };
  s.dt_u = s.u;
  // lap u = -2 pi^2 u, and u is proportional to e^t.
  s.dt_laplacian_u = [u = s.u](Point q, double t) {
    const Vec2 v = u(q, t);
    return Vec2{-2 * kPi * kPi * v[0], -2 * kPi * kPi * v[1]};
  };
  s.p = [](Point q, double t) {
    return std::exp(t) * std::cos(kPi * q.x) * std::sin(0.5 * kPi * q.y);
  };
  s.grad_p = [](Point q, double t) {
    const double e = std::exp(t);
    return Vec2{-kPi * e * std::sin(kPi * q.x) * std::sin(0.5 * kPi * q.y),
                0.5 * kPi * e * std::cos(kPi * q.x) * std::cos(0.5 * kPi * q.y)};
  };
  s.w = [](Point q, double t) {
    return 2 * kPi * std::exp(t) * std::sin(kPi * q.x) * std::sin(kPi * q.y);
  };
  s.grad_w = [](Point q, double t) {
    const double e = 2 * kPi * kPi * std::exp(t);
    return Vec2{e * std::cos(kPi * q.x) * std::sin(kPi * q.y),
                e * std::sin(kPi * q.x) * std::cos(kPi * q.y)};
  };
  return s;
}

VectorField forcing_from_exact(const ExactSolution& exact, const ModelParams& params) {
  if (!params.darcy.is_uniform() || !params.forchheimer.is_uniform()) {
    throw ConfigError("manufactured forcing needs region-independent D and F");
  }
  const double rho = params.rho, nu = params.nu, k2 = params.kappa * params.kappa;
  const double darcy = params.darcy.matrix, forch = params.forchheimer.matrix;
  return [=](Point q, double t) {
    const Vec2 u = exact.u(q, t);
    const Mat2 g = exact.grad_u(q, t);
    const Vec2 du = exact.dt_u(q, t);
    const Vec2 dlap = exact.dt_laplacian_u(q, t);
    const Vec2 gw = exact.grad_w(q, t);
    const Vec2 gp = exact.grad_p(q, t);
    const double a = darcy + forch * std::pow(std::hypot(u[0], u[1]), rho - 2.0);
    const Vec2 curl_w{gw[1], -gw[0]};
    Vec2 f{};
    for (int c = 0; c < 2; ++c) {
      f[c] = du[c] - k2 * dlap[c] + a * u[c] + g[c][0] * u[0] + g[c][1] * u[1] + nu * curl_w[c] +
             gp[c];
    }
    return f;
  };
}

StateErrors state_errors(const SystemState& state, const ExactSolution& exact, const Mesh& mesh,
                         const SpaceSet& spaces) {
  const QuadratureRule& rule = rule_for_degree(kErrorDegree);
  const BasisTable vt(spaces.velocity().kind, rule);
  const BasisTable st(ScalarKind::P1, rule);
  const double t = state.time;
  double eu = 0.0, egu = 0.0, ew = 0.0, ep = 0.0;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const CellGeometry g(mesh.cell_vertices(c));
    const auto vd = spaces.velocity().dofs(c);
    const auto wd = spaces.vorticity().dofs(c);
    const auto pd = spaces.pressure().dofs(c);
    for (int q = 0; q < rule.size(); ++q) {
      const double wq = rule.weights[q] * g.det;
      const Point x = g.map(rule.points[q]);
      Vec2 uh{};
      Mat2 guh{};
      for (int s = 0; s < vt.n_local; ++s) {
        const double phi = vt.value(q, s);
        const Vec2 grad = g.physical_gradient(vt.ref_grad(q, s));
        for (int a = 0; a < 2; ++a) {
          const double coef = state.u[SpaceSet::velocity_dof(vd[s], a)];
          uh[a] += coef * phi;
          guh[a][0] += coef * grad[0];
          guh[a][1] += coef * grad[1];
        }
      }
      double wh = 0.0, ph = 0.0;
      for (int s = 0; s < 3; ++s) {
        wh += state.w[wd[s]] * st.value(q, s);
        ph += state.p[pd[s]] * st.value(q, s);
      }
      const Vec2 u = exact.u(x, t);
      const Mat2 gu = exact.grad_u(x, t);
      for (int a = 0; a < 2; ++a) {
        eu += wq * (u[a] - uh[a]) * (u[a] - uh[a]);
        for (int b = 0; b < 2; ++b) egu += wq * (gu[a][b] - guh[a][b]) * (gu[a][b] - guh[a][b]);
      }
      const double dw = exact.w(x, t) - wh;
      const double dp = exact.p(x, t) - ph;
      ew += wq * dw * dw;
      ep += wq * dp * dp;
    }
  }
  return {std::sqrt(eu), std::sqrt(eu + egu), std::sqrt(ew), std::sqrt(ep)};
}

ErrorReport combine_errors(const std::vector<StateErrors>& per_state, double dt) {
  ErrorReport r;
  double su = 0.0, sw = 0.0, sp = 0.0;
  for (std::size_t n = 0; n < per_state.size(); ++n) {
    const StateErrors& e = per_state[n];
    r.eu_linf_h1 = std::max(r.eu_linf_h1, e.u_h1);
    if (n == 0) continue;
    su += e.u_l2 * e.u_l2;
    sw += e.w_l2 * e.w_l2;
    sp += e.p_l2 * e.p_l2;
  }
  r.eu_l2_l2 = std::sqrt(dt * su);
  r.ew_l2_l2 = std::sqrt(dt * sw);
  r.ep_l2_l2 = std::sqrt(dt * sp);
  return r;
}

ErrorReport error_norms(const Trajectory& trajectory, const ExactSolution& exact, const Mesh& mesh,
                        const SpaceSet& spaces, const TimeGrid& grid) {
  std::vector<StateErrors> per_state;
  per_state.reserve(trajectory.states.size());
  for (const SystemState& s : trajectory.states) {
    per_state.push_back(state_errors(s, exact, mesh, spaces));
  }
  ErrorReport r = combine_errors(per_state, grid.dt);
  r.dofs = spaces.total_dofs();
  r.h = mesh_size(mesh);
  r.iterations = trajectory.average_iterations();
  return r;
}

double observed_rate(double e_coarse, double e_fine, double h_coarse, double h_fine) {
  if (e_coarse == 0.0 || e_fine == 0.0) return std::numeric_limits<double>::infinity();
  return std::log(e_coarse / e_fine) / std::log(h_coarse / h_fine);
}

std::vector<RateRow> observed_rates(const std::vector<ErrorReport>& reports) {
  if (reports.size() < 2) throw Error("observed_rates: need at least two levels");
  std::vector<RateRow> rows(reports.size());
  for (std::size_t i = 1; i < reports.size(); ++i) {
    const ErrorReport& a = reports[i - 1];
    const ErrorReport& b = reports[i];
    if (!(b.h < a.h)) throw Error("observed_rates: h must be strictly decreasing");
    rows[i].eu_linf_h1 = observed_rate(a.eu_linf_h1, b.eu_linf_h1, a.h, b.h);
    rows[i].eu_l2_l2 = observed_rate(a.eu_l2_l2, b.eu_l2_l2, a.h, b.h);
    rows[i].ew_l2_l2 = observed_rate(a.ew_l2_l2, b.ew_l2_l2, a.h, b.h);
    rows[i].ep_l2_l2 = observed_rate(a.ep_l2_l2, b.ep_l2_l2, a.h, b.h);
  }
  return rows;
}

}  // namespace kvbf
