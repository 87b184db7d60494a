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

#include "kvbf/timeloop.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace kvbf {

TimeGrid TimeGrid::from(double final_time, double dt) {
  if (!(final_time > 0.0) || !(dt > 0.0)) throw ConfigError("time: T and dt must be positive");
  const double ratio = final_time / dt;
  const double steps = std::round(ratio);
  if (steps < 1.0 || std::abs(steps * dt - final_time) > 1e-12 * final_time) {
    std::ostringstream msg;
    msg << "time: dt = " << dt << " does not divide T = " << final_time;
    throw ConfigError(msg.str());
  }
  return TimeGrid{final_time / steps, static_cast<int>(steps)};
}

std::string_view to_string(InitialMode mode) {
  switch (mode) {
    case InitialMode::Interpolate: return "interpolate";
    case InitialMode::DiscreteProblem: return "discrete_problem";
  }
  return "unknown";
}

double Trajectory::average_iterations() const {
  if (reports.empty()) return 0.0;
  double total = 0.0;
  for (const NewtonReport& r : reports) total += r.iterations;
  return total / static_cast<double>(reports.size());
}

namespace {

Problem validated(Problem p) {
  p.params.validate();
  return p;
}

}  // namespace

TransientSolver::TransientSolver(const Mesh& mesh, const SpaceSet& spaces, Problem problem,
                                 int threads)
    : mesh_(mesh),
      spaces_(spaces),
      problem_(validated(std::move(problem))),
      assembler_(mesh, spaces, problem_.params, threads),
      blocks_(assembler_.linear_blocks()) {
  layout_ = {spaces.n_u(), spaces.n_w(), spaces.n_p(), problem_.needs_pressure_multiplier()};
  dirichlet_ = dirichlet_dofs(mesh, spaces, problem_.dirichlet_sides);

  const double nu = problem_.params.nu;
  const int wo = layout_.w_offset(), po = layout_.p_offset(), lo = layout_.lambda_offset();
  std::vector<Triplet> t;
  auto for_each = [](const SparseMatrix& m, auto&& fn) {
    const auto rp = m.row_ptr();
    const auto ci = m.col_idx();
    const auto v = m.values();
    for (int r = 0; r < m.rows(); ++r) {
      for (int k = rp[r]; k < rp[r + 1]; ++k) fn(r, ci[k], v[k]);
    }
  };
  for_each(assembler_.velocity_pattern(), [&](int r, int c, double) { t.push_back({r, c, 0.0}); });
  for_each(blocks_.coupling, [&](int r, int c, double v) {
    t.push_back({r, wo + c, nu * v});
    t.push_back({wo + c, r, -nu * v});
  });
  for_each(blocks_.mass_w, [&](int r, int c, double v) { t.push_back({wo + r, wo + c, nu * v}); });
  for_each(blocks_.divergence, [&](int r, int c, double v) {
    t.push_back({po + r, c, v});
    t.push_back({c, po + r, v});
  });
  if (layout_.multiplier) {
    for (int i = 0; i < layout_.n_p; ++i) {
      t.push_back({po + i, lo, blocks_.mean[i]});
      t.push_back({lo, po + i, blocks_.mean[i]});
    }
  }
  pattern_ = SparseMatrix::from_triplets(layout_.size(), layout_.size(), std::move(t));

  const SparseMatrix& vv = assembler_.velocity_pattern();
  vv_positions_.resize(vv.nnz());
  for_each(vv, [&, k = 0](int r, int c, double) mutable { vv_positions_[k++] = pattern_.find(r, c); });
}

void TransientSolver::ensure_operator(double alpha, double beta) const {
  if (alpha == op_alpha_ && beta == op_beta_) return;
  velocity_operator_ = assembler_.velocity_pattern();
  auto out = velocity_operator_.values();
  const auto m = blocks_.mass_u.values();
  const auto k = blocks_.stiffness_u.values();
  const auto d = blocks_.darcy_u.values();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = alpha * m[i] + beta * k[i] + d[i];
  op_alpha_ = alpha;
  op_beta_ = beta;
}

Vector TransientSolver::pack(const SystemState& s) const {
  Vector x(layout_.size(), 0.0);
  std::copy(s.u.begin(), s.u.end(), x.begin());
  std::copy(s.w.begin(), s.w.end(), x.begin() + layout_.w_offset());
  std::copy(s.p.begin(), s.p.end(), x.begin() + layout_.p_offset());
  if (layout_.multiplier) x[layout_.lambda_offset()] = s.lambda;
  return x;
}

SystemState TransientSolver::unpack(std::span<const double> x, double time) const {
  SystemState s;
  s.time = time;
  s.u.assign(x.begin(), x.begin() + layout_.n_u);
  s.w.assign(x.begin() + layout_.w_offset(), x.begin() + layout_.p_offset());
  s.p.assign(x.begin() + layout_.p_offset(), x.begin() + layout_.lambda_offset());
  s.lambda = layout_.multiplier ? x[layout_.lambda_offset()] : 0.0;
  return s;
}

namespace {

// Residual of the non-velocity rows and the linear coupling terms of the
// velocity rows, added to r (already holding the velocity-only terms).
void add_coupling_residual(const LinearBlocks& b, const BlockLayout& lay, double nu,
                           std::span<const double> x, Vector& r) {
  const auto u = x.subspan(0, lay.n_u);
  const auto w = x.subspan(lay.w_offset(), lay.n_w);
  const auto p = x.subspan(lay.p_offset(), lay.n_p);
  const double lambda = lay.multiplier ? x[lay.lambda_offset()] : 0.0;

  Vector tmp_u(lay.n_u);
  b.coupling.multiply(w, tmp_u);
  for (int i = 0; i < lay.n_u; ++i) r[i] += nu * tmp_u[i];
  b.divergence.multiply_transpose(p, tmp_u);
  for (int i = 0; i < lay.n_u; ++i) r[i] += tmp_u[i];

  Vector tmp_w(lay.n_w);
  b.mass_w.multiply(w, std::span(r).subspan(lay.w_offset(), lay.n_w));
  b.coupling.multiply_transpose(u, tmp_w);
  for (int i = 0; i < lay.n_w; ++i) {
    r[lay.w_offset() + i] = nu * (r[lay.w_offset() + i] - tmp_w[i]);
  }

  b.divergence.multiply(u, std::span(r).subspan(lay.p_offset(), lay.n_p));
  for (int i = 0; i < lay.n_p; ++i) r[lay.p_offset() + i] += lambda * b.mean[i];
  if (lay.multiplier) r[lay.lambda_offset()] = dot(b.mean, p);
}

}  // namespace

void TransientSolver::residual(std::span<const double> x, double alpha, double beta,
                               std::span<const double> rhs_u, Vector& r) const {
  ensure_operator(alpha, beta);
  Vector nl;
  assembler_.nonlinear(x.subspan(0, layout_.n_u), NonlinearTerm::Both, nl, nullptr);
  r.assign(layout_.size(), 0.0);
  velocity_operator_.multiply(x.subspan(0, layout_.n_u), std::span(r).subspan(0, layout_.n_u));
  for (int i = 0; i < layout_.n_u; ++i) r[i] += nl[i] - rhs_u[i];
  add_coupling_residual(blocks_, layout_, problem_.params.nu, x, r);
}

void TransientSolver::jacobian(std::span<const double> x, double alpha, double beta,
                               SparseMatrix& j) const {
  ensure_operator(alpha, beta);
  Vector nl;
  SparseMatrix jnl = assembler_.velocity_pattern();
  assembler_.nonlinear(x.subspan(0, layout_.n_u), NonlinearTerm::Both, nl, &jnl);
  j = pattern_;
  auto vals = j.values();
  const auto op = velocity_operator_.values();
  const auto jv = jnl.values();
  for (std::size_t k = 0; k < vv_positions_.size(); ++k) vals[vv_positions_[k]] += op[k] + jv[k];
}

std::pair<Vector, NewtonReport> TransientSolver::solve(Vector init, double alpha, double beta,
                                                       const Vector& rhs_u, double time,
                                                       const VectorField& boundary) {
  ensure_operator(alpha, beta);
  EssentialConstraints bc;
  bc.dofs = dirichlet_;
  bc.values.resize(dirichlet_.size(), 0.0);
  if (boundary) {
    const auto& nodes = spaces_.velocity().nodes;
    for (std::size_t k = 0; k < dirichlet_.size(); ++k) {
      const int dof = dirichlet_[k];
      bc.values[k] = boundary(nodes[dof / 2], time)[dof % 2];
    }
  }

  // The residual and Jacobian are requested at the same iterate, so one
  // nonlinear assembly serves both.
  Vector nl;
  SparseMatrix jnl = assembler_.velocity_pattern();
  const int n_u = layout_.n_u;
  const double nu = problem_.params.nu;
  auto res = [&](std::span<const double> x, Vector& r) {
    assembler_.nonlinear(x.subspan(0, n_u), NonlinearTerm::Both, nl, &jnl);
    r.assign(layout_.size(), 0.0);
    velocity_operator_.multiply(x.subspan(0, n_u), std::span(r).subspan(0, n_u));
    for (int i = 0; i < n_u; ++i) r[i] += nl[i] - rhs_u[i];
    add_coupling_residual(blocks_, layout_, nu, x, r);
  };
  auto jac = [&](std::span<const double>, SparseMatrix& j) {
    j = pattern_;
    auto vals = j.values();
    const auto op = velocity_operator_.values();
    const auto jv = jnl.values();
    for (std::size_t k = 0; k < vv_positions_.size(); ++k) vals[vv_positions_[k]] += op[k] + jv[k];
  };
  return newton_solve(res, jac, std::move(init), problem_.newton, &bc, &solver_);
}

Vector TransientSolver::project_vorticity(std::span<const double> u) {
  if (!vorticity_solver_) {
    vorticity_solver_.emplace();
    vorticity_solver_->factorize(blocks_.mass_w);
  }
  Vector rhs(layout_.n_w);
  blocks_.coupling.multiply_transpose(u, rhs);
  if (norm2(rhs) == 0.0) return Vector(layout_.n_w, 0.0);
  return vorticity_solver_->solve(rhs);
}

SystemState TransientSolver::initial_state() {
  const VectorField zero = [](Point, double) { return Vec2{0.0, 0.0}; };
  const VectorField& u0 = problem_.initial_velocity ? problem_.initial_velocity : zero;
  SystemState s;
  s.u = interpolate_velocity(spaces_, u0, 0.0);
  s.w = project_vorticity(s.u);
  s.p.assign(layout_.n_p, 0.0);
  if (problem_.initial_mode == InitialMode::Interpolate) return s;

  MatrixField grad = problem_.initial_gradient;
  if (!grad) {
    if (problem_.initial_velocity) {
      throw ConfigError("initial data: discrete_problem mode needs the velocity gradient");
    }
    grad = [](Point, double) { return Mat2{}; };
  }
  const Vector rhs = assembler_.initial_problem_rhs(u0, grad, 0.0);
  auto [x, report] = solve(pack(s), 0.0, 1.0, rhs, 0.0, u0);
  return unpack(x, 0.0);
}

std::pair<SystemState, NewtonReport> TransientSolver::step(const SystemState& prev, double dt) {
  return advance(prev, prev.time + dt, dt);
}

std::pair<SystemState, NewtonReport> TransientSolver::advance(const SystemState& prev, double t,
                                                              double dt) {
  if (!(dt > 0.0)) throw ConfigError("step: dt must be positive");
  const double alpha = 1.0 / dt;
  const double beta = problem_.params.kappa * problem_.params.kappa / dt;

  Vector rhs(layout_.n_u), ku(layout_.n_u);
  blocks_.mass_u.multiply(prev.u, rhs);
  blocks_.stiffness_u.multiply(prev.u, ku);
  for (int i = 0; i < layout_.n_u; ++i) rhs[i] = alpha * rhs[i] + beta * ku[i];
  if (problem_.forcing) {
    const Vector load = assembler_.load(problem_.forcing, t);
    for (int i = 0; i < layout_.n_u; ++i) rhs[i] += load[i];
  }
  auto [x, report] = solve(pack(prev), alpha, beta, rhs, t, problem_.boundary_velocity);
  return {unpack(x, t), report};
}

Trajectory TransientSolver::run(const TimeGrid& grid, const Observer& observer) {
  Trajectory traj;
  traj.states.reserve(grid.steps + 1);
  traj.reports.reserve(grid.steps);
  traj.states.push_back(initial_state());
  if (observer) observer(0, traj.states.back(), NewtonReport{});
  for (int n = 1; n <= grid.steps; ++n) {
    try {
      auto [next, report] = advance(traj.states.back(), grid.time(n), grid.dt);
      traj.states.push_back(std::move(next));
      traj.reports.push_back(report);
    } catch (const SolverError& e) {
      std::ostringstream msg;
      msg << "step " << n << " (t = " << grid.time(n) << "): " << e.what();
      throw TransientFailure(msg.str(), n, std::move(traj));
    }
    if (observer) observer(n, traj.states.back(), traj.reports.back());
  }
  return traj;
}

}  // namespace kvbf
