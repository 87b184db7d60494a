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

#include "kvbf/assembly.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <thread>

namespace kvbf {

namespace {

constexpr int kAssemblyDegree = 8;
constexpr double kForchheimerZero = 1e-12;
constexpr int kMaxLocalU = 12;  // 6 P2 nodes x 2 components

// Runs body(begin, end) over contiguous cell ranges.
template <typename Body>
void for_cell_chunks(int n_cells, int threads, Body&& body) {
  threads = std::clamp(threads, 1, std::max(1, n_cells));
  if (threads == 1) {
    body(0, n_cells);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  const int chunk = (n_cells + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const int begin = t * chunk;
    const int end = std::min(n_cells, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&body, begin, end] { body(begin, end); });
  }
}

}  // namespace

void ModelParams::validate() const {
  if (!(rho >= 3.0 && rho <= 4.0)) throw ConfigError("model: rho must lie in [3, 4]");
  if (!(nu > 0.0)) throw ConfigError("model: nu must be positive");
  if (!(kappa > 0.0)) throw ConfigError("model: kappa must be positive");
  if (!(darcy.matrix > 0.0 && darcy.channel > 0.0)) {
    throw ConfigError("model: Darcy coefficients must be positive");
  }
  if (!(forchheimer.matrix > 0.0 && forchheimer.channel > 0.0)) {
    throw ConfigError("model: Forchheimer coefficients must be positive");
  }
}

Assembler::Assembler(const Mesh& mesh, const SpaceSet& spaces, const ModelParams& params,
                     int threads)
    : mesh_(mesh),
      spaces_(spaces),
      params_(params),
      threads_(std::max(1, threads)),
      velocity_table_(spaces.velocity().kind, rule_for_degree(kAssemblyDegree)),
      scalar_table_(ScalarKind::P1, rule_for_degree(kAssemblyDegree)) {
  geometry_.reserve(mesh.n_cells());
  for (int c = 0; c < mesh.n_cells(); ++c) geometry_.emplace_back(mesh.cell_vertices(c));

  const ScalarSpace& vs = spaces.velocity();
  n_local_u_ = 2 * vs.dofs_per_cell;
  auto local_u_dofs = [&vs](int c, std::vector<int>& out) {
    for (int node : vs.dofs(c)) {
      out.push_back(SpaceSet::velocity_dof(node, 0));
      out.push_back(SpaceSet::velocity_dof(node, 1));
    }
  };
  vv_pattern_ = SparseMatrix::from_cell_couplings(
      spaces.n_u(), spaces.n_u(), mesh.n_cells(),
      [&](int c, std::vector<int>& rows, std::vector<int>& cols) {
        local_u_dofs(c, rows);
        local_u_dofs(c, cols);
      });

  vv_positions_.resize(static_cast<std::size_t>(mesh.n_cells()) * n_local_u_ * n_local_u_);
  std::vector<int> dofs;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    dofs.clear();
    local_u_dofs(c, dofs);
    int* pos = vv_positions_.data() + static_cast<std::size_t>(c) * n_local_u_ * n_local_u_;
    for (int i = 0; i < n_local_u_; ++i) {
      for (int j = 0; j < n_local_u_; ++j) pos[i * n_local_u_ + j] = vv_pattern_.find(dofs[i], dofs[j]);
    }
  }
}

void Assembler::gather_velocity(int cell, std::span<const double> u, std::span<double> local) const {
  const auto nodes = spaces_.velocity().dofs(cell);
  for (std::size_t s = 0; s < nodes.size(); ++s) {
    local[2 * s] = u[SpaceSet::velocity_dof(nodes[s], 0)];
    local[2 * s + 1] = u[SpaceSet::velocity_dof(nodes[s], 1)];
  }
}

LinearBlocks Assembler::linear_blocks() const {
  const ScalarSpace& vs = spaces_.velocity();
  const ScalarSpace& ws = spaces_.vorticity();
  const ScalarSpace& ps = spaces_.pressure();
  const QuadratureRule& rule = rule_for_degree(kAssemblyDegree);
  const int nl = vs.dofs_per_cell;

  LinearBlocks blocks;
  blocks.mass_u = vv_pattern_;
  blocks.stiffness_u = vv_pattern_;
  blocks.darcy_u = vv_pattern_;
  blocks.mass_w = SparseMatrix::from_cell_couplings(
      ws.n_dofs, ws.n_dofs, mesh_.n_cells(), [&](int c, std::vector<int>& r, std::vector<int>& k) {
        const auto d = ws.dofs(c);
        r.assign(d.begin(), d.end());
        k.assign(d.begin(), d.end());
      });
  blocks.coupling = SparseMatrix::from_cell_couplings(
      spaces_.n_u(), ws.n_dofs, mesh_.n_cells(),
      [&](int c, std::vector<int>& r, std::vector<int>& k) {
        for (int node : vs.dofs(c)) {
          r.push_back(SpaceSet::velocity_dof(node, 0));
          r.push_back(SpaceSet::velocity_dof(node, 1));
        }
        const auto d = ws.dofs(c);
        k.assign(d.begin(), d.end());
      });
  blocks.divergence = SparseMatrix::from_cell_couplings(
      ps.n_dofs, spaces_.n_u(), mesh_.n_cells(),
      [&](int c, std::vector<int>& r, std::vector<int>& k) {
        const auto d = ps.dofs(c);
        r.assign(d.begin(), d.end());
        for (int node : vs.dofs(c)) {
          k.push_back(SpaceSet::velocity_dof(node, 0));
          k.push_back(SpaceSet::velocity_dof(node, 1));
        }
      });
  blocks.mean.assign(ps.n_dofs, 0.0);

  std::array<Vec2, 6> grad{};
  for (int c = 0; c < mesh_.n_cells(); ++c) {
    const CellGeometry& g = geometry_[c];
    const double darcy = params_.darcy(mesh_.region(c));
    const auto vdofs = vs.dofs(c);
    const auto wdofs = ws.dofs(c);
    const auto pdofs = ps.dofs(c);
    for (int q = 0; q < rule.size(); ++q) {
      const double w = rule.weights[q] * g.det;
      for (int i = 0; i < nl; ++i) grad[i] = g.physical_gradient(velocity_table_.ref_grad(q, i));
      for (int i = 0; i < nl; ++i) {
        const double phi_i = velocity_table_.value(q, i);
        for (int j = 0; j < nl; ++j) {
          const double phi_j = velocity_table_.value(q, j);
          const double m = w * phi_i * phi_j;
          const double k = w * (grad[i][0] * grad[j][0] + grad[i][1] * grad[j][1]);
          for (int comp = 0; comp < 2; ++comp) {
            const int r = SpaceSet::velocity_dof(vdofs[i], comp);
            const int col = SpaceSet::velocity_dof(vdofs[j], comp);
            blocks.mass_u.add(r, col, m);
            blocks.stiffness_u.add(r, col, k);
            blocks.darcy_u.add(r, col, darcy * m);
          }
        }
        // curl(phi e_x) = -d phi/dy, curl(phi e_y) = d phi/dx; div(phi e_c) = d phi/dx_c.
        for (int j = 0; j < 3; ++j) {
          const double psi = scalar_table_.value(q, j);
          blocks.coupling.add(SpaceSet::velocity_dof(vdofs[i], 0), wdofs[j], -w * psi * grad[i][1]);
          blocks.coupling.add(SpaceSet::velocity_dof(vdofs[i], 1), wdofs[j], w * psi * grad[i][0]);
          blocks.divergence.add(pdofs[j], SpaceSet::velocity_dof(vdofs[i], 0), -w * psi * grad[i][0]);
          blocks.divergence.add(pdofs[j], SpaceSet::velocity_dof(vdofs[i], 1), -w * psi * grad[i][1]);
        }
      }
      for (int i = 0; i < 3; ++i) {
        const double psi_i = scalar_table_.value(q, i);
        blocks.mean[pdofs[i]] += w * psi_i;
        for (int j = 0; j < 3; ++j) blocks.mass_w.add(wdofs[i], wdofs[j], w * psi_i * scalar_table_.value(q, j));
      }
    }
  }
  return blocks;
}

void Assembler::nonlinear(std::span<const double> u, NonlinearTerm terms, Vector& residual,
                          SparseMatrix* jacobian) const {
  const bool forch = (static_cast<int>(terms) & static_cast<int>(NonlinearTerm::Forchheimer)) != 0;
  const bool conv = (static_cast<int>(terms) & static_cast<int>(NonlinearTerm::Convection)) != 0;
  const int nl = spaces_.velocity().dofs_per_cell;
  const int nu_loc = n_local_u_;
  const int n_cells = mesh_.n_cells();
  const double rho = params_.rho;
  const int n_q = velocity_table_.n_points;
  const QuadratureRule& rule = rule_for_degree(kAssemblyDegree);

  std::vector<double> local_res(static_cast<std::size_t>(n_cells) * nu_loc, 0.0);
  std::vector<double> local_jac;
  if (jacobian != nullptr) local_jac.assign(static_cast<std::size_t>(n_cells) * nu_loc * nu_loc, 0.0);

  auto kernel = [&](int begin, int end) {
    std::array<double, kMaxLocalU> uloc{};
    std::array<Vec2, 6> grad{};
    for (int c = begin; c < end; ++c) {
      const CellGeometry& g = geometry_[c];
      const double fcoef = params_.forchheimer(mesh_.region(c));
      gather_velocity(c, u, uloc);
      double* res = local_res.data() + static_cast<std::size_t>(c) * nu_loc;
      double* jac = jacobian ? local_jac.data() + static_cast<std::size_t>(c) * nu_loc * nu_loc : nullptr;
      for (int q = 0; q < n_q; ++q) {
        const double w = rule.weights[q] * g.det;
        Vec2 uq{0.0, 0.0};
        Mat2 du{};  // du[a][b] = d u_a / d x_b
        for (int s = 0; s < nl; ++s) {
          grad[s] = g.physical_gradient(velocity_table_.ref_grad(q, s));
          const double phi = velocity_table_.value(q, s);
          for (int a = 0; a < 2; ++a) {
            const double coef = uloc[2 * s + a];
            uq[a] += coef * phi;
            du[a][0] += coef * grad[s][0];
            du[a][1] += coef * grad[s][1];
          }
        }
        const double divu = du[0][0] + du[1][1];
        const double speed = std::hypot(uq[0], uq[1]);

        // Pointwise term tested against phi_s e_c.
        Vec2 point{0.0, 0.0};
        double fa = 0.0, fb = 0.0;
        if (forch) {
          fa = fcoef * std::pow(speed, rho - 2.0);
          fb = speed < kForchheimerZero ? 0.0 : fcoef * (rho - 2.0) * std::pow(speed, rho - 4.0);
          point[0] += fa * uq[0];
          point[1] += fa * uq[1];
        }
        if (conv) {
          for (int a = 0; a < 2; ++a) point[a] += du[a][0] * uq[0] + du[a][1] * uq[1] + 0.5 * divu * uq[a];
        }
        for (int s = 0; s < nl; ++s) {
          const double phi = velocity_table_.value(q, s);
          res[2 * s] += w * point[0] * phi;
          res[2 * s + 1] += w * point[1] * phi;
        }
        if (jac == nullptr) continue;

        for (int s = 0; s < nl; ++s) {
          const double phi_s = velocity_table_.value(q, s);
          for (int r = 0; r < nl; ++r) {
            const double phi_r = velocity_table_.value(q, r);
            const double adv = grad[r][0] * uq[0] + grad[r][1] * uq[1];
            for (int c_ = 0; c_ < 2; ++c_) {
              for (int d = 0; d < 2; ++d) {
                double v = 0.0;
                if (forch) v += (c_ == d ? fa : 0.0) * phi_r + fb * uq[c_] * uq[d] * phi_r;
                if (conv) {
                  v += (c_ == d ? adv + 0.5 * divu * phi_r : 0.0) + du[c_][d] * phi_r +
                       0.5 * uq[c_] * grad[r][d];
                }
                jac[(2 * s + c_) * nu_loc + 2 * r + d] += w * phi_s * v;
              }
            }
          }
        }
      }
    }
  };
  for_cell_chunks(n_cells, threads_, kernel);

  residual.assign(spaces_.n_u(), 0.0);
  for (int c = 0; c < n_cells; ++c) {
    const auto nodes = spaces_.velocity().dofs(c);
    const double* res = local_res.data() + static_cast<std::size_t>(c) * nu_loc;
    for (int s = 0; s < nl; ++s) {
      residual[SpaceSet::velocity_dof(nodes[s], 0)] += res[2 * s];
      residual[SpaceSet::velocity_dof(nodes[s], 1)] += res[2 * s + 1];
    }
  }
  if (jacobian != nullptr) {
    if (!jacobian->same_pattern(vv_pattern_)) {
      throw Error("Assembler::nonlinear: Jacobian must carry the velocity pattern");
    }
    auto values = jacobian->values();
    std::fill(values.begin(), values.end(), 0.0);
    const std::size_t block = static_cast<std::size_t>(nu_loc) * nu_loc;
    for (int c = 0; c < n_cells; ++c) {
      const int* pos = vv_positions_.data() + c * block;
      const double* jac = local_jac.data() + c * block;
      for (std::size_t k = 0; k < block; ++k) values[pos[k]] += jac[k];
    }
  }
}

Vector Assembler::load(const VectorField& f, double t) const {
  const ScalarSpace& vs = spaces_.velocity();
  const QuadratureRule& rule = rule_for_degree(kAssemblyDegree);
  Vector out(spaces_.n_u(), 0.0);
  for (int c = 0; c < mesh_.n_cells(); ++c) {
    const CellGeometry& g = geometry_[c];
    const auto nodes = vs.dofs(c);
    for (int q = 0; q < rule.size(); ++q) {
      const double w = rule.weights[q] * g.det;
      const Vec2 fq = f(g.map(rule.points[q]), t);
      for (int s = 0; s < vs.dofs_per_cell; ++s) {
        const double phi = velocity_table_.value(q, s);
        out[SpaceSet::velocity_dof(nodes[s], 0)] += w * fq[0] * phi;
        out[SpaceSet::velocity_dof(nodes[s], 1)] += w * fq[1] * phi;
      }
    }
  }
  return out;
}

Vector Assembler::gradient_load(const MatrixField& gfield, double t) const {
  const ScalarSpace& vs = spaces_.velocity();
  const QuadratureRule& rule = rule_for_degree(kAssemblyDegree);
  Vector out(spaces_.n_u(), 0.0);
  for (int c = 0; c < mesh_.n_cells(); ++c) {
    const CellGeometry& g = geometry_[c];
    const auto nodes = vs.dofs(c);
    for (int q = 0; q < rule.size(); ++q) {
      const double w = rule.weights[q] * g.det;
      const Mat2 gq = gfield(g.map(rule.points[q]), t);
      for (int s = 0; s < vs.dofs_per_cell; ++s) {
        const Vec2 grad = g.physical_gradient(velocity_table_.ref_grad(q, s));
        for (int a = 0; a < 2; ++a) {
          out[SpaceSet::velocity_dof(nodes[s], a)] += w * (gq[a][0] * grad[0] + gq[a][1] * grad[1]);
        }
      }
    }
  }
  return out;
}

Vector Assembler::initial_problem_rhs(const VectorField& u0, const MatrixField& grad_u0,
                                      double t) const {
  const ScalarSpace& vs = spaces_.velocity();
  const QuadratureRule& rule = rule_for_degree(kAssemblyDegree);
  const double scale = 1.0 + params_.nu;
  Vector out(spaces_.n_u(), 0.0);
  for (int c = 0; c < mesh_.n_cells(); ++c) {
    const CellGeometry& g = geometry_[c];
    const double darcy = params_.darcy(mesh_.region(c));
    const double forch = params_.forchheimer(mesh_.region(c));
    const auto nodes = vs.dofs(c);
    for (int q = 0; q < rule.size(); ++q) {
      const double w = rule.weights[q] * g.det;
      const Point x = g.map(rule.points[q]);
      const Vec2 uq = u0(x, t);
      const Mat2 du = grad_u0(x, t);
      const double a = forch * std::pow(std::hypot(uq[0], uq[1]), params_.rho - 2.0);
      Vec2 point{};
      for (int k = 0; k < 2; ++k) point[k] = (darcy + a) * uq[k] + du[k][0] * uq[0] + du[k][1] * uq[1];
      for (int s = 0; s < vs.dofs_per_cell; ++s) {
        const double phi = velocity_table_.value(q, s);
        const Vec2 grad = g.physical_gradient(velocity_table_.ref_grad(q, s));
        for (int k = 0; k < 2; ++k) {
          out[SpaceSet::velocity_dof(nodes[s], k)] +=
              w * (point[k] * phi + scale * (du[k][0] * grad[0] + du[k][1] * grad[1]));
        }
      }
    }
  }
  return out;
}

LinearBlocks assemble_linear_blocks(const Mesh& mesh, const SpaceSet& spaces,
                                    const ModelParams& params) {
  return Assembler(mesh, spaces, params).linear_blocks();
}

NonlinearContribution assemble_forchheimer(const Mesh& mesh, const SpaceSet& spaces,
                                           const ModelParams& params, std::span<const double> u) {
  Assembler assembler(mesh, spaces, params);
  NonlinearContribution out{{}, assembler.velocity_pattern()};
  assembler.nonlinear(u, NonlinearTerm::Forchheimer, out.residual, &out.jacobian);
  return out;
}

NonlinearContribution assemble_convection(const Mesh& mesh, const SpaceSet& spaces,
                                          std::span<const double> u) {
  Assembler assembler(mesh, spaces, ModelParams{});
  NonlinearContribution out{{}, assembler.velocity_pattern()};
  assembler.nonlinear(u, NonlinearTerm::Convection, out.residual, &out.jacobian);
  return out;
}

Vector assemble_load(const Mesh& mesh, const SpaceSet& spaces, const VectorField& f, double t) {
  return Assembler(mesh, spaces, ModelParams{}).load(f, t);
}

void apply_dirichlet(SparseMatrix& a, Vector& rhs, std::span<const int> dofs,
                     std::span<const double> values) {
  if (dofs.size() != values.size()) throw Error("apply_dirichlet: dofs/values size mismatch");
  const int n = a.rows();
  std::vector<char> constrained(n, 0);
  Vector bc(n, 0.0);
  for (std::size_t k = 0; k < dofs.size(); ++k) {
    if (dofs[k] < 0 || dofs[k] >= n || dofs[k] >= a.cols()) {
      throw Error("apply_dirichlet: dof " + std::to_string(dofs[k]) + " out of range");
    }
    constrained[dofs[k]] = 1;
    bc[dofs[k]] = values[k];
  }
  const auto row_ptr = a.row_ptr();
  const auto col_idx = a.col_idx();
  auto vals = a.values();
  for (int r = 0; r < n; ++r) {
    for (int k = row_ptr[r]; k < row_ptr[r + 1]; ++k) {
      const int c = col_idx[k];
      if (constrained[r]) {
        vals[k] = 0.0;
      } else if (c < n && constrained[c]) {
        rhs[r] -= vals[k] * bc[c];
        vals[k] = 0.0;
      }
    }
  }
  for (int dof : dofs) {
    const int k = a.find(dof, dof);
    if (k < 0) throw Error("apply_dirichlet: missing diagonal entry for dof " + std::to_string(dof));
    vals[k] = 1.0;
    rhs[dof] = bc[dof];
  }
}

}  // namespace kvbf
