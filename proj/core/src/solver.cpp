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

#include "kvbf/solver.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#ifdef KVBF_HAVE_UMFPACK
#include <Eigen/UmfPackSupport>
#endif

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kvbf/assembly.hpp"

namespace kvbf {

namespace {

using EigenMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;
using RowMajorView = Eigen::Map<const Eigen::SparseMatrix<double, Eigen::RowMajor, int>>;

#ifdef KVBF_HAVE_UMFPACK
using Factorization = Eigen::UmfPackLU<EigenMatrix>;
#else
using Factorization = Eigen::SparseLU<EigenMatrix, Eigen::COLAMDOrdering<int>>;
#endif

// First row or column without a nonzero entry, or -1.
int find_empty_line(const SparseMatrix& a) {
  std::vector<char> col_seen(a.cols(), 0);
  const auto row_ptr = a.row_ptr();
  const auto col_idx = a.col_idx();
  const auto vals = a.values();
  for (int r = 0; r < a.rows(); ++r) {
    bool any = false;
    for (int k = row_ptr[r]; k < row_ptr[r + 1]; ++k) {
      if (vals[k] != 0.0) {
        any = true;
        col_seen[col_idx[k]] = 1;
      }
    }
    if (!any) return r;
  }
  const auto it = std::find(col_seen.begin(), col_seen.end(), 0);
  return it == col_seen.end() ? -1 : static_cast<int>(it - col_seen.begin());
}

}  // namespace

struct SparseDirectSolver::Impl {
  Impl() {
#ifdef KVBF_HAVE_UMFPACK
    // The saddle-point systems are structurally symmetric; the symmetric
    // strategy with a nested-dissection ordering gives far less fill than the
    // default column ordering.
    lu.umfpackControl()(UMFPACK_STRATEGY) = UMFPACK_STRATEGY_SYMMETRIC;
    lu.umfpackControl()(UMFPACK_ORDERING) = UMFPACK_ORDERING_METIS;
#endif
  }

  Factorization lu;
  EigenMatrix matrix;
  std::vector<int> row_ptr;
  std::vector<int> col_idx;
  bool analyzed = false;
  bool factorized = false;
  int analyses = 0;
};

SparseDirectSolver::SparseDirectSolver() : impl_(std::make_unique<Impl>()) {}
SparseDirectSolver::~SparseDirectSolver() = default;
SparseDirectSolver::SparseDirectSolver(SparseDirectSolver&&) noexcept = default;
SparseDirectSolver& SparseDirectSolver::operator=(SparseDirectSolver&&) noexcept = default;

void SparseDirectSolver::factorize(const SparseMatrix& a) {
  if (a.rows() != a.cols()) throw SolverError("linear solve: matrix is not square");
  const RowMajorView view(a.rows(), a.cols(), a.nnz(), a.row_ptr().data(), a.col_idx().data(),
                          a.values().data());
  impl_->matrix = view;
  impl_->matrix.makeCompressed();

  const bool same = impl_->analyzed &&
                    std::equal(impl_->row_ptr.begin(), impl_->row_ptr.end(), a.row_ptr().begin(),
                               a.row_ptr().end()) &&
                    std::equal(impl_->col_idx.begin(), impl_->col_idx.end(), a.col_idx().begin(),
                               a.col_idx().end());
  if (!same) {
    impl_->lu.analyzePattern(impl_->matrix);
    impl_->row_ptr.assign(a.row_ptr().begin(), a.row_ptr().end());
    impl_->col_idx.assign(a.col_idx().begin(), a.col_idx().end());
    impl_->analyzed = true;
    ++impl_->analyses;
  }
  impl_->lu.factorize(impl_->matrix);
  impl_->factorized = impl_->lu.info() == Eigen::Success;
  if (!impl_->factorized) {
    std::ostringstream msg;
    msg << "linear solve: singular matrix";
    const int line = find_empty_line(a);
    if (line >= 0) {
      msg << " (empty row/column " << line << ")";
    } else {
#ifndef KVBF_HAVE_UMFPACK
      msg << " (" << impl_->lu.lastErrorMessage() << ")";
#endif
    }
    throw SolverError(msg.str());
  }
}

Vector SparseDirectSolver::solve(std::span<const double> b) const {
  if (!impl_->factorized) throw SolverError("linear solve: no valid factorization");
  const Eigen::Map<const Eigen::VectorXd> rhs(b.data(), static_cast<Eigen::Index>(b.size()));
  Eigen::VectorXd x = impl_->lu.solve(rhs);
  const double bnorm = rhs.norm();
  Eigen::VectorXd r = rhs - impl_->matrix * x;
  for (int refine = 0; refine < 3 && r.norm() > kLinearSolveTolerance * bnorm; ++refine) {
    x += impl_->lu.solve(r);
    r = rhs - impl_->matrix * x;
  }
  if (!std::isfinite(r.norm()) || r.norm() > kLinearSolveTolerance * bnorm) {
    std::ostringstream msg;
    Eigen::Index worst = 0;
    r.cwiseAbs().maxCoeff(&worst);
    msg << "linear solve: residual " << r.norm() / std::max(bnorm, 1e-300)
        << " above tolerance (largest at row " << worst << ")";
    throw SolverError(msg.str());
  }
  return Vector(x.data(), x.data() + x.size());
}

int SparseDirectSolver::analyses() const { return impl_->analyses; }

Vector linear_solve(const SparseMatrix& a, std::span<const double> b) {
  SparseDirectSolver solver;
  solver.factorize(a);
  return solver.solve(b);
}

std::pair<Vector, NewtonReport> newton_solve(const ResidualFn& residual, const JacobianFn& jacobian,
                                             Vector x, const NewtonOptions& options,
                                             const EssentialConstraints* constraints,
                                             SparseDirectSolver* linear_solver) {
  SparseDirectSolver local_solver;
  SparseDirectSolver& lu = linear_solver ? *linear_solver : local_solver;
  NewtonReport report;
  Vector r;
  SparseMatrix jac;
  Vector bc_update;
  for (int it = 1; it <= options.max_iterations; ++it) {
    residual(x, r);
    jacobian(x, jac);
    for (double& v : r) v = -v;
    if (constraints != nullptr) {
      bc_update.resize(constraints->dofs.size());
      for (std::size_t k = 0; k < constraints->dofs.size(); ++k) {
        bc_update[k] = constraints->values[k] - x[constraints->dofs[k]];
      }
      apply_dirichlet(jac, r, constraints->dofs, bc_update);
    }
    Vector delta;
    try {
      lu.factorize(jac);
      delta = lu.solve(r);
    } catch (const SolverError& e) {
      report.iterations = it;
      throw NewtonFailure(std::string("newton: ") + e.what(), report);
    }
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += delta[i];
    const double xnorm = norm2(x);
    const double dnorm = norm2(delta);
    report.iterations = it;
    report.relative_update = dnorm == 0.0 ? 0.0 : dnorm / xnorm;
    if (options.on_iterate) options.on_iterate(it, x);
    if (!std::isfinite(report.relative_update)) {
      throw NewtonFailure("newton: non-finite update", report);
    }
    if (report.relative_update <= options.tol) {
      report.converged = true;
      return {std::move(x), report};
    }
  }
  std::ostringstream msg;
  msg << "newton: no convergence after " << options.max_iterations
      << " iterations (relative update " << report.relative_update << ")";
  throw NewtonFailure(msg.str(), report);
}

}  // namespace kvbf
