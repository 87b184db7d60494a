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

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "kvbf/sparse.hpp"
#include "kvbf/types.hpp"

namespace kvbf {

inline constexpr double kLinearSolveTolerance = 1e-10;

/// Sparse direct LU. The symbolic analysis is kept and reused while the
/// sparsity pattern of successive matrices does not change.
class SparseDirectSolver {
 public:
  SparseDirectSolver();
  ~SparseDirectSolver();
  SparseDirectSolver(SparseDirectSolver&&) noexcept;
  SparseDirectSolver& operator=(SparseDirectSolver&&) noexcept;

  /// Throws SolverError on a singular matrix.
  void factorize(const SparseMatrix& a);

  /// Solves with the last factorization; refines iteratively until
  /// ||Ax - b|| <= 1e-10 ||b|| or throws SolverError.
  Vector solve(std::span<const double> b) const;

  /// Number of symbolic analyses performed so far.
  int analyses() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// One-shot solve of A x = b with relative residual <= 1e-10.
Vector linear_solve(const SparseMatrix& a, std::span<const double> b);

struct NewtonReport {
  int iterations = 0;
  double relative_update = 0.0;
  bool converged = false;
};

/// Raised when Newton exhausts its iteration budget or a linear solve fails.
class NewtonFailure : public SolverError {
 public:
  NewtonFailure(const std::string& what, NewtonReport report)
      : SolverError(what), report_(report) {}
  const NewtonReport& report() const { return report_; }

 private:
  NewtonReport report_;
};

struct NewtonOptions {
  double tol = 1e-6;
  int max_iterations = 25;
  /// Called after every update with (iteration, new iterate).
  std::function<void(int, std::span<const double>)> on_iterate;
};

/// Essential constraints x[dofs] = values enforced on every iterate.
struct EssentialConstraints {
  std::vector<int> dofs;
  Vector values;
};

/// Evaluates the residual R(x) into r.
using ResidualFn = std::function<void(std::span<const double> x, Vector& r)>;
/// Evaluates the Jacobian dR/dx at x into j (the pattern may be reused).
using JacobianFn = std::function<void(std::span<const double> x, SparseMatrix& j)>;

/// Full-step Newton: solve J d = -R, x += d, stop at the first iterate with
/// ||x_{m+1} - x_m|| / ||x_{m+1}|| <= tol (Euclidean norms over all unknowns).
/// The iteration count includes the confirming update, so a linear problem
/// reports 2 iterations (exact after the first, zero update on the second).
/// Throws NewtonFailure on non-convergence or a singular Jacobian.
std::pair<Vector, NewtonReport> newton_solve(const ResidualFn& residual, const JacobianFn& jacobian,
                                             Vector init, const NewtonOptions& options = {},
                                             const EssentialConstraints* constraints = nullptr,
                                             SparseDirectSolver* linear_solver = nullptr);

}  // namespace kvbf
