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
#include <string>
#include <vector>

#include "kvbf/solver.hpp"

namespace kvbf {
namespace {

TEST(LinearSolve, SmallSystem) {
  const SparseMatrix a = SparseMatrix::from_triplets(
      3, 3, {{0, 0, 4}, {0, 1, -1}, {1, 1, 2}, {1, 2, 3}, {2, 0, 1}, {2, 2, 5}});
  const Vector x = linear_solve(a, Vector{2.0, 13.0, 16.0});
  EXPECT_NEAR(x[0], 1.0, 1e-14);
  EXPECT_NEAR(x[1], 2.0, 1e-14);
  EXPECT_NEAR(x[2], 3.0, 1e-14);
}

TEST(LinearSolve, SingularMatrixNamesEmptyRow) {
  const SparseMatrix a = SparseMatrix::from_triplets(3, 3, {{0, 0, 1.0}, {2, 2, 1.0}, {1, 1, 0.0}});
  try {
    linear_solve(a, Vector{1.0, 1.0, 1.0});
    FAIL() << "expected SolverError";
  } catch (const SolverError& e) {
    EXPECT_NE(std::string(e.what()).find("1"), std::string::npos) << e.what();
  }
}

TEST(LinearSolve, SingularMatrixWithoutEmptyLine) {
  const SparseMatrix a =
      SparseMatrix::from_triplets(2, 2, {{0, 0, 1.0}, {0, 1, 2.0}, {1, 0, 2.0}, {1, 1, 4.0}});
  EXPECT_THROW(linear_solve(a, Vector{1.0, 1.0}), SolverError);
}

TEST(LinearSolve, ReusesSymbolicAnalysis) {
  SparseMatrix a = SparseMatrix::from_triplets(2, 2, {{0, 0, 2.0}, {0, 1, 1.0}, {1, 0, 1.0}, {1, 1, 3.0}});
  SparseDirectSolver solver;
  solver.factorize(a);
  a.values()[0] = 5.0;
  solver.factorize(a);
  EXPECT_EQ(solver.analyses(), 1);
  const Vector x = solver.solve(Vector{6.0, 4.0});
  EXPECT_NEAR(5 * x[0] + x[1], 6.0, 1e-14);
  EXPECT_NEAR(x[0] + 3 * x[1], 4.0, 1e-14);
  solver.factorize(SparseMatrix::identity(2));
  EXPECT_EQ(solver.analyses(), 2);
}

TEST(LinearSolve, SolveWithoutFactorizationThrows) {
  SparseDirectSolver solver;
  EXPECT_THROW(solver.solve(Vector{1.0}), SolverError);
}

// Scalar problem x^2 - 4 = 0 as a 1x1 system.
ResidualFn square_residual() {
  return [](std::span<const double> x, Vector& r) { r = {x[0] * x[0] - 4.0}; };
}
JacobianFn square_jacobian() {
  return [](std::span<const double> x, SparseMatrix& j) {
    j = SparseMatrix::from_triplets(1, 1, {{0, 0, 2.0 * x[0]}});
  };
}

TEST(Newton, ScalarIterates) {
  std::vector<double> iterates;
  NewtonOptions opts;
  opts.on_iterate = [&](int, std::span<const double> x) { iterates.push_back(x[0]); };
  const auto [x, report] = newton_solve(square_residual(), square_jacobian(), {3.0}, opts);
  ASSERT_GE(iterates.size(), 2u);
  EXPECT_NEAR(iterates[0], 13.0 / 6.0, 1e-15);
  EXPECT_NEAR(iterates[1], 2.0064102564102564, 1e-15);
  EXPECT_TRUE(report.converged);
  EXPECT_NEAR(x[0], 2.0, 1e-12);
  EXPECT_LE(report.relative_update, 1e-6);
}

TEST(Newton, LinearProblemTakesTwoIterations) {
  const SparseMatrix a = SparseMatrix::from_triplets(2, 2, {{0, 0, 3.0}, {0, 1, 1.0}, {1, 1, 2.0}});
  const ResidualFn res = [&](std::span<const double> x, Vector& r) {
    r = a * x;
    r[0] -= 5.0;
    r[1] -= 4.0;
  };
  const JacobianFn jac = [&](std::span<const double>, SparseMatrix& j) { j = a; };
  const auto [x, report] = newton_solve(res, jac, {0.0, 0.0});
  EXPECT_EQ(report.iterations, 2);
  EXPECT_NEAR(x[0], 1.0, 1e-14);
  EXPECT_NEAR(x[1], 2.0, 1e-14);
}

TEST(Newton, ZeroSolutionCountsAsConverged) {
  const ResidualFn res = [](std::span<const double> x, Vector& r) { r = {x[0]}; };
  const JacobianFn jac = [](std::span<const double>, SparseMatrix& j) { j = SparseMatrix::identity(1); };
  const auto [x, report] = newton_solve(res, jac, {0.0});
  EXPECT_TRUE(report.converged);
  EXPECT_EQ(report.iterations, 1);
  EXPECT_EQ(x[0], 0.0);
}

TEST(Newton, EnforcesEssentialConstraints) {
  // Residual x0 + x1 - 3, x1 - x0^2 with x0 fixed to 2 by a constraint:
  // only the second equation matters, giving x1 = 4.
  const ResidualFn res = [](std::span<const double> x, Vector& r) {
    r = {x[0] + x[1] - 3.0, x[1] - x[0] * x[0]};
  };
  const JacobianFn jac = [](std::span<const double> x, SparseMatrix& j) {
    j = SparseMatrix::from_triplets(2, 2, {{0, 0, 1.0}, {0, 1, 1.0}, {1, 0, -2 * x[0]}, {1, 1, 1.0}});
  };
  EssentialConstraints bc{{0}, {2.0}};
  const auto [x, report] = newton_solve(res, jac, {0.0, 0.0}, {}, &bc);
  EXPECT_TRUE(report.converged);
  EXPECT_DOUBLE_EQ(x[0], 2.0);
  EXPECT_NEAR(x[1], 4.0, 1e-12);
}

TEST(Newton, ReportsNonConvergence) {
  // x^2 + 1 = 0 has no real root.
  const ResidualFn res = [](std::span<const double> x, Vector& r) { r = {x[0] * x[0] + 1.0}; };
  NewtonOptions opts;
  opts.max_iterations = 5;
  try {
    newton_solve(res, square_jacobian(), {0.5}, opts);
    FAIL() << "expected NewtonFailure";
  } catch (const NewtonFailure& e) {
    EXPECT_EQ(e.report().iterations, 5);
    EXPECT_FALSE(e.report().converged);
  }
}

TEST(Newton, SingularJacobianIsAFailure) {
  EXPECT_THROW(newton_solve(square_residual(), square_jacobian(), {0.0}), NewtonFailure);
}

}  // namespace
}  // namespace kvbf
