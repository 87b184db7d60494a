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


#include <benchmark/benchmark.h>

#include <cmath>

#include "kvbf/assembly.hpp"
#include "kvbf/mms.hpp"
#include "kvbf/solver.hpp"
#include "kvbf/timeloop.hpp"

namespace kvbf {
namespace {

ElementFamily family_arg(const benchmark::State& state) {
  return state.range(1) == 0 ? ElementFamily::TaylorHood : ElementFamily::Mini;
}

Problem example1_problem() {
  const ExactSolution ex = example1_solution();
  Problem p;
  p.forcing = forcing_from_exact(ex, p.params);
  p.initial_velocity = ex.u;
  p.boundary_velocity = ex.u;
  p.dirichlet_sides = {BoundaryTag::Left, BoundaryTag::Right, BoundaryTag::Top,
                       BoundaryTag::Bottom};
  return p;
}

void BM_LinearBlocks(benchmark::State& state) {
  const Mesh mesh = build_structured({0, 0, 1, 1}, static_cast<int>(state.range(0)));
  const SpaceSet spaces(mesh, family_arg(state));
  for (auto _ : state) {
    benchmark::DoNotOptimize(assemble_linear_blocks(mesh, spaces, ModelParams{}));
  }
  state.counters["dofs"] = spaces.total_dofs();
}
BENCHMARK(BM_LinearBlocks)->Args({16, 0})->Args({32, 0})->Args({32, 1})->Unit(benchmark::kMillisecond);

void BM_NonlinearWithJacobian(benchmark::State& state) {
  const Mesh mesh = build_structured({0, 0, 1, 1}, static_cast<int>(state.range(0)));
  const SpaceSet spaces(mesh, family_arg(state));
  const Assembler assembler(mesh, spaces, ModelParams{}, static_cast<int>(state.range(2)));
  const Vector u = interpolate_velocity(spaces, example1_solution().u, 0.0);
  Vector r;
  SparseMatrix jac = assembler.velocity_pattern();
  for (auto _ : state) {
    assembler.nonlinear(u, NonlinearTerm::Both, r, &jac);
    benchmark::DoNotOptimize(r.data());
  }
}
BENCHMARK(BM_NonlinearWithJacobian)
    ->Args({32, 0, 1})
    ->Args({32, 1, 1})
    ->Args({64, 0, 1})
    ->Args({64, 0, 2})
    ->Unit(benchmark::kMillisecond);

void BM_Factorize(benchmark::State& state) {
  const Mesh mesh = build_structured({0, 0, 1, 1}, static_cast<int>(state.range(0)));
  const SpaceSet spaces(mesh, family_arg(state));
  TransientSolver solver(mesh, spaces, example1_problem());
  const SystemState s0 = solver.initial_state();
  SparseMatrix jac;
  solver.jacobian(solver.pack(s0), 1e4, 1e4, jac);
  Vector rhs(solver.layout().size(), 0.0);
  apply_dirichlet(jac, rhs, solver.dirichlet(), Vector(solver.dirichlet().size(), 0.0));
  SparseDirectSolver lu;
  for (auto _ : state) {
    lu.factorize(jac);
    benchmark::DoNotOptimize(lu.solve(rhs).data());
  }
  state.counters["unknowns"] = solver.layout().size();
  state.counters["nnz"] = jac.nnz();
}
BENCHMARK(BM_Factorize)->Args({16, 0})->Args({32, 0})->Args({32, 1})->Unit(benchmark::kMillisecond);

void BM_TimeStep(benchmark::State& state) {
  const Mesh mesh = build_structured({0, 0, 1, 1}, static_cast<int>(state.range(0)));
  const SpaceSet spaces(mesh, family_arg(state));
  TransientSolver solver(mesh, spaces, example1_problem());
  const SystemState s0 = solver.initial_state();
  for (auto _ : state) {
    auto [s1, report] = solver.step(s0, 1e-4);
    benchmark::DoNotOptimize(s1.u.data());
    state.counters["newton"] = report.iterations;
  }
}
BENCHMARK(BM_TimeStep)->Args({16, 0})->Args({32, 0})->Args({32, 1})->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace kvbf

BENCHMARK_MAIN();
