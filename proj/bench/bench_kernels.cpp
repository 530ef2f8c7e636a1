// Copyright 2026 The rmot Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Serial reference kernels against their OpenMP counterparts. Set
// OMP_NUM_THREADS to vary the thread count.

#include <benchmark/benchmark.h>

#include "rmot/instances.hpp"
#include "rmot/kernels.hpp"

namespace {

using namespace rmot;

struct Fixture {
  DiscreteProblem problem;
  Vector v;
  Vector log_nu;

  explicit Fixture(Index I, Index J)
      : problem(instances::random_problem(I, J, 2, 42)),
        v(Vector::LinSpaced(J, -0.1, 0.1)),
        log_nu(problem.nu.weights().array().log().matrix()) {}
};

template <bool Parallel>
void BM_CostMatrix(benchmark::State& state) {
  const Fixture f(state.range(0), state.range(1));
  RowMatrix out;
  for (auto _ : state) {
    if constexpr (Parallel)
      kernels::omp::cost_matrix(f.problem.mu.points(), f.problem.nu.points(), f.problem.cost, out);
    else
      kernels::serial::cost_matrix(f.problem.mu.points(), f.problem.nu.points(), f.problem.cost,
                                   out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(1));
}

template <bool Parallel>
void BM_ExpectedObjective(benchmark::State& state) {
  const Fixture f(state.range(0), state.range(1));
  const auto& C = f.problem.C.values;
  for (auto _ : state) {
    double h = Parallel ? kernels::omp::expected_objective(C, f.problem.mu.weights(), f.v,
                                                           f.problem.nu.weights(), f.log_nu, 0.1)
                        : kernels::serial::expected_objective(C, f.problem.mu.weights(), f.v,
                                                              f.problem.nu.weights(), f.log_nu, 0.1);
    benchmark::DoNotOptimize(h);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(1));
}

template <bool Parallel>
void BM_ExpectedHessian(benchmark::State& state) {
  const Fixture f(state.range(0), state.range(1));
  Matrix out;
  for (auto _ : state) {
    if constexpr (Parallel)
      kernels::omp::expected_hessian(f.problem.C.values, f.problem.mu.weights(), f.v, f.log_nu,
                                     0.1, out);
    else
      kernels::serial::expected_hessian(f.problem.C.values, f.problem.mu.weights(), f.v,
                                        f.log_nu, 0.1, out);
    benchmark::DoNotOptimize(out.data());
  }
}

template <bool Parallel>
void BM_RowLogSumExp(benchmark::State& state) {
  const Fixture f(state.range(0), state.range(1));
  const Vector g = Vector::Zero(state.range(1));
  Vector out;
  for (auto _ : state) {
    if constexpr (Parallel)
      kernels::omp::row_logsumexp(f.problem.C.values, g, f.log_nu, 0.05, out);
    else
      kernels::serial::row_logsumexp(f.problem.C.values, g, f.log_nu, 0.05, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(1));
}

template <bool Parallel>
void BM_AssignCells(benchmark::State& state) {
  const Fixture f(state.range(0), state.range(1));
  std::vector<Index> out;
  for (auto _ : state) {
    if constexpr (Parallel)
      kernels::omp::assign_cells(f.problem.mu.points(), f.problem.nu.points(), f.v,
                                 f.problem.cost, out);
    else
      kernels::serial::assign_cells(f.problem.mu.points(), f.problem.nu.points(), f.v,
                                    f.problem.cost, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void sizes(benchmark::internal::Benchmark* b) {
  for (auto [I, J] : {std::pair{256, 16}, {4096, 64}, {16384, 128}}) b->Args({I, J});
}

}  // namespace

BENCHMARK(BM_CostMatrix<false>)->Name("cost_matrix/serial")->Apply(sizes);
BENCHMARK(BM_CostMatrix<true>)->Name("cost_matrix/omp")->Apply(sizes);
BENCHMARK(BM_ExpectedObjective<false>)->Name("expected_objective/serial")->Apply(sizes);
BENCHMARK(BM_ExpectedObjective<true>)->Name("expected_objective/omp")->Apply(sizes);
BENCHMARK(BM_ExpectedHessian<false>)->Name("expected_hessian/serial")->Apply(sizes);
BENCHMARK(BM_ExpectedHessian<true>)->Name("expected_hessian/omp")->Apply(sizes);
BENCHMARK(BM_RowLogSumExp<false>)->Name("row_logsumexp/serial")->Apply(sizes);
BENCHMARK(BM_RowLogSumExp<true>)->Name("row_logsumexp/omp")->Apply(sizes);
BENCHMARK(BM_AssignCells<false>)->Name("assign_cells/serial")->Apply(sizes);
BENCHMARK(BM_AssignCells<true>)->Name("assign_cells/omp")->Apply(sizes);

BENCHMARK_MAIN();
