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

#include <gtest/gtest.h>

#include <omp.h>

#include "rmot/instances.hpp"
#include "rmot/kernels.hpp"

using namespace rmot;
namespace k = rmot::kernels;

namespace {

// Large enough to span several reduction blocks.
DiscreteProblem problem() { return instances::random_problem(300, 7, 3, 17); }

Vector potential() { return Vector{{0.2, -0.1, 0.4, 0.0, -0.3, 0.15, 0.05}}; }

}  // namespace

TEST(Kernels, OmpMatchesSerial) {
  const DiscreteProblem p = problem();
  const Vector v = potential();
  RowMatrix Cs, Co;
  k::serial::cost_matrix(p.mu.points(), p.nu.points(), p.cost, Cs);
  k::omp::cost_matrix(p.mu.points(), p.nu.points(), p.cost, Co);
  EXPECT_EQ(Cs, Co);

  for (double eps : {0.0, 0.05, 1.0}) {
    const auto& mu = p.mu.weights();
    const auto& nu = p.nu.weights();
    const auto& lnu = p.nu.log_weights();
    EXPECT_NEAR(k::serial::expected_objective(Cs, mu, v, nu, lnu, eps),
                k::omp::expected_objective(Cs, mu, v, nu, lnu, eps), 1e-13);
    Vector as, ao;
    k::serial::expected_assignment(Cs, mu, v, lnu, eps, as);
    k::omp::expected_assignment(Cs, mu, v, lnu, eps, ao);
    EXPECT_LE((as - ao).norm(), 1e-13);
    if (eps > 0.0) {
      Matrix hs, ho;
      k::serial::expected_hessian(Cs, mu, v, lnu, eps, hs);
      k::omp::expected_hessian(Cs, mu, v, lnu, eps, ho);
      EXPECT_LE((hs - ho).norm(), 1e-11);
      Vector rs, ro, cs, co;
      k::serial::row_logsumexp(Cs, v, lnu, eps, rs);
      k::omp::row_logsumexp(Cs, v, lnu, eps, ro);
      EXPECT_LE((rs - ro).norm(), 1e-12);
      const Vector f = Vector::LinSpaced(Cs.rows(), -0.2, 0.3);
      k::serial::col_logsumexp(Cs, f, p.mu.log_weights(), eps, cs);
      k::omp::col_logsumexp(Cs, f, p.mu.log_weights(), eps, co);
      EXPECT_LE((cs - co).norm(), 1e-12);
    }
  }

  const RowMatrix K = (-Cs.array()).exp().matrix();
  Vector ms, mo, ts, to;
  k::serial::kernel_matvec(K, p.nu.weights(), ms);
  k::omp::kernel_matvec(K, p.nu.weights(), mo);
  EXPECT_LE((ms - mo).norm(), 1e-14);
  k::serial::kernel_matvec_transpose(K, p.mu.weights(), ts);
  k::omp::kernel_matvec_transpose(K, p.mu.weights(), to);
  EXPECT_LE((ts - to).norm(), 1e-14);

  std::vector<Index> cells_s, cells_o;
  k::serial::assign_cells(p.mu.points(), p.nu.points(), v, p.cost, cells_s);
  k::omp::assign_cells(p.mu.points(), p.nu.points(), v, p.cost, cells_o);
  EXPECT_EQ(cells_s, cells_o);
}

TEST(Kernels, OmpReductionsIndependentOfThreadCount) {
  const DiscreteProblem p = problem();
  const Vector v = potential();
  auto evaluate = [&](int threads) {
    omp_set_num_threads(threads);
    Vector a;
    k::omp::expected_assignment(p.C.values, p.mu.weights(), v, p.nu.log_weights(), 0.1, a);
    Vector out(a.size() + 1);
    out << a, k::omp::expected_objective(p.C.values, p.mu.weights(), v, p.nu.weights(),
                                         p.nu.log_weights(), 0.1);
    return out;
  };
  const Vector one = evaluate(1);
  const Vector four = evaluate(4);
  omp_set_num_threads(omp_get_num_procs());
  EXPECT_EQ(one, four);
}

TEST(Kernels, SoftAssignmentRowMatchesDirectFormula) {
  const double c[] = {0.3, 0.1, 0.7};
  const double v[] = {0.0, 0.2, -0.1};
  const double lnu[] = {std::log(0.2), std::log(0.5), std::log(0.3)};
  double pi[3];
  const double eps = 0.4;
  const double log_z = k::soft_assignment_row(c, v, lnu, 3, eps, pi);
  double z = 0.0;
  for (int j = 0; j < 3; ++j) z += std::exp(lnu[j] + (v[j] - c[j]) / eps);
  EXPECT_NEAR(log_z, std::log(z), 1e-15);
  for (int j = 0; j < 3; ++j) EXPECT_NEAR(pi[j], std::exp(lnu[j] + (v[j] - c[j]) / eps) / z, 1e-15);
  EXPECT_NEAR(k::log_partition_row(c, v, lnu, 3, eps), log_z, 1e-15);
}
