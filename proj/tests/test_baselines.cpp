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

#include <cmath>

#include "rmot/baselines.hpp"
#include "rmot/instances.hpp"
#include "test_support.hpp"

using namespace rmot;

namespace {

DiscreteProblem two_by_two(double m1, double n1, RowMatrix C) {
  RowMatrix pts{{0.0}, {1.0}};
  DiscreteMeasure mu(pts, Vector{{m1, 1 - m1}});
  DiscreteMeasure nu(pts, Vector{{n1, 1 - n1}});
  CostMatrix cm{std::move(C)};
  return DiscreteProblem{std::move(mu), std::move(nu), CostSpec::euclidean(), std::move(cm)};
}

}  // namespace

TEST(Sinkhorn, DiracToItselfIsMinusEps) {
  const DiscreteMeasure d = DiscreteMeasure::uniform(RowMatrix{{0.3, 0.4}});
  const CostMatrix C = cost_matrix(d, d, CostSpec::euclidean());
  for (double eps : {0.01, 1.0}) {
    const TransportPlan plan = sinkhorn(d, d, C, eps);
    EXPECT_NEAR(plan.value, -eps, 1e-14);
    EXPECT_NEAR(plan.matrix(0, 0), 1.0, 1e-14);
  }
}

TEST(Sinkhorn, MarginalsWithinTolerance) {
  for (double eps : {0.02, 0.3}) {
    const DiscreteProblem p = instances::random_problem(9, 6, 2, 5);
    const TransportPlan plan = sinkhorn(p.mu, p.nu, p.C, eps, 1e-10);
    EXPECT_LE((plan.matrix.rowwise().sum() - p.mu.weights()).lpNorm<1>(), 1e-10);
    EXPECT_LE((plan.matrix.colwise().sum().transpose() - p.nu.weights()).lpNorm<1>(), 1e-10);
    EXPECT_LE(plan.violation, 1e-10);
  }
}

TEST(Sinkhorn, Errors) {
  const DiscreteProblem p = instances::random_problem(5, 5, 2, 6);
  EXPECT_RMOT_ERROR(sinkhorn(p.mu, p.nu, p.C, 0.0), ErrorCode::NonPositiveEpsilon);
  try {
    sinkhorn(p.mu, p.nu, p.C, 0.01, 1e-12, 2);
    FAIL() << "expected NotConverged";
  } catch (const NotConverged& e) {
    EXPECT_GT(e.last_violation(), 1e-12);
  }
}

TEST(BruteForce2x2, Examples) {
  const DiscreteProblem id = two_by_two(0.5, 0.5, RowMatrix{{0, 1}, {1, 0}});
  EXPECT_NEAR(brute_force_primal_2x2(id.mu, id.nu, id.C, 0.0), 0.0, 1e-9);
  const DiscreteProblem anti = two_by_two(0.5, 0.5, RowMatrix{{1, 0}, {0, 1}});
  EXPECT_NEAR(brute_force_primal_2x2(anti.mu, anti.nu, anti.C, 0.0), 0.0, 1e-9);
  const DiscreteProblem zero = two_by_two(0.5, 0.5, RowMatrix::Zero(2, 2));
  EXPECT_NEAR(brute_force_primal_2x2(zero.mu, zero.nu, zero.C, 1.0), -1.0, 1e-12);
  const DiscreteProblem big = instances::random_problem(3, 2, 2, 1);
  EXPECT_RMOT_ERROR(brute_force_primal_2x2(big.mu, big.nu, big.C, 0.1), ErrorCode::WrongSize);
}

TEST(BruteForce2x2, AgreesWithSinkhorn) {
  const DiscreteProblem p = two_by_two(0.3, 0.6, RowMatrix{{0.2, 0.9}, {0.5, 0.1}});
  EXPECT_NEAR(sinkhorn(p.mu, p.nu, p.C, 0.5).value, brute_force_primal_2x2(p.mu, p.nu, p.C, 0.5),
              1e-6);
  EXPECT_NEAR(greenkhorn(p.mu, p.nu, p.C, 0.5).value, brute_force_primal_2x2(p.mu, p.nu, p.C, 0.5),
              1e-6);
}

TEST(Greenkhorn, BalancedStartConvergesImmediately) {
  const DiscreteMeasure d = DiscreteMeasure::uniform(RowMatrix{{0.1, 0.1}});
  const CostMatrix C = cost_matrix(d, d, CostSpec::euclidean());
  EXPECT_LE(greenkhorn(d, d, C, 0.1).iterations, 1);
  const TransportPlan s = stochastic_greenkhorn(d, d, C, 0.1, 1e-9, 100, 3);
  EXPECT_EQ(s.iterations, 0);
  EXPECT_EQ(s.work, 0);
}

// Each update touches one row (J entries) or one column (I entries).
TEST(Greenkhorn, LinearWorkPerIteration) {
  const DiscreteProblem p = instances::random_problem(10, 7, 2, 8);
  const TransportPlan g = greenkhorn(p.mu, p.nu, p.C, 0.1);
  EXPECT_GT(g.iterations, 0);
  EXPECT_LE(g.work, g.iterations * std::max<std::int64_t>(10, 7));
  EXPECT_GE(g.work, g.iterations * std::min<std::int64_t>(10, 7));
}

TEST(Greenkhorn, AgreesWithSinkhornOnRandomInstances) {
  for (int k = 0; k < 20; ++k) {
    const Index I = 2 + k % 9;
    const Index J = 2 + (k * 3) % 9;
    const double eps = k % 2 == 0 ? 0.1 : 1.0;
    const DiscreteProblem p = instances::random_problem(I, J, 2, 100 + k);
    const double s = sinkhorn(p.mu, p.nu, p.C, eps).value;
    EXPECT_NEAR(greenkhorn(p.mu, p.nu, p.C, eps).value, s, 1e-8);
    EXPECT_NEAR(stochastic_greenkhorn(p.mu, p.nu, p.C, eps, 1e-9, 10'000'000, k).value, s, 1e-8);
    EXPECT_NEAR(full_gradient_ascent(p, eps).value, s, 1e-6);
  }
}

TEST(StochasticGreenkhorn, SeedReproducibleAndAveragesToSinkhorn) {
  const DiscreteProblem p = two_by_two(0.4, 0.7, RowMatrix{{0.3, 0.8}, {0.6, 0.2}});
  const TransportPlan a = stochastic_greenkhorn(p.mu, p.nu, p.C, 0.5, 1e-9, 1'000'000, 12);
  const TransportPlan b = stochastic_greenkhorn(p.mu, p.nu, p.C, 0.5, 1e-9, 1'000'000, 12);
  EXPECT_EQ(a.iterations, b.iterations);
  EXPECT_EQ(a.matrix, b.matrix);
  double mean = 0.0;
  for (std::uint64_t s = 0; s < 5; ++s)
    mean += stochastic_greenkhorn(p.mu, p.nu, p.C, 0.5, 1e-9, 1'000'000, s).value / 5.0;
  EXPECT_NEAR(mean, sinkhorn(p.mu, p.nu, p.C, 0.5).value, 1e-5);
}

TEST(FullGradientAscent, SingleAtomAndStoppingRule) {
  const DiscreteProblem one = instances::random_problem(6, 1, 2, 4);
  const AscentResult r = full_gradient_ascent(one, 0.3);
  EXPECT_EQ(r.v.values(), Vector::Zero(1));
  EXPECT_NEAR(r.value, one.mu.weights().dot(one.C.values.col(0)) - 0.3, 1e-14);

  const DiscreteProblem p = instances::random_problem(8, 4, 2, 14);
  const AscentResult s = full_gradient_ascent(p, 0.05, 1e-10);
  EXPECT_LE(exact_grad_H(p, s.v, 0.05).norm(), 1e-10);
  EXPECT_NEAR(s.v.values().sum(), 0.0, 1e-12);
}

// nu = E_mu[pi(X, v*)] with v* read off the Sinkhorn scalings.
TEST(SemidualPotential, OptimalityConsistency) {
  const DiscreteProblem p = instances::random_problem(8, 5, 2, 31);
  for (double eps : {0.03, 0.4}) {
    const TransportPlan plan = sinkhorn(p.mu, p.nu, p.C, eps);
    const DualPotential v = semidual_potential(plan, p.nu, eps);
    EXPECT_LE(exact_grad_H(p, v, eps).norm(), 1e-6);
    EXPECT_NEAR(exact_H(p, v, eps), plan.value, 1e-6);
    EXPECT_LE((v.values() - full_gradient_ascent(p, eps).v.values()).norm(), 1e-6);
  }
}

TEST(Sinkhorn, SmallEpsApproachesAssignmentValue) {
  const DiscreteProblem p = instances::four_by_four();
  const double oracle = instances::permutation_oracle(p.C.values);
  double previous = std::numeric_limits<double>::infinity();
  for (double eps : {0.5, 0.1, 0.05, 0.01}) {
    const double gap = std::abs(sinkhorn(p.mu, p.nu, p.C, eps).value - oracle);
    EXPECT_LT(gap, previous);
    previous = gap;
  }
  EXPECT_LE(previous, 0.05);
}

TEST(Progress, ReportsAtStride) {
  const DiscreteProblem p = instances::random_problem(6, 4, 2, 2);
  std::vector<std::int64_t> seen;
  Progress progress{2, [&](std::int64_t it, double, double) { seen.push_back(it); }};
  sinkhorn(p.mu, p.nu, p.C, 0.1, 1e-9, 1000, &progress);
  ASSERT_FALSE(seen.empty());
  for (auto it : seen) EXPECT_EQ(it % 2, 0);
}
