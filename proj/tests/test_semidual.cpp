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

#include <Eigen/Eigenvalues>

#include "rmot/instances.hpp"
#include "rmot/semidual.hpp"
#include "test_support.hpp"

using namespace rmot;

namespace {

struct Fixture {
  DiscreteMeasure nu = discrete_from_points(regular_grid(2, 2), Vector{{1.0, 2.0, 3.0, 4.0}});
  CostSpec cost = CostSpec::euclidean();
  Vector x = Vector{{0.1, 0.8}};
  DualPotential v = DualPotential(Vector{{0.3, -0.2, 0.05, 0.4}});
};

}  // namespace

TEST(DualPotential, ZeroMeanConstructionAndShift) {
  const DualPotential v(Vector{{1.0, 2.0, 3.0}}, true);
  EXPECT_NEAR(v.values().sum(), 0.0, 1e-15);
  EXPECT_NEAR(unit_direction_coordinate(DualPotential::unit_direction(4).values()), 1.0, 1e-15);
  const DualPotential s = v.shifted(2.0);
  EXPECT_FALSE(s.zero_mean());
  EXPECT_NEAR(s.centered().values().sum(), 0.0, 1e-14);
}

TEST(SemiDual, SingleAtomClosedForm) {
  const DiscreteMeasure nu = DiscreteMeasure::uniform(RowMatrix{{0.5, 0.5}});
  const Vector x{{0.5, 0.9}};
  for (double eps : {0.01, 1.0, 10.0})
    EXPECT_NEAR(h_eps(x, DualPotential(Vector{{0.7}}), nu, CostSpec::euclidean(), eps),
                0.4 - eps, 1e-14);
}

TEST(SemiDual, HardMinBranch) {
  Fixture f;
  Vector c(4);
  f.cost.row(f.x, f.nu.points(), c);
  const double expected = f.v.values().dot(f.nu.weights()) + (c - f.v.values()).minCoeff();
  EXPECT_NEAR(h_eps(f.x, f.v, f.nu, f.cost, 0.0), expected, 1e-15);
  EXPECT_RMOT_ERROR(h_eps(f.x, f.v, f.nu, f.cost, -0.1), ErrorCode::NegativeEpsilon);
}

TEST(SemiDual, ApproachesHardMinAsEpsShrinks) {
  Fixture f;
  const double h0 = h_eps(f.x, f.v, f.nu, f.cost, 0.0);
  // |h_eps - h_0| <= eps (1 + log(1 / nu_min)) for the log-sum-exp form.
  for (double eps : {1e-1, 1e-2, 1e-3})
    EXPECT_LE(std::abs(h_eps(f.x, f.v, f.nu, f.cost, eps) - h0),
              eps * (1.0 + std::log(1.0 / f.nu.min_weight())));
}

TEST(SemiDual, SoftAssignmentIsADistribution) {
  Fixture f;
  const Vector pi = soft_assignment(f.x, f.v, f.nu, f.cost, 0.05).pi;
  EXPECT_NEAR(pi.sum(), 1.0, 1e-15);
  EXPECT_GE(pi.minCoeff(), 0.0);
  EXPECT_NEAR(grad_h(f.x, f.v, f.nu, f.cost, 0.05).sum(), 0.0, 1e-15);
  EXPECT_RMOT_ERROR(soft_assignment(f.x, f.v, f.nu, f.cost, 0.0), ErrorCode::NonPositiveEpsilon);
}

TEST(SemiDual, StableForExtremeScales) {
  Fixture f;
  const DualPotential big(Vector{{800.0, -800.0, 0.0, 1.0}});
  const Vector pi = soft_assignment(f.x, big, f.nu, f.cost, 1e-3).pi;
  EXPECT_TRUE(pi.allFinite());
  EXPECT_NEAR(pi[0], 1.0, 1e-15);
  EXPECT_TRUE(std::isfinite(h_eps(f.x, big, f.nu, f.cost, 1e-3)));
}

TEST(SemiDual, InvariantUnderCommonShift) {
  Fixture f;
  for (double t : {-3.0, 0.7, 42.0})
    EXPECT_NEAR(h_eps(f.x, f.v.shifted(t), f.nu, f.cost, 0.2), h_eps(f.x, f.v, f.nu, f.cost, 0.2),
                1e-12);
}

TEST(SemiDual, HessianSymmetricNegativeWithOnesInKernel) {
  Fixture f;
  const Matrix H = hessian_h(f.x, f.v, f.nu, f.cost, 0.3);
  EXPECT_LE((H - H.transpose()).norm(), 1e-15);
  EXPECT_LE((H * Vector::Ones(4)).norm(), 1e-14);
  Eigen::SelfAdjointEigenSolver<Matrix> es(H);
  EXPECT_LE(es.eigenvalues().maxCoeff(), 1e-14);
}

TEST(SemiDual, SupergradientTieBreaksToSmallestIndex) {
  const DiscreteMeasure nu = DiscreteMeasure::uniform(RowMatrix{{0.0, 0.0}, {1.0, 0.0}});
  const Vector x{{0.5, 0.0}};
  const Vector g = supergrad_h0(x, DualPotential::zeros(2), nu, CostSpec::euclidean());
  EXPECT_DOUBLE_EQ(g[0], -0.5);
  EXPECT_DOUBLE_EQ(g[1], 0.5);
}

TEST(ExactSemiDual, AveragesPerSampleQuantities) {
  const DiscreteProblem p = instances::random_problem(7, 4, 2, 3);
  const DualPotential v(Vector{{0.1, -0.3, 0.2, 0.0}});
  for (double eps : {0.0, 0.2}) {
    double H = 0.0;
    Vector G = Vector::Zero(4);
    for (Index i = 0; i < p.mu.size(); ++i) {
      const Vector x = p.mu.point(i);
      H += p.mu.weight(i) * h_eps(x, v, p.nu, p.cost, eps);
      G += p.mu.weight(i) *
           (eps > 0 ? grad_h(x, v, p.nu, p.cost, eps) : supergrad_h0(x, v, p.nu, p.cost));
    }
    EXPECT_NEAR(exact_H(p, v, eps), H, 1e-14);
    EXPECT_LE((exact_grad_H(p, v, eps) - G).norm(), 1e-14);
  }
  Matrix A = Matrix::Zero(4, 4);
  for (Index i = 0; i < p.mu.size(); ++i)
    A += p.mu.weight(i) * hessian_h(p.mu.point(i), v, p.nu, p.cost, 0.2);
  EXPECT_LE((exact_hessian_H(p, v, 0.2) - A).norm(), 1e-13);
  EXPECT_RMOT_ERROR(exact_hessian_H(p, v, 0.0), ErrorCode::NonPositiveEpsilon);
  EXPECT_RMOT_ERROR(exact_H(p, DualPotential::zeros(3), 0.1), ErrorCode::DimensionMismatch);
}
