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

#include "rmot/semidual.hpp"

#include <cmath>
#include <string>

#include "rmot/error.hpp"
#include "rmot/kernels.hpp"

namespace rmot {

namespace {

constexpr double kZeroMeanTolerance = 1e-9;

void require_positive_eps(double eps) {
  require(eps > 0.0, ErrorCode::NonPositiveEpsilon,
          "epsilon must be positive, got " + std::to_string(eps));
}

void require_nonnegative_eps(double eps) {
  require(eps >= 0.0, ErrorCode::NegativeEpsilon,
          "epsilon must be nonnegative, got " + std::to_string(eps));
}

void require_potential_size(const DualPotential& v, const DiscreteMeasure& nu) {
  require(v.size() == nu.size(), ErrorCode::DimensionMismatch,
          "potential of size " + std::to_string(v.size()) + " for " +
              std::to_string(nu.size()) + " target atoms");
}

Vector cost_row(ConstVectorRef x, const DiscreteMeasure& nu, const CostSpec& cost) {
  Vector row(nu.size());
  cost.row(x, nu.points(), row);
  return row;
}

}  // namespace

// ---------------------------------------------------------------------------
// DualPotential

DualPotential::DualPotential(Vector values, bool zero_mean)
    : v_(std::move(values)), zero_mean_(zero_mean) {
  if (zero_mean_) v_.array() -= v_.mean();
}

DualPotential DualPotential::unit_direction(Index J) {
  return DualPotential(Vector::Constant(J, 1.0 / std::sqrt(static_cast<double>(J))));
}

void DualPotential::enforce_zero_mean() {
  if (!zero_mean_) return;
  if (std::abs(v_.sum()) > kZeroMeanTolerance * std::max(1.0, v_.norm())) v_.array() -= v_.mean();
}

DualPotential DualPotential::shifted(double t) const {
  return DualPotential((v_.array() + t).matrix());
}

DualPotential DualPotential::centered() const { return DualPotential(v_, true); }

double unit_direction_coordinate(const Vector& v) {
  return v.sum() / std::sqrt(static_cast<double>(v.size()));
}

// ---------------------------------------------------------------------------
// Per-sample quantities

double h_from_costs(ConstVectorRef costs, const Vector& v, const DiscreteMeasure& nu,
                    double eps) {
  const Index J = nu.size();
  if (eps > 0.0) {
    return v.dot(nu.weights()) -
           eps * kernels::log_partition_row(costs.data(), v.data(), nu.log_weights().data(), J,
                                            eps) -
           eps;
  }
  const Index j = kernels::argmin_reduced_cost(costs.data(), v.data(), J);
  return v.dot(nu.weights()) + (costs[j] - v[j]);
}

double assignment_and_h_from_costs(ConstVectorRef costs, const Vector& v,
                                   const DiscreteMeasure& nu, double eps, Eigen::Ref<Vector> pi) {
  const double log_z = kernels::soft_assignment_row(costs.data(), v.data(),
                                                    nu.log_weights().data(), nu.size(), eps,
                                                    pi.data());
  return v.dot(nu.weights()) - eps * log_z - eps;
}

SoftAssignment soft_assignment(ConstVectorRef x, const DualPotential& v,
                               const DiscreteMeasure& nu, const CostSpec& cost, double eps) {
  require_positive_eps(eps);
  require_potential_size(v, nu);
  const Vector c = cost_row(x, nu, cost);
  SoftAssignment out{Vector(nu.size())};
  kernels::soft_assignment_row(c.data(), v.values().data(), nu.log_weights().data(), nu.size(),
                               eps, out.pi.data());
  return out;
}

double h_eps(ConstVectorRef x, const DualPotential& v, const DiscreteMeasure& nu,
             const CostSpec& cost, double eps) {
  require_nonnegative_eps(eps);
  require_potential_size(v, nu);
  return h_from_costs(cost_row(x, nu, cost), v.values(), nu, eps);
}

Vector grad_h(ConstVectorRef x, const DualPotential& v, const DiscreteMeasure& nu,
              const CostSpec& cost, double eps) {
  return nu.weights() - soft_assignment(x, v, nu, cost, eps).pi;
}

Matrix hessian_h(ConstVectorRef x, const DualPotential& v, const DiscreteMeasure& nu,
                 const CostSpec& cost, double eps) {
  const Vector pi = soft_assignment(x, v, nu, cost, eps).pi;
  Matrix out = pi * pi.transpose();
  out.diagonal() -= pi;
  return out / eps;
}

Vector supergrad_h0(ConstVectorRef x, const DualPotential& v, const DiscreteMeasure& nu,
                    const CostSpec& cost) {
  require_potential_size(v, nu);
  const Vector c = cost_row(x, nu, cost);
  Vector g = nu.weights();
  g[kernels::argmin_reduced_cost(c.data(), v.values().data(), nu.size())] -= 1.0;
  return g;
}

// ---------------------------------------------------------------------------
// Full expectations over a discrete source

DiscreteProblem DiscreteProblem::make(DiscreteMeasure mu, DiscreteMeasure nu, CostSpec cost) {
  CostMatrix C = cost_matrix(mu, nu, cost);
  return DiscreteProblem{std::move(mu), std::move(nu), std::move(cost), std::move(C)};
}

double exact_H(const DiscreteProblem& p, const DualPotential& v, double eps) {
  require_nonnegative_eps(eps);
  require_potential_size(v, p.nu);
  return kernels::omp::expected_objective(p.C.values, p.mu.weights(), v.values(),
                                          p.nu.weights(), p.nu.log_weights(), eps);
}

Vector exact_grad_H(const DiscreteProblem& p, const DualPotential& v, double eps) {
  require_nonnegative_eps(eps);
  require_potential_size(v, p.nu);
  Vector expected_pi;
  kernels::omp::expected_assignment(p.C.values, p.mu.weights(), v.values(), p.nu.log_weights(),
                                    eps, expected_pi);
  return p.nu.weights() - expected_pi;
}

Matrix exact_hessian_H(const DiscreteProblem& p, const DualPotential& v, double eps) {
  require_positive_eps(eps);
  require_potential_size(v, p.nu);
  Matrix out;
  kernels::omp::expected_hessian(p.C.values, p.mu.weights(), v.values(), p.nu.log_weights(), eps,
                                 out);
  return out;
}

double exact_H(const DiscreteMeasure& mu, const DualPotential& v, const DiscreteMeasure& nu,
               const CostSpec& cost, double eps) {
  return exact_H(DiscreteProblem::make(mu, nu, cost), v, eps);
}

Vector exact_grad_H(const DiscreteMeasure& mu, const DualPotential& v, const DiscreteMeasure& nu,
                    const CostSpec& cost, double eps) {
  return exact_grad_H(DiscreteProblem::make(mu, nu, cost), v, eps);
}

Matrix exact_hessian_H(const DiscreteMeasure& mu, const DualPotential& v,
                       const DiscreteMeasure& nu, const CostSpec& cost, double eps) {
  return exact_hessian_H(DiscreteProblem::make(mu, nu, cost), v, eps);
}

}  // namespace rmot
