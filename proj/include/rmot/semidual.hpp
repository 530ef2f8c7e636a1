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

#ifndef RMOT_SEMIDUAL_HPP
#define RMOT_SEMIDUAL_HPP

#include "rmot/measures.hpp"

namespace rmot {

/// Dual potential v over the J target atoms.
///
/// With zero_mean set the potential lives on the hyperplane <v, 1_J> = 0:
/// construction re-centres it, and enforce_zero_mean() removes the drift
/// that accumulates in floating point once |sum v| > 1e-9 max(1, |v|).
class DualPotential {
 public:
  explicit DualPotential(Vector values, bool zero_mean = false);

  static DualPotential zeros(Index J) { return DualPotential(Vector::Zero(J), true); }
  /// The unit vector 1_J / sqrt(J).
  static DualPotential unit_direction(Index J);

  const Vector& values() const noexcept { return v_; }
  Vector& values() noexcept { return v_; }
  Index size() const noexcept { return v_.size(); }
  bool zero_mean() const noexcept { return zero_mean_; }
  double operator[](Index j) const { return v_[j]; }

  void enforce_zero_mean();
  /// v + t 1_J (no longer flagged zero-mean).
  DualPotential shifted(double t) const;
  /// Copy projected onto the zero-mean hyperplane.
  DualPotential centered() const;

 private:
  Vector v_;
  bool zero_mean_;
};

/// <v, 1_J / sqrt(J)>.
double unit_direction_coordinate(const Vector& v);

/// pi(x, v), the softmax assignment of a source point over the target atoms.
struct SoftAssignment {
  Vector pi;
};

SoftAssignment soft_assignment(ConstVectorRef x, const DualPotential& v,
                               const DiscreteMeasure& nu, const CostSpec& cost, double eps);

/// h_eps(x, v); eps = 0 is the hard c-transform branch.
double h_eps(ConstVectorRef x, const DualPotential& v, const DiscreteMeasure& nu,
             const CostSpec& cost, double eps);

/// nu - pi(x, v).
Vector grad_h(ConstVectorRef x, const DualPotential& v, const DiscreteMeasure& nu,
              const CostSpec& cost, double eps);

/// (1/eps)(pi pi^T - diag(pi)).
Matrix hessian_h(ConstVectorRef x, const DualPotential& v, const DiscreteMeasure& nu,
                 const CostSpec& cost, double eps);

/// nu - e_{j*} with j* the smallest index minimizing c(x, y_j) - v_j.
Vector supergrad_h0(ConstVectorRef x, const DualPotential& v, const DiscreteMeasure& nu,
                    const CostSpec& cost);

// Same quantities from a precomputed cost row c_j = c(x, y_j). These are the
// per-sample hot paths of the stochastic solvers.
double h_from_costs(ConstVectorRef costs, const Vector& v, const DiscreteMeasure& nu, double eps);
/// Writes pi into `pi` and returns h_eps; requires eps > 0.
double assignment_and_h_from_costs(ConstVectorRef costs, const Vector& v,
                                   const DiscreteMeasure& nu, double eps, Eigen::Ref<Vector> pi);

/// Discrete source, discrete target and their cost matrix, bundled so that
/// full expectations do not recompute costs.
struct DiscreteProblem {
  DiscreteMeasure mu;
  DiscreteMeasure nu;
  CostSpec cost;
  CostMatrix C;

  static DiscreteProblem make(DiscreteMeasure mu, DiscreteMeasure nu, CostSpec cost);
};

/// H_eps(v) = E_mu[h_eps(X, v)].
double exact_H(const DiscreteProblem& problem, const DualPotential& v, double eps);
/// grad H_eps(v) = nu - E_mu[pi(X, v)]; for eps = 0 the expected supergradient.
Vector exact_grad_H(const DiscreteProblem& problem, const DualPotential& v, double eps);
/// E_mu[hessian_h(X, v)].
Matrix exact_hessian_H(const DiscreteProblem& problem, const DualPotential& v, double eps);

double exact_H(const DiscreteMeasure& mu, const DualPotential& v, const DiscreteMeasure& nu,
               const CostSpec& cost, double eps);
Vector exact_grad_H(const DiscreteMeasure& mu, const DualPotential& v, const DiscreteMeasure& nu,
                    const CostSpec& cost, double eps);
Matrix exact_hessian_H(const DiscreteMeasure& mu, const DualPotential& v,
                       const DiscreteMeasure& nu, const CostSpec& cost, double eps);

}  // namespace rmot

#endif  // RMOT_SEMIDUAL_HPP
