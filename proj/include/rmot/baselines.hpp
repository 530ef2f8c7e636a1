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

#ifndef RMOT_BASELINES_HPP
#define RMOT_BASELINES_HPP

#include <cstdint>
#include <functional>

#include "rmot/measures.hpp"
#include "rmot/semidual.hpp"

namespace rmot {

/// Coupling returned by the scaling solvers.
///
/// The plan is stored through log-domain scalings f, g with
/// matrix(i, j) = exp((f_i + g_j - C_ij) / eps). `value` is the primal
/// objective sum C pi + eps sum pi (log(pi / (mu_i nu_j)) - 1), which
/// puts W_eps(delta_x, delta_x) at -eps for zero cost.
struct TransportPlan {
  RowMatrix matrix;
  double value = 0.0;
  Vector f;
  Vector g;
  std::int64_t iterations = 0;
  /// max(|row sums - mu|_1, |column sums - nu|_1) of the returned plan.
  double violation = 0.0;
  /// Plan entries evaluated by the per-iteration updates (greedy solvers);
  /// excludes initialization and convergence re-checks.
  std::int64_t work = 0;
};

/// Optional convergence reporting: callback(iteration, violation, value)
/// every `every` iterations. Computing the value costs O(I J).
struct Progress {
  std::int64_t every = 1;
  std::function<void(std::int64_t, double, double)> callback;
};

inline constexpr double kGroundTruthTolerance = 1e-9;

/// Alternating row/column scaling. Runs in the log domain when eps <= 0.05
/// or when the Gibbs kernel underflows.
TransportPlan sinkhorn(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const CostMatrix& C,
                       double eps, double tol = kGroundTruthTolerance,
                       std::int64_t max_iters = 100'000, const Progress* progress = nullptr);

/// Greedy scaling of the single row or column with the largest l1 marginal
/// violation; O(I + J) per iteration.
TransportPlan greenkhorn(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const CostMatrix& C,
                         double eps, double tol = kGroundTruthTolerance,
                         std::int64_t max_iters = 10'000'000, const Progress* progress = nullptr);

/// Greenkhorn with the row or column drawn with probability proportional
/// to its violation.
TransportPlan stochastic_greenkhorn(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                    const CostMatrix& C, double eps,
                                    double tol = kGroundTruthTolerance,
                                    std::int64_t max_iters = 10'000'000, std::uint64_t seed = 0,
                                    const Progress* progress = nullptr);

/// Semi-dual potential v = g - eps log(nu) read off a scaling solution,
/// re-centred to zero mean.
DualPotential semidual_potential(const TransportPlan& plan, const DiscreteMeasure& nu, double eps);

double primal_value(const RowMatrix& plan, const RowMatrix& C, const DiscreteMeasure& mu,
                    const DiscreteMeasure& nu, double eps);

struct AscentResult {
  DualPotential v;
  double value;
  double grad_norm;
  std::int64_t iterations;
};

/// Deterministic maximization of H_eps over a discrete source: Newton
/// directions on the zero-mean hyperplane (falling back to the gradient)
/// with Armijo backtracking, until |grad H| <= tol. Progress reports the
/// gradient norm in the violation slot and H as the value.
AscentResult full_gradient_ascent(const DiscreteProblem& problem, double eps, double tol = 1e-10,
                                  std::int64_t max_iters = 500,
                                  const Progress* progress = nullptr);

/// Minimum of the primal objective over 2x2 couplings, by golden-section
/// search on the free entry pi_11.
double brute_force_primal_2x2(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                              const CostMatrix& C, double eps);

}  // namespace rmot

#endif  // RMOT_BASELINES_HPP
