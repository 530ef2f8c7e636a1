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

#include "rmot/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rmot/error.hpp"
#include "rmot/kernels.hpp"
#include "rmot/rng.hpp"

namespace rmot {

namespace {

constexpr double kLogDomainThreshold = 0.05;

void check_problem(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const CostMatrix& C,
                   double eps) {
  require(eps > 0.0, ErrorCode::NonPositiveEpsilon,
          "scaling solvers need eps > 0, got " + std::to_string(eps));
  require(C.rows() == mu.size() && C.cols() == nu.size(), ErrorCode::DimensionMismatch,
          "cost matrix is " + std::to_string(C.rows()) + "x" + std::to_string(C.cols()) +
              " for measures of sizes " + std::to_string(mu.size()) + " and " +
              std::to_string(nu.size()));
}

RowMatrix plan_from_scalings(const RowMatrix& C, const Vector& f, const Vector& g, double eps) {
  RowMatrix P(C.rows(), C.cols());
  for (Index i = 0; i < C.rows(); ++i)
    for (Index j = 0; j < C.cols(); ++j) P(i, j) = std::exp((f[i] + g[j] - C(i, j)) / eps);
  return P;
}

double marginal_violation(const RowMatrix& P, const DiscreteMeasure& mu,
                          const DiscreteMeasure& nu) {
  const double rows = (P.rowwise().sum() - mu.weights()).lpNorm<1>();
  const double cols = (P.colwise().sum().transpose() - nu.weights()).lpNorm<1>();
  return std::max(rows, cols);
}

void finalize(TransportPlan& out, const RowMatrix& C, const DiscreteMeasure& mu,
              const DiscreteMeasure& nu, double eps) {
  out.matrix = plan_from_scalings(C, out.f, out.g, eps);
  out.violation = marginal_violation(out.matrix, mu, nu);
  out.value = primal_value(out.matrix, C, mu, nu, eps);
}

void report(const Progress* progress, std::int64_t iter, double violation, const RowMatrix& C,
            const Vector& f, const Vector& g, const DiscreteMeasure& mu,
            const DiscreteMeasure& nu, double eps) {
  if (progress == nullptr || !progress->callback || progress->every < 1) return;
  if (iter % progress->every != 0) return;
  progress->callback(iter, violation,
                     primal_value(plan_from_scalings(C, f, g, eps), C, mu, nu, eps));
}

TransportPlan sinkhorn_log(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                           const RowMatrix& C, double eps, double tol, std::int64_t max_iters,
                           const Progress* progress) {
  const Index I = mu.size();
  const Index J = nu.size();
  TransportPlan out;
  out.f = Vector::Zero(I);
  out.g = Vector::Zero(J);
  const Vector zero_i = Vector::Zero(I);
  const Vector zero_j = Vector::Zero(J);
  Vector lse_rows(I);
  Vector lse_cols(J);

  double violation = std::numeric_limits<double>::infinity();
  std::int64_t iter = 0;
  for (;; ++iter) {
    kernels::omp::row_logsumexp(C, out.g, zero_j, eps, lse_rows);
    if (iter > 0) {
      // Columns are exact after the g update; only rows can be off.
      violation = ((out.f / eps + lse_rows).array().exp().matrix() - mu.weights()).lpNorm<1>();
      report(progress, iter, violation, C, out.f, out.g, mu, nu, eps);
      if (violation <= tol) break;
    }
    if (iter >= max_iters) break;
    out.f = eps * (mu.log_weights() - lse_rows);
    kernels::omp::col_logsumexp(C, out.f, zero_i, eps, lse_cols);
    out.g = eps * (nu.log_weights() - lse_cols);
  }
  out.iterations = iter;
  finalize(out, C, mu, nu, eps);
  if (out.violation > tol) throw NotConverged("sinkhorn stopped after " + std::to_string(iter) +
                                                  " iterations",
                                              out.violation);
  return out;
}

}  // namespace

double primal_value(const RowMatrix& plan, const RowMatrix& C, const DiscreteMeasure& mu,
                    const DiscreteMeasure& nu, double eps) {
  require(plan.rows() == C.rows() && plan.cols() == C.cols() && C.rows() == mu.size() &&
              C.cols() == nu.size(),
          ErrorCode::DimensionMismatch, "plan, cost and marginals disagree in shape");
  double value = 0.0;
  for (Index i = 0; i < plan.rows(); ++i) {
    for (Index j = 0; j < plan.cols(); ++j) {
      const double p = plan(i, j);
      if (p <= 0.0) continue;
      value += p * C(i, j);
      if (eps > 0.0)
        value += eps * p * (std::log(p) - mu.log_weights()[i] - nu.log_weights()[j] - 1.0);
    }
  }
  return value;
}

TransportPlan sinkhorn(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const CostMatrix& C,
                       double eps, double tol, std::int64_t max_iters, const Progress* progress) {
  check_problem(mu, nu, C, eps);
  const RowMatrix K = (-C.values.array() / eps).exp().matrix();
  if (eps <= kLogDomainThreshold || K.minCoeff() < std::numeric_limits<double>::min())
    return sinkhorn_log(mu, nu, C.values, eps, tol, max_iters, progress);

  const Index I = mu.size();
  const Index J = nu.size();
  Vector u = Vector::Ones(I);
  Vector w = Vector::Ones(J);
  Vector Kw(I);
  Vector Ktu(J);
  double violation = std::numeric_limits<double>::infinity();
  std::int64_t iter = 0;
  for (;; ++iter) {
    kernels::omp::kernel_matvec(K, w, Kw);
    if (iter > 0) {
      violation = (u.cwiseProduct(Kw) - mu.weights()).lpNorm<1>();
      if (progress != nullptr && progress->callback && progress->every >= 1 &&
          iter % progress->every == 0) {
        report(progress, iter, violation, C.values, eps * u.array().log().matrix(),
               eps * w.array().log().matrix(), mu, nu, eps);
      }
      if (violation <= tol) break;
    }
    if (iter >= max_iters) break;
    u = mu.weights().cwiseQuotient(Kw);
    kernels::omp::kernel_matvec_transpose(K, u, Ktu);
    w = nu.weights().cwiseQuotient(Ktu);
  }
  TransportPlan out;
  out.f = eps * u.array().log().matrix();
  out.g = eps * w.array().log().matrix();
  out.iterations = iter;
  finalize(out, C.values, mu, nu, eps);
  if (out.violation > tol)
    throw NotConverged("sinkhorn stopped after " + std::to_string(iter) + " iterations",
                       out.violation);
  return out;
}

namespace {

enum class Pick { Greedy, Sampled };

TransportPlan greedy_scaling(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                             const CostMatrix& cm, double eps, double tol, std::int64_t max_iters,
                             Pick pick, std::uint64_t seed, const Progress* progress) {
  check_problem(mu, nu, cm, eps);
  const RowMatrix& C = cm.values;
  const Index I = mu.size();
  const Index J = nu.size();
  const Vector& a = mu.weights();
  const Vector& b = nu.weights();

  TransportPlan out;
  out.g = Vector::Zero(J);
  Vector lse(I);
  kernels::omp::row_logsumexp(C, out.g, Vector::Zero(J), eps, lse);
  out.f = eps * (mu.log_weights() - lse);

  Vector r(I);
  Vector c(J);
  auto exact_sums = [&] {
    const RowMatrix P = plan_from_scalings(C, out.f, out.g, eps);
    r = P.rowwise().sum();
    c = P.colwise().sum().transpose();
  };
  exact_sums();

  Rng rng(seed);
  Vector row_gap(I);
  Vector col_gap(J);
  std::int64_t iter = 0;
  for (;; ++iter) {
    row_gap = (r - a).cwiseAbs();
    col_gap = (c - b).cwiseAbs();
    double violation = std::max(row_gap.sum(), col_gap.sum());
    if (violation <= tol) {
      // The running sums drift; confirm against the plan itself.
      exact_sums();
      row_gap = (r - a).cwiseAbs();
      col_gap = (c - b).cwiseAbs();
      violation = std::max(row_gap.sum(), col_gap.sum());
      if (violation <= tol) break;
    }
    report(progress, iter, violation, C, out.f, out.g, mu, nu, eps);
    if (iter >= max_iters) break;

    Index row_idx = 0;
    Index col_idx = 0;
    const double best_row = row_gap.maxCoeff(&row_idx);
    const double best_col = col_gap.maxCoeff(&col_idx);
    bool use_row = best_row >= best_col;
    if (pick == Pick::Sampled) {
      const double total = row_gap.sum() + col_gap.sum();
      double u = uniform01(rng) * total;
      use_row = false;
      col_idx = J - 1;
      for (Index i = 0; i < I; ++i) {
        if (u < row_gap[i]) {
          use_row = true;
          row_idx = i;
          break;
        }
        u -= row_gap[i];
      }
      if (!use_row) {
        for (Index j = 0; j < J; ++j) {
          if (u < col_gap[j]) {
            col_idx = j;
            break;
          }
          u -= col_gap[j];
        }
      }
    }

    if (use_row) {
      const Index i = row_idx;
      const double ratio = a[i] / r[i];
      for (Index j = 0; j < J; ++j)
        c[j] += std::exp((out.f[i] + out.g[j] - C(i, j)) / eps) * (ratio - 1.0);
      out.f[i] += eps * std::log(ratio);
      r[i] = a[i];
      out.work += J;
    } else {
      const Index j = col_idx;
      const double ratio = b[j] / c[j];
      for (Index i = 0; i < I; ++i)
        r[i] += std::exp((out.f[i] + out.g[j] - C(i, j)) / eps) * (ratio - 1.0);
      out.g[j] += eps * std::log(ratio);
      c[j] = b[j];
      out.work += I;
    }
  }
  out.iterations = iter;
  finalize(out, C, mu, nu, eps);
  if (out.violation > tol)
    throw NotConverged("greedy scaling stopped after " + std::to_string(iter) + " iterations",
                       out.violation);
  return out;
}

}  // namespace

TransportPlan greenkhorn(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const CostMatrix& C,
                         double eps, double tol, std::int64_t max_iters,
                         const Progress* progress) {
  return greedy_scaling(mu, nu, C, eps, tol, max_iters, Pick::Greedy, 0, progress);
}

TransportPlan stochastic_greenkhorn(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                    const CostMatrix& C, double eps, double tol,
                                    std::int64_t max_iters, std::uint64_t seed,
                                    const Progress* progress) {
  return greedy_scaling(mu, nu, C, eps, tol, max_iters, Pick::Sampled, seed, progress);
}

DualPotential semidual_potential(const TransportPlan& plan, const DiscreteMeasure& nu,
                                 double eps) {
  require(plan.g.size() == nu.size(), ErrorCode::DimensionMismatch,
          "plan has " + std::to_string(plan.g.size()) + " columns for " +
              std::to_string(nu.size()) + " target atoms");
  return DualPotential(plan.g - eps * nu.log_weights(), true);
}

AscentResult full_gradient_ascent(const DiscreteProblem& problem, double eps, double tol,
                                  std::int64_t max_iters, const Progress* progress) {
  require(eps > 0.0, ErrorCode::NonPositiveEpsilon,
          "full gradient ascent needs eps > 0, got " + std::to_string(eps));
  const Index J = problem.nu.size();
  DualPotential v = DualPotential::zeros(J);
  double value = exact_H(problem, v, eps);
  Vector grad = exact_grad_H(problem, v, eps);
  std::int64_t iter = 0;
  for (;; ++iter) {
    if (progress != nullptr && progress->callback && progress->every >= 1 &&
        iter % progress->every == 0)
      progress->callback(iter, grad.norm(), value);
    if (iter >= max_iters || grad.norm() <= tol) break;
    // -Hess H is positive semidefinite with kernel 1_J; adding 1 1^T / J
    // makes it invertible without changing the step on the hyperplane.
    Matrix A = -exact_hessian_H(problem, v, eps);
    A.array() += 1.0 / static_cast<double>(J);
    Eigen::LDLT<Matrix> ldlt(A);
    Vector d = ldlt.solve(grad);
    double slope = grad.dot(d);
    if (ldlt.info() != Eigen::Success || !d.allFinite() || slope <= 0.0) {
      d = grad;
      slope = grad.squaredNorm();
    }
    d.array() -= d.mean();

    DualPotential trial(v.values() + d, true);
    double trial_value = exact_H(problem, trial, eps);
    Vector trial_grad = exact_grad_H(problem, trial, eps);
    double t = 1.0;
    // Near the optimum the Armijo gain drops below rounding in H, so a full
    // step that shrinks the gradient is accepted outright.
    while (trial_value < value + 1e-4 * t * slope && trial_grad.norm() >= grad.norm()) {
      t *= 0.5;
      if (t < 1e-12) break;
      trial = DualPotential(v.values() + t * d, true);
      trial_value = exact_H(problem, trial, eps);
      trial_grad = exact_grad_H(problem, trial, eps);
    }
    if (t < 1e-12) break;
    v = std::move(trial);
    value = trial_value;
    grad = std::move(trial_grad);
  }
  const double grad_norm = grad.norm();
  if (grad_norm > tol)
    throw NotConverged("full gradient ascent stopped after " + std::to_string(iter) +
                           " iterations",
                       grad_norm);
  return AscentResult{std::move(v), value, grad_norm, iter};
}

double brute_force_primal_2x2(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                              const CostMatrix& C, double eps) {
  require(mu.size() == 2 && nu.size() == 2 && C.rows() == 2 && C.cols() == 2,
          ErrorCode::WrongSize, "brute force handles 2x2 problems only");
  require(eps >= 0.0, ErrorCode::NegativeEpsilon,
          "epsilon must be nonnegative, got " + std::to_string(eps));
  const double m1 = mu.weight(0);
  const double n1 = nu.weight(0);
  auto objective = [&](double t) {
    RowMatrix P(2, 2);
    P << t, m1 - t, n1 - t, 1.0 - m1 - n1 + t;
    P = P.cwiseMax(0.0);
    return primal_value(P, C.values, mu, nu, eps);
  };
  double lo = std::max(0.0, m1 + n1 - 1.0);
  double hi = std::min(m1, n1);
  const double lo0 = lo;
  const double hi0 = hi;
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - phi * (hi - lo);
  double x2 = lo + phi * (hi - lo);
  double f1 = objective(x1);
  double f2 = objective(x2);
  while (hi - lo > 1e-10) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = objective(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = objective(x2);
    }
  }
  return std::min({objective(0.5 * (lo + hi)), objective(lo0), objective(hi0)});
}

}  // namespace rmot
