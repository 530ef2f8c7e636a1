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

#include <algorithm>
#include <cmath>
#include <limits>

#include "rmot/kernels.hpp"

namespace rmot::kernels {

double soft_assignment_row(const double* costs, const double* v, const double* log_nu,
                           Index J, double eps, double* pi) {
  double peak = -std::numeric_limits<double>::infinity();
  for (Index j = 0; j < J; ++j) {
    pi[j] = (v[j] - costs[j]) / eps + log_nu[j];
    peak = std::max(peak, pi[j]);
  }
  double total = 0.0;
  for (Index j = 0; j < J; ++j) {
    pi[j] = std::exp(pi[j] - peak);
    total += pi[j];
  }
  const double inv = 1.0 / total;
  for (Index j = 0; j < J; ++j) pi[j] *= inv;
  return peak + std::log(total);
}

double log_partition_row(const double* costs, const double* v, const double* log_nu, Index J,
                         double eps) {
  double peak = -std::numeric_limits<double>::infinity();
  for (Index j = 0; j < J; ++j) peak = std::max(peak, (v[j] - costs[j]) / eps + log_nu[j]);
  double total = 0.0;
  for (Index j = 0; j < J; ++j) total += std::exp((v[j] - costs[j]) / eps + log_nu[j] - peak);
  return peak + std::log(total);
}

Index argmin_reduced_cost(const double* costs, const double* v, Index J) {
  Index best = 0;
  double best_value = costs[0] - v[0];
  for (Index j = 1; j < J; ++j) {
    const double value = costs[j] - v[j];
    if (value < best_value) {
      best_value = value;
      best = j;
    }
  }
  return best;
}

namespace serial {

void cost_matrix(const RowMatrix& xs, const RowMatrix& ys, const CostSpec& cost,
                 RowMatrix& out) {
  out.resize(xs.rows(), ys.rows());
  for (Index i = 0; i < xs.rows(); ++i) {
    Eigen::Ref<Vector> row = out.row(i).transpose();
    cost.row(xs.row(i).transpose(), ys, row);
  }
}

double expected_objective(const RowMatrix& C, const Vector& mu, const Vector& v,
                          const Vector& nu, const Vector& log_nu, double eps) {
  const Index J = C.cols();
  double acc = 0.0;
  for (Index i = 0; i < C.rows(); ++i) {
    const double* c = C.row(i).data();
    if (eps > 0.0) {
      acc -= mu[i] * eps * log_partition_row(c, v.data(), log_nu.data(), J, eps);
    } else {
      const Index j = argmin_reduced_cost(c, v.data(), J);
      acc += mu[i] * (c[j] - v[j]);
    }
  }
  return v.dot(nu) + acc - eps;
}

void expected_assignment(const RowMatrix& C, const Vector& mu, const Vector& v,
                         const Vector& log_nu, double eps, Vector& out) {
  const Index J = C.cols();
  out.setZero(J);
  Vector pi(J);
  for (Index i = 0; i < C.rows(); ++i) {
    const double* c = C.row(i).data();
    if (eps > 0.0) {
      soft_assignment_row(c, v.data(), log_nu.data(), J, eps, pi.data());
      out.noalias() += mu[i] * pi;
    } else {
      out[argmin_reduced_cost(c, v.data(), J)] += mu[i];
    }
  }
}

void expected_hessian(const RowMatrix& C, const Vector& mu, const Vector& v,
                      const Vector& log_nu, double eps, Matrix& out) {
  const Index J = C.cols();
  out.setZero(J, J);
  Vector pi(J);
  for (Index i = 0; i < C.rows(); ++i) {
    soft_assignment_row(C.row(i).data(), v.data(), log_nu.data(), J, eps, pi.data());
    out.noalias() += mu[i] * (pi * pi.transpose());
    out.diagonal() -= mu[i] * pi;
  }
  out /= eps;
}

void assign_cells(const RowMatrix& xs, const RowMatrix& ys, const Vector& v,
                  const CostSpec& cost, std::vector<Index>& out) {
  const Index J = ys.rows();
  out.resize(static_cast<std::size_t>(xs.rows()));
  Vector row(J);
  for (Index i = 0; i < xs.rows(); ++i) {
    cost.row(xs.row(i).transpose(), ys, row);
    out[static_cast<std::size_t>(i)] = argmin_reduced_cost(row.data(), v.data(), J);
  }
}

void kernel_matvec(const RowMatrix& K, const Vector& x, Vector& out) {
  out.resize(K.rows());
  for (Index i = 0; i < K.rows(); ++i) {
    double acc = 0.0;
    for (Index j = 0; j < K.cols(); ++j) acc += K(i, j) * x[j];
    out[i] = acc;
  }
}

void kernel_matvec_transpose(const RowMatrix& K, const Vector& x, Vector& out) {
  out.setZero(K.cols());
  for (Index i = 0; i < K.rows(); ++i)
    for (Index j = 0; j < K.cols(); ++j) out[j] += K(i, j) * x[i];
}

void row_logsumexp(const RowMatrix& C, const Vector& g, const Vector& log_b, double eps,
                   Vector& out) {
  out.resize(C.rows());
  for (Index i = 0; i < C.rows(); ++i)
    out[i] = log_partition_row(C.row(i).data(), g.data(), log_b.data(), C.cols(), eps);
}

void col_logsumexp(const RowMatrix& C, const Vector& f, const Vector& log_a, double eps,
                   Vector& out) {
  const Index I = C.rows();
  const Index J = C.cols();
  out.resize(J);
  for (Index j = 0; j < J; ++j) {
    double peak = -std::numeric_limits<double>::infinity();
    for (Index i = 0; i < I; ++i) peak = std::max(peak, (f[i] - C(i, j)) / eps + log_a[i]);
    double total = 0.0;
    for (Index i = 0; i < I; ++i) total += std::exp((f[i] - C(i, j)) / eps + log_a[i] - peak);
    out[j] = peak + std::log(total);
  }
}

}  // namespace serial
}  // namespace rmot::kernels
