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

namespace rmot::kernels::omp {

namespace {

Index block_count(Index rows) { return (rows + kReductionBlock - 1) / kReductionBlock; }

}  // namespace

void cost_matrix(const RowMatrix& xs, const RowMatrix& ys, const CostSpec& cost,
                 RowMatrix& out) {
  out.resize(xs.rows(), ys.rows());
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < xs.rows(); ++i) {
    Eigen::Ref<Vector> row = out.row(i).transpose();
    cost.row(xs.row(i).transpose(), ys, row);
  }
}

double expected_objective(const RowMatrix& C, const Vector& mu, const Vector& v,
                          const Vector& nu, const Vector& log_nu, double eps) {
  const Index J = C.cols();
  const Index blocks = block_count(C.rows());
  Vector partial = Vector::Zero(blocks);
#pragma omp parallel for schedule(static)
  for (Index b = 0; b < blocks; ++b) {
    const Index end = std::min(C.rows(), (b + 1) * kReductionBlock);
    double acc = 0.0;
    for (Index i = b * kReductionBlock; i < end; ++i) {
      const double* c = C.row(i).data();
      if (eps > 0.0) {
        acc -= mu[i] * eps * log_partition_row(c, v.data(), log_nu.data(), J, eps);
      } else {
        const Index j = argmin_reduced_cost(c, v.data(), J);
        acc += mu[i] * (c[j] - v[j]);
      }
    }
    partial[b] = acc;
  }
  double acc = 0.0;
  for (Index b = 0; b < blocks; ++b) acc += partial[b];
  return v.dot(nu) + acc - eps;
}

void expected_assignment(const RowMatrix& C, const Vector& mu, const Vector& v,
                         const Vector& log_nu, double eps, Vector& out) {
  const Index J = C.cols();
  const Index blocks = block_count(C.rows());
  Matrix partial = Matrix::Zero(J, blocks);
#pragma omp parallel
  {
    Vector pi(J);
#pragma omp for schedule(static)
    for (Index b = 0; b < blocks; ++b) {
      const Index end = std::min(C.rows(), (b + 1) * kReductionBlock);
      auto acc = partial.col(b);
      for (Index i = b * kReductionBlock; i < end; ++i) {
        const double* c = C.row(i).data();
        if (eps > 0.0) {
          soft_assignment_row(c, v.data(), log_nu.data(), J, eps, pi.data());
          acc.noalias() += mu[i] * pi;
        } else {
          acc[argmin_reduced_cost(c, v.data(), J)] += mu[i];
        }
      }
    }
  }
  out.setZero(J);
  for (Index b = 0; b < blocks; ++b) out += partial.col(b);
}

void expected_hessian(const RowMatrix& C, const Vector& mu, const Vector& v,
                      const Vector& log_nu, double eps, Matrix& out) {
  const Index J = C.cols();
  const Index blocks = block_count(C.rows());
  std::vector<Matrix> partial(static_cast<std::size_t>(blocks));
#pragma omp parallel
  {
    Vector pi(J);
#pragma omp for schedule(static)
    for (Index b = 0; b < blocks; ++b) {
      Matrix acc = Matrix::Zero(J, J);
      const Index end = std::min(C.rows(), (b + 1) * kReductionBlock);
      for (Index i = b * kReductionBlock; i < end; ++i) {
        soft_assignment_row(C.row(i).data(), v.data(), log_nu.data(), J, eps, pi.data());
        acc.noalias() += mu[i] * (pi * pi.transpose());
        acc.diagonal() -= mu[i] * pi;
      }
      partial[static_cast<std::size_t>(b)] = std::move(acc);
    }
  }
  out.setZero(J, J);
  for (const auto& block : partial) out += block;
  out /= eps;
}

void assign_cells(const RowMatrix& xs, const RowMatrix& ys, const Vector& v,
                  const CostSpec& cost, std::vector<Index>& out) {
  const Index J = ys.rows();
  out.resize(static_cast<std::size_t>(xs.rows()));
#pragma omp parallel
  {
    Vector row(J);
#pragma omp for schedule(static)
    for (Index i = 0; i < xs.rows(); ++i) {
      cost.row(xs.row(i).transpose(), ys, row);
      out[static_cast<std::size_t>(i)] = argmin_reduced_cost(row.data(), v.data(), J);
    }
  }
}

void kernel_matvec(const RowMatrix& K, const Vector& x, Vector& out) {
  out.resize(K.rows());
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < K.rows(); ++i) out[i] = K.row(i).dot(x.transpose());
}

void kernel_matvec_transpose(const RowMatrix& K, const Vector& x, Vector& out) {
  const Index blocks = block_count(K.rows());
  Matrix partial = Matrix::Zero(K.cols(), blocks);
#pragma omp parallel for schedule(static)
  for (Index b = 0; b < blocks; ++b) {
    const Index end = std::min(K.rows(), (b + 1) * kReductionBlock);
    auto acc = partial.col(b);
    for (Index i = b * kReductionBlock; i < end; ++i) acc += x[i] * K.row(i).transpose();
  }
  out.setZero(K.cols());
  for (Index b = 0; b < blocks; ++b) out += partial.col(b);
}

void row_logsumexp(const RowMatrix& C, const Vector& g, const Vector& log_b, double eps,
                   Vector& out) {
  out.resize(C.rows());
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < C.rows(); ++i)
    out[i] = log_partition_row(C.row(i).data(), g.data(), log_b.data(), C.cols(), eps);
}

void col_logsumexp(const RowMatrix& C, const Vector& f, const Vector& log_a, double eps,
                   Vector& out) {
  const Index I = C.rows();
  const Index J = C.cols();
  out.resize(J);
#pragma omp parallel for schedule(static)
  for (Index j = 0; j < J; ++j) {
    double peak = -std::numeric_limits<double>::infinity();
    for (Index i = 0; i < I; ++i) peak = std::max(peak, (f[i] - C(i, j)) / eps + log_a[i]);
    double total = 0.0;
    for (Index i = 0; i < I; ++i) total += std::exp((f[i] - C(i, j)) / eps + log_a[i] - peak);
    out[j] = peak + std::log(total);
  }
}

}  // namespace rmot::kernels::omp
