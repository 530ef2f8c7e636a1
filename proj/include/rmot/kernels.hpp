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

#ifndef RMOT_KERNELS_HPP
#define RMOT_KERNELS_HPP

#include <vector>

#include "rmot/measures.hpp"

// Data-parallel inner loops. Every kernel exists twice with identical
// signatures: `serial` is the plain reference used by tests, `omp` is the
// OpenMP version used by the library. Reductions in `omp` run over fixed
// blocks of rows combined in block order, so results do not depend on the
// thread count or on scheduling.
namespace rmot::kernels {

/// Rows per reduction block in the OpenMP kernels.
inline constexpr Index kReductionBlock = 64;

/// Softmax weights pi_j proportional to nu_j exp((v_j - c_j) / eps), computed
/// with max-subtraction. Returns log sum_j nu_j exp((v_j - c_j) / eps).
double soft_assignment_row(const double* costs, const double* v, const double* log_nu,
                           Index J, double eps, double* pi);

/// log sum_j nu_j exp((v_j - c_j) / eps) without materializing the weights.
double log_partition_row(const double* costs, const double* v, const double* log_nu, Index J,
                         double eps);

/// Smallest j minimizing c_j - v_j.
Index argmin_reduced_cost(const double* costs, const double* v, Index J);

namespace serial {

void cost_matrix(const RowMatrix& xs, const RowMatrix& ys, const CostSpec& cost,
                 RowMatrix& out);

/// sum_i mu_i h_eps(x_i, v) for a precomputed cost matrix; eps = 0 selects
/// the hard-min branch.
double expected_objective(const RowMatrix& C, const Vector& mu, const Vector& v,
                          const Vector& nu, const Vector& log_nu, double eps);

/// sum_i mu_i pi(x_i, v); for eps = 0 the one-hot argmin assignment.
void expected_assignment(const RowMatrix& C, const Vector& mu, const Vector& v,
                         const Vector& log_nu, double eps, Vector& out);

/// (1/eps) sum_i mu_i (pi_i pi_i^T - diag(pi_i)).
void expected_hessian(const RowMatrix& C, const Vector& mu, const Vector& v,
                      const Vector& log_nu, double eps, Matrix& out);

void assign_cells(const RowMatrix& xs, const RowMatrix& ys, const Vector& v,
                  const CostSpec& cost, std::vector<Index>& out);

/// out = K x and out = K^T x.
void kernel_matvec(const RowMatrix& K, const Vector& x, Vector& out);
void kernel_matvec_transpose(const RowMatrix& K, const Vector& x, Vector& out);

/// out_i = log sum_j exp((g_j + log_b_j - C_ij) / eps).
void row_logsumexp(const RowMatrix& C, const Vector& g, const Vector& log_b, double eps,
                   Vector& out);
/// out_j = log sum_i exp((f_i + log_a_i - C_ij) / eps).
void col_logsumexp(const RowMatrix& C, const Vector& f, const Vector& log_a, double eps,
                   Vector& out);

}  // namespace serial

namespace omp {

void cost_matrix(const RowMatrix& xs, const RowMatrix& ys, const CostSpec& cost,
                 RowMatrix& out);
double expected_objective(const RowMatrix& C, const Vector& mu, const Vector& v,
                          const Vector& nu, const Vector& log_nu, double eps);
void expected_assignment(const RowMatrix& C, const Vector& mu, const Vector& v,
                         const Vector& log_nu, double eps, Vector& out);
void expected_hessian(const RowMatrix& C, const Vector& mu, const Vector& v,
                      const Vector& log_nu, double eps, Matrix& out);
void assign_cells(const RowMatrix& xs, const RowMatrix& ys, const Vector& v,
                  const CostSpec& cost, std::vector<Index>& out);
void kernel_matvec(const RowMatrix& K, const Vector& x, Vector& out);
void kernel_matvec_transpose(const RowMatrix& K, const Vector& x, Vector& out);
void row_logsumexp(const RowMatrix& C, const Vector& g, const Vector& log_b, double eps,
                   Vector& out);
void col_logsumexp(const RowMatrix& C, const Vector& f, const Vector& log_a, double eps,
                   Vector& out);

}  // namespace omp

}  // namespace rmot::kernels

#endif  // RMOT_KERNELS_HPP
