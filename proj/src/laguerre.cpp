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

#include "rmot/laguerre.hpp"

#include <string>

#include "rmot/error.hpp"
#include "rmot/kernels.hpp"

namespace rmot {

namespace {

void check_shapes(Index x_dim, const DualPotential& v, const RowMatrix& nu_support,
                  const CostSpec& cost) {
  require(v.size() == nu_support.rows(), ErrorCode::DimensionMismatch,
          "potential of size " + std::to_string(v.size()) + " for " +
              std::to_string(nu_support.rows()) + " target atoms");
  require(cost.kind() == CostSpec::Kind::Custom || x_dim == nu_support.cols(),
          ErrorCode::DimensionMismatch,
          "query points have dimension " + std::to_string(x_dim) + ", targets " +
              std::to_string(nu_support.cols()));
}

}  // namespace

Index assign_cell(ConstVectorRef x, const DualPotential& v, const RowMatrix& nu_support,
                  const CostSpec& cost) {
  check_shapes(x.size(), v, nu_support, cost);
  Vector row(nu_support.rows());
  cost.row(x, nu_support, row);
  return kernels::argmin_reduced_cost(row.data(), v.values().data(), row.size());
}

CellAssignment cell_histogram(const RowMatrix& samples, const DualPotential& v,
                              const RowMatrix& nu_support, const CostSpec& cost) {
  require(samples.rows() > 0, ErrorCode::EmptyInput, "no query points");
  check_shapes(samples.cols(), v, nu_support, cost);
  CellAssignment out;
  kernels::omp::assign_cells(samples, nu_support, v.values(), cost, out.indices);
  out.counts.assign(static_cast<std::size_t>(nu_support.rows()), 0);
  for (Index j : out.indices) ++out.counts[static_cast<std::size_t>(j)];
  return out;
}

RowMatrix query_grid(const Box& box, Index per_axis) {
  require(per_axis >= 1, ErrorCode::ConfigInconsistent, "grid resolution must be positive");
  RowMatrix unit = regular_grid(per_axis, box.lower.size());
  for (Index k = 0; k < unit.cols(); ++k)
    unit.col(k) = (box.lower[k] + (box.upper[k] - box.lower[k]) * unit.col(k).array()).matrix();
  return unit;
}

}  // namespace rmot
