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

#ifndef RMOT_LAGUERRE_HPP
#define RMOT_LAGUERRE_HPP

#include <vector>

#include "rmot/measures.hpp"
#include "rmot/semidual.hpp"

namespace rmot {

/// Cell index per query point and the per-cell totals.
struct CellAssignment {
  std::vector<Index> indices;
  std::vector<std::int64_t> counts;
};

/// Smallest j minimizing c(x, y_j) - v_j.
Index assign_cell(ConstVectorRef x, const DualPotential& v, const RowMatrix& nu_support,
                  const CostSpec& cost);

/// Assigns every row of `samples`. Throws EmptyInput when there are none.
CellAssignment cell_histogram(const RowMatrix& samples, const DualPotential& v,
                              const RowMatrix& nu_support, const CostSpec& cost);

/// Cell-centred lattice of per_axis^d query points over the box.
RowMatrix query_grid(const Box& box, Index per_axis);

}  // namespace rmot

#endif  // RMOT_LAGUERRE_HPP
