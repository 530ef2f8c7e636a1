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

#include "rmot/laguerre.hpp"
#include "rmot/instances.hpp"
#include "test_support.hpp"

using namespace rmot;

TEST(AssignCell, HandExample) {
  const RowMatrix y{{0.0, 0.0}, {1.0, 0.0}};
  const DualPotential v(Vector{{0.5, 0.0}});
  // c - v = (0.1, 0.4).
  EXPECT_EQ(assign_cell(Vector{{0.6, 0.0}}, v, y, CostSpec::euclidean()), 0);
  EXPECT_EQ(assign_cell(Vector{{0.6, 0.0}}, DualPotential(Vector{{0.0, 0.0}}), y,
                        CostSpec::euclidean()),
            1);
}

TEST(AssignCell, TiesGoToSmallestIndex) {
  const RowMatrix y{{0.0}, {1.0}};
  EXPECT_EQ(assign_cell(Vector{{0.5}}, DualPotential(Vector{{0.0, 0.0}}), y, CostSpec::euclidean()),
            0);
}

TEST(AssignCell, InvariantUnderPotentialShift) {
  const RowMatrix y = instances::semi_discrete_targets();
  const DualPotential v(Vector{{0.1, -0.2, 0.05, 0.0, 0.3}});
  SampleSource src = SampleSource::uniform_hypercube(2, 4);
  const RowMatrix x = src.draw(200);
  for (Index i = 0; i < x.rows(); ++i)
    EXPECT_EQ(assign_cell(x.row(i).transpose(), v, y, CostSpec::euclidean()),
              assign_cell(x.row(i).transpose(), v.shifted(7.5), y, CostSpec::euclidean()));
}

TEST(CellHistogram, ZeroPotentialIsNearestNeighbour) {
  const RowMatrix y = instances::semi_discrete_targets();
  SampleSource src = SampleSource::uniform_hypercube(2, 11);
  const RowMatrix x = src.draw(1000);
  const CellAssignment cells =
      cell_histogram(x, DualPotential::zeros(y.rows()), y, CostSpec::euclidean());
  ASSERT_EQ(cells.indices.size(), 1000u);
  std::vector<std::int64_t> counts(static_cast<std::size_t>(y.rows()), 0);
  for (Index i = 0; i < x.rows(); ++i) {
    Index best = 0;
    for (Index j = 1; j < y.rows(); ++j)
      if ((y.row(j) - x.row(i)).norm() < (y.row(best) - x.row(i)).norm()) best = j;
    EXPECT_EQ(cells.indices[static_cast<std::size_t>(i)], best);
    ++counts[static_cast<std::size_t>(best)];
  }
  EXPECT_EQ(cells.counts, counts);
}

TEST(CellHistogram, OnePointPerCell) {
  const RowMatrix y{{0.1, 0.1}, {0.9, 0.1}, {0.5, 0.9}};
  const CellAssignment cells = cell_histogram(y, DualPotential::zeros(3), y, CostSpec::euclidean());
  EXPECT_EQ(cells.counts, (std::vector<std::int64_t>{1, 1, 1}));
}

TEST(CellHistogram, Errors) {
  const RowMatrix y{{0.0}, {1.0}};
  EXPECT_RMOT_ERROR(cell_histogram(RowMatrix(0, 1), DualPotential::zeros(2), y,
                                   CostSpec::euclidean()),
                    ErrorCode::EmptyInput);
  EXPECT_RMOT_ERROR(assign_cell(Vector{{0.0}}, DualPotential::zeros(3), y, CostSpec::euclidean()),
                    ErrorCode::DimensionMismatch);
}

TEST(QueryGrid, CoversBox) {
  const Box box{Vector{{-1.0, 0.0}}, Vector{{1.0, 4.0}}};
  const RowMatrix g = query_grid(box, 4);
  EXPECT_EQ(g.rows(), 16);
  for (Index i = 0; i < g.rows(); ++i) EXPECT_TRUE(box.contains(g.row(i).transpose()));
  EXPECT_DOUBLE_EQ(g(0, 0), -0.75);
  EXPECT_DOUBLE_EQ(g(0, 1), 0.5);
}
