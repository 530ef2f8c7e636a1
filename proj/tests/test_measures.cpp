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

#include <cmath>
#include <fstream>
#include <sstream>

#include "rmot/csv.hpp"
#include "rmot/measures.hpp"
#include "test_support.hpp"

using namespace rmot;

namespace {

RowMatrix points2(std::initializer_list<std::pair<double, double>> xs) {
  RowMatrix p(static_cast<Index>(xs.size()), 2);
  Index i = 0;
  for (auto [a, b] : xs) p.row(i++) << a, b;
  return p;
}

}  // namespace

TEST(DiscreteMeasure, RejectsInvalidWeights) {
  const RowMatrix p = points2({{0, 0}, {1, 1}});
  EXPECT_RMOT_ERROR(DiscreteMeasure(RowMatrix(0, 2), Vector(0)), ErrorCode::EmptySupport);
  EXPECT_RMOT_ERROR(DiscreteMeasure(p, Vector::Constant(3, 1.0 / 3)), ErrorCode::LengthMismatch);
  EXPECT_RMOT_ERROR(DiscreteMeasure(p, Vector::Constant(2, 0.5).cwiseProduct(Vector{{1.0, -1.0}})),
                    ErrorCode::NonPositiveWeight);
  EXPECT_RMOT_ERROR(DiscreteMeasure(p, Vector::Constant(2, 0.6)), ErrorCode::WeightSumMismatch);
}

TEST(DiscreteMeasure, RenormalizesWithinTolerance) {
  const DiscreteMeasure m(points2({{0, 0}, {1, 1}}), Vector{{0.5 + 4e-7, 0.5}});
  EXPECT_DOUBLE_EQ(m.weights().sum(), 1.0);
  EXPECT_NEAR(m.log_weights()[1], std::log(m.weight(1)), 1e-15);
}

TEST(DiscreteMeasure, FromPointsNormalizesMasses) {
  const DiscreteMeasure two = discrete_from_points(points2({{0, 0}, {1, 0}}), Vector{{2.0, 2.0}});
  EXPECT_DOUBLE_EQ(two.weight(0), 0.5);
  EXPECT_DOUBLE_EQ(two.weight(1), 0.5);
  const DiscreteMeasure one = discrete_from_points(points2({{0.3, 0.3}}), Vector{{7.0}});
  EXPECT_DOUBLE_EQ(one.weight(0), 1.0);
  const DiscreteMeasure uni = discrete_from_points(points2({{0, 0}, {1, 0}, {2, 0}, {3, 0}}));
  EXPECT_DOUBLE_EQ(uni.min_weight(), 0.25);
}

TEST(RegularGrid, CellCentredLastCoordinateFastest) {
  const RowMatrix g = regular_grid(2, 2);
  ASSERT_EQ(g.rows(), 4);
  EXPECT_DOUBLE_EQ(g(0, 0), 0.25);
  EXPECT_DOUBLE_EQ(g(0, 1), 0.25);
  EXPECT_DOUBLE_EQ(g(1, 0), 0.25);
  EXPECT_DOUBLE_EQ(g(1, 1), 0.75);
  EXPECT_DOUBLE_EQ(g(3, 0), 0.75);
  EXPECT_EQ(regular_grid(5, 3).rows(), 125);
}

TEST(RescaleUnitBox, MapsOntoUnitSquare) {
  const RowMatrix r = rescale_unit_box(points2({{5, 10}, {10, 5}, {7.5, 7.5}}));
  EXPECT_DOUBLE_EQ(r.minCoeff(), 0.0);
  EXPECT_DOUBLE_EQ(r.maxCoeff(), 1.0);
  EXPECT_DOUBLE_EQ(r(2, 0), 0.5);
  const RowMatrix flat = rescale_unit_box(points2({{3, 1}, {3, 2}}));
  EXPECT_DOUBLE_EQ(flat(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(flat(1, 0), 0.0);
}

TEST(CostSpec, EuclideanAndSquared) {
  const Vector x{{0.0, 0.0}};
  const Vector y{{3.0, 4.0}};
  EXPECT_DOUBLE_EQ(cost(CostSpec::euclidean(), x, y), 5.0);
  EXPECT_DOUBLE_EQ(cost(CostSpec::squared_euclidean(), x, y), 25.0);
  EXPECT_RMOT_ERROR(cost(CostSpec::euclidean(), x, Vector{{1.0}}), ErrorCode::DimensionMismatch);
}

TEST(CostSpec, CustomTable) {
  RowMatrix t(2, 3);
  t << 0, 1, 2, 3, 4, 5;
  const CostSpec c = CostSpec::custom(t);
  EXPECT_DOUBLE_EQ(c(Vector{{1.0}}, Vector{{2.0}}), 5.0);
  EXPECT_RMOT_ERROR(c(Vector{{2.0}}, Vector{{0.0}}), ErrorCode::IndexOutOfRange);
  t(0, 0) = -1.0;
  EXPECT_RMOT_ERROR(CostSpec::custom(t), ErrorCode::NegativeCost);
}

TEST(CostMatrix, MatchesPointwiseCost) {
  const DiscreteMeasure mu = DiscreteMeasure::uniform(regular_grid(3, 2));
  const DiscreteMeasure nu = DiscreteMeasure::uniform(regular_grid(2, 2));
  const CostMatrix C = cost_matrix(mu, nu, CostSpec::euclidean());
  for (Index i = 0; i < mu.size(); ++i)
    for (Index j = 0; j < nu.size(); ++j)
      EXPECT_DOUBLE_EQ(C.values(i, j), (mu.point(i) - nu.point(j)).norm());
}

TEST(SampleSource, EmpiricalFrequenciesMatchWeights) {
  auto m = std::make_shared<const DiscreteMeasure>(
      discrete_from_points(points2({{0, 0}, {1, 0}, {0, 1}}), Vector{{1.0, 2.0, 7.0}}));
  SampleSource s = SampleSource::empirical(m, 11);
  std::vector<int> counts(3, 0);
  const int n = 100000;
  for (int k = 0; k < n; ++k) ++counts[static_cast<std::size_t>(s.next_atom())];
  for (Index j = 0; j < 3; ++j) {
    const double p = m->weight(j);
    EXPECT_NEAR(counts[static_cast<std::size_t>(j)] / double(n), p, 4 * std::sqrt(p * (1 - p) / n));
  }
}

TEST(SampleSource, MixtureStaysInBoxAndIsSeeded) {
  std::vector<GaussianComponent> g = {{1.0, Vector{{0.9, 0.9}}, Vector{{0.3, 0.3}}}};
  SampleSource a = SampleSource::gaussian_mixture(g, Box::unit(2), 5);
  SampleSource b = SampleSource::gaussian_mixture(g, Box::unit(2), 5);
  const RowMatrix da = a.draw(2000);
  EXPECT_GE(da.minCoeff(), 0.0);
  EXPECT_LE(da.maxCoeff(), 1.0);
  EXPECT_EQ(da, b.draw(2000));
}

TEST(SampleSource, RejectionCapRaises) {
  std::vector<GaussianComponent> g = {{1.0, Vector{{50.0}}, Vector{{0.1}}}};
  SampleSource s = SampleSource::gaussian_mixture(g, Box::unit(1), 1);
  Vector x(1);
  EXPECT_RMOT_ERROR(s.next(x), ErrorCode::RejectionLimit);
}

TEST(Mixture, DiscretizationIsProportionalToDensity) {
  std::vector<GaussianComponent> g = {{0.3, Vector{{0.2, 0.2}}, Vector{{0.1, 0.2}}},
                                      {0.7, Vector{{0.7, 0.6}}, Vector{{0.15, 0.1}}}};
  const RowMatrix nodes = regular_grid(4, 2);
  const DiscreteMeasure m = discretize_mixture(g, nodes);
  for (Index i = 1; i < nodes.rows(); ++i)
    EXPECT_NEAR(m.weight(i) / m.weight(0),
                mixture_density(g, nodes.row(i).transpose()) /
                    mixture_density(g, nodes.row(0).transpose()),
                1e-9);
}

TEST(PointCsv, ParsesWeightsAndRoundTrips) {
  std::istringstream in("x1,x2,w\n0.5,1,2\n1.5,2,6\n");
  const PointCloud pc = read_point_csv(in);
  ASSERT_EQ(pc.points.rows(), 2);
  ASSERT_TRUE(pc.weights.has_value());
  EXPECT_DOUBLE_EQ(pc.to_measure().weight(1), 0.75);
  std::ostringstream out;
  write_point_csv(out, pc.points, pc.weights);
  EXPECT_EQ(out.str(), "x1,x2,w\n0.5,1,2\n1.5,2,6\n");
}

TEST(PointCsv, ParseErrorsNameTheLine) {
  std::istringstream bad("x1,x2\n0,1\n0,abc\n");
  try {
    read_point_csv(bad);
    FAIL() << "expected ParseError";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
  std::istringstream header("y1,y2\n0,1\n");
  EXPECT_RMOT_ERROR(read_point_csv(header), ErrorCode::ParseError);
  std::istringstream empty("x1\n");
  EXPECT_RMOT_ERROR(read_point_csv(empty), ErrorCode::EmptySupport);
  EXPECT_RMOT_ERROR(read_point_csv(std::string("/nonexistent/file.csv")), ErrorCode::IoError);
}

TEST(PointCsv, StreamReadsLazily) {
  const std::string path = ::testing::TempDir() + "rmot_stream.csv";
  {
    std::ofstream f(path);
    f << "x1,x2,w\n0.1,0.2,5\n0.3,0.4,1\n";
  }
  CsvSampleStream s(path);
  Vector x(2);
  ASSERT_TRUE(s.next(x));
  EXPECT_EQ(s.rows_read(), 1);
  EXPECT_DOUBLE_EQ(x[1], 0.2);
  ASSERT_TRUE(s.next(x));
  EXPECT_FALSE(s.next(x));
  EXPECT_EQ(s.rows_read(), 2);
}

TEST(FormatNumber, TwelveSignificantDigits) {
  EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333333");
  EXPECT_EQ(format_number(-2.5), "-2.5");
}
