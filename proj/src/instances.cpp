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

#include "rmot/instances.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "rmot/error.hpp"
#include "rmot/rng.hpp"

namespace rmot::instances {

std::vector<GaussianComponent> three_gaussian_mixture(Index dim) {
  std::vector<GaussianComponent> out;
  const double weights[] = {0.4, 0.35, 0.25};
  const double sd[] = {0.12, 0.15, 0.1};
  for (int k = 0; k < 3; ++k) {
    Vector mean(dim);
    for (Index i = 0; i < dim; ++i) {
      if (k == 0) mean[i] = 0.25;
      else if (k == 1) mean[i] = 0.7;
      else mean[i] = i % 2 == 0 ? 0.3 : 0.75;
    }
    out.push_back({weights[k], mean, Vector::Constant(dim, sd[k])});
  }
  return out;
}

DiscreteProblem grid_mixture(Index mu_per_axis, Index nu_per_axis) {
  DiscreteMeasure mu = discretize_mixture(three_gaussian_mixture(2), regular_grid(mu_per_axis, 2));
  DiscreteMeasure nu = DiscreteMeasure::uniform(regular_grid(nu_per_axis, 2));
  return DiscreteProblem::make(std::move(mu), std::move(nu), CostSpec::euclidean());
}

DiscreteProblem desk() { return grid_mixture(4, 2); }

DiscreteProblem random_problem(Index I, Index J, Index dim, std::uint64_t seed) {
  Rng rng(seed);
  auto cloud = [&](Index n) {
    RowMatrix p(n, dim);
    for (Index i = 0; i < n; ++i)
      for (Index k = 0; k < dim; ++k) p(i, k) = uniform01(rng);
    return p;
  };
  auto masses = [&](Index n) {
    Vector w(n);
    for (Index i = 0; i < n; ++i) w[i] = 0.2 + 0.8 * uniform01(rng);
    return w;
  };
  RowMatrix xs = cloud(I);
  Vector a = masses(I);
  RowMatrix ys = cloud(J);
  Vector b = masses(J);
  return DiscreteProblem::make(discrete_from_points(std::move(xs), a),
                               discrete_from_points(std::move(ys), b), CostSpec::euclidean());
}

RowMatrix semi_discrete_targets() {
  RowMatrix y(5, 2);
  y << 0.2, 0.2, 0.8, 0.2, 0.5, 0.5, 0.2, 0.8, 0.8, 0.8;
  return y;
}

DiscreteProblem four_by_four() {
  RowMatrix xs(4, 2);
  xs << 0.1, 0.2, 0.4, 0.9, 0.7, 0.3, 0.95, 0.8;
  RowMatrix ys(4, 2);
  ys << 0.3, 0.1, 0.2, 0.6, 0.8, 0.55, 0.6, 0.95;
  return DiscreteProblem::make(DiscreteMeasure::uniform(std::move(xs)),
                               DiscreteMeasure::uniform(std::move(ys)), CostSpec::euclidean());
}

double permutation_oracle(const RowMatrix& C) {
  require(C.rows() == C.cols() && C.rows() > 0, ErrorCode::WrongSize,
          "permutation oracle needs a non-empty square cost matrix");
  std::vector<Index> perm(static_cast<std::size_t>(C.rows()));
  std::iota(perm.begin(), perm.end(), Index{0});
  double best = std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    for (Index i = 0; i < C.rows(); ++i) total += C(i, perm[static_cast<std::size_t>(i)]);
    best = std::min(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best / static_cast<double>(C.rows());
}

}  // namespace rmot::instances
