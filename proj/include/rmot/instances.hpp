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

#ifndef RMOT_INSTANCES_HPP
#define RMOT_INSTANCES_HPP

#include <cstdint>
#include <vector>

#include "rmot/measures.hpp"
#include "rmot/semidual.hpp"

// Bundled synthetic instances used by the CLI, the studies and the tests.
namespace rmot::instances {

/// Three diagonal Gaussians inside [0,1]^dim with weights 0.4, 0.35, 0.25.
std::vector<GaussianComponent> three_gaussian_mixture(Index dim);

/// Mixture weights on a mu_per_axis^2 grid against uniform weights on a
/// nu_per_axis^2 grid of [0,1]^2, Euclidean cost.
DiscreteProblem grid_mixture(Index mu_per_axis = 8, Index nu_per_axis = 5);

/// 16 x 4 version of grid_mixture, small enough for repeated runs.
DiscreteProblem desk();

/// Uniform random points in [0,1]^dim with weights drawn from [0.2, 1] and
/// normalized; Euclidean cost.
DiscreteProblem random_problem(Index I, Index J, Index dim, std::uint64_t seed);

/// Five fixed target points in [0,1]^2 for the semi-discrete examples.
RowMatrix semi_discrete_targets();

/// Fixed 4-vs-4 point sets in [0,1]^2 with uniform weights.
DiscreteProblem four_by_four();

/// Minimum of (1/n) sum_i C(i, s(i)) over permutations s; C must be square.
double permutation_oracle(const RowMatrix& C);

}  // namespace rmot::instances

#endif  // RMOT_INSTANCES_HPP
