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

#ifndef RMOT_MEASURES_HPP
#define RMOT_MEASURES_HPP

#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include <Eigen/Dense>
#include <boost/random/discrete_distribution.hpp>

#include "rmot/rng.hpp"

namespace rmot {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
/// Point clouds and cost matrices are stored one point (one source atom)
/// per contiguous row.
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstVectorRef = Eigen::Ref<const Vector>;

/// Finitely supported probability measure sum_j w_j delta_{y_j}.
///
/// Immutable after construction. The constructor accepts weights that are
/// already a probability vector up to 1e-6 and renormalizes them exactly;
/// use discrete_from_points() for unnormalized masses.
class DiscreteMeasure {
 public:
  DiscreteMeasure(RowMatrix points, Vector weights);

  static DiscreteMeasure uniform(RowMatrix points);

  Index size() const noexcept { return points_.rows(); }
  Index dim() const noexcept { return points_.cols(); }
  const RowMatrix& points() const noexcept { return points_; }
  const Vector& weights() const noexcept { return weights_; }
  /// Cached elementwise log of weights().
  const Vector& log_weights() const noexcept { return log_weights_; }
  double weight(Index j) const { return weights_[j]; }
  auto point(Index j) const { return points_.row(j).transpose(); }
  double min_weight() const noexcept { return weights_.minCoeff(); }

 private:
  RowMatrix points_;
  Vector weights_;
  Vector log_weights_;
};

/// Builds a measure from support points and optional unnormalized positive
/// masses; omitted masses mean uniform weights.
DiscreteMeasure discrete_from_points(RowMatrix points,
                                     const std::optional<Vector>& weights = std::nullopt);

/// Diagonal-covariance Gaussian component of a mixture.
struct GaussianComponent {
  double weight;
  Vector mean;
  Vector stddev;
};

struct Box {
  Vector lower;
  Vector upper;

  static Box unit(Index dim);
  bool contains(ConstVectorRef x) const;
};

double mixture_density(const std::vector<GaussianComponent>& components, ConstVectorRef x);

/// Discretizes a mixture onto the given nodes by evaluating the density at
/// every node and renormalizing.
DiscreteMeasure discretize_mixture(const std::vector<GaussianComponent>& components,
                                   RowMatrix nodes);

/// Cell-centred lattice with `per_axis` points per coordinate in [0,1]^dim,
/// i.e. coordinates (k + 1/2) / per_axis, enumerated with the last
/// coordinate varying fastest.
RowMatrix regular_grid(Index per_axis, Index dim);

/// Per-coordinate min-max map into [0,1]^d. Constant coordinates map to 0.
RowMatrix rescale_unit_box(const RowMatrix& points);

/// A (possibly finite) stream of d-dimensional samples.
class SampleStream {
 public:
  virtual ~SampleStream() = default;
  virtual Index dim() const = 0;
  /// Writes the next sample into x. Returns false once the stream is
  /// exhausted.
  virtual bool next(Eigen::Ref<Vector> x) = 0;
};

/// Infinite i.i.d. sampler. Holds RNG state: one instance per thread.
class SampleSource final : public SampleStream {
 public:
  static constexpr long kMaxRejections = 1'000'000;

  static SampleSource empirical(std::shared_ptr<const DiscreteMeasure> measure,
                                std::uint64_t seed);
  static SampleSource gaussian_mixture(std::vector<GaussianComponent> components, Box box,
                                       std::uint64_t seed);
  static SampleSource uniform_hypercube(Index dim, std::uint64_t seed);

  Index dim() const override { return dim_; }
  bool next(Eigen::Ref<Vector> x) override;

  /// Support index of an empirical draw, without materializing the point.
  Index next_atom();
  RowMatrix draw(Index n);

  /// The sampled measure when it is discrete, otherwise null.
  const DiscreteMeasure* discrete_measure() const;

 private:
  struct Empirical {
    std::shared_ptr<const DiscreteMeasure> measure;
    boost::random::discrete_distribution<Index, double> pick;
  };
  struct Mixture {
    std::vector<GaussianComponent> components;
    boost::random::discrete_distribution<std::size_t, double> pick;
    Box box;
  };
  struct Uniform {};

  using Kind = std::variant<Empirical, Mixture, Uniform>;
  SampleSource(Kind kind, Index dim, std::uint64_t seed);

  Kind kind_;
  Index dim_;
  Rng rng_;
};

/// Ground cost c(x, y). Custom costs are a table indexed by support
/// position; points are then 1-dimensional and carry the integer index.
class CostSpec {
 public:
  enum class Kind { Euclidean, SquaredEuclidean, Custom };

  static CostSpec euclidean() { return CostSpec(Kind::Euclidean, {}); }
  static CostSpec squared_euclidean() { return CostSpec(Kind::SquaredEuclidean, {}); }
  static CostSpec custom(RowMatrix table);

  Kind kind() const noexcept { return kind_; }
  const RowMatrix& table() const noexcept { return *table_; }

  double operator()(ConstVectorRef x, ConstVectorRef y) const;

  /// out[j] = c(x, y_j) for every support point of `targets`.
  void row(ConstVectorRef x, const RowMatrix& targets, Eigen::Ref<Vector> out) const;

 private:
  CostSpec(Kind kind, std::shared_ptr<const RowMatrix> table)
      : kind_(kind), table_(std::move(table)) {}

  Kind kind_;
  std::shared_ptr<const RowMatrix> table_;
};

double cost(const CostSpec& spec, ConstVectorRef x, ConstVectorRef y);

/// values(i, j) = c(x_i, y_j).
struct CostMatrix {
  RowMatrix values;

  Index rows() const noexcept { return values.rows(); }
  Index cols() const noexcept { return values.cols(); }
};

CostMatrix cost_matrix(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                       const CostSpec& spec);

}  // namespace rmot

#endif  // RMOT_MEASURES_HPP
