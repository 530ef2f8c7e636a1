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

#include "rmot/measures.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "rmot/error.hpp"
#include "rmot/kernels.hpp"

namespace rmot {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptySupport: return "EmptySupport";
    case ErrorCode::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::WeightSumMismatch: return "WeightSumMismatch";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::NegativeCost: return "NegativeCost";
    case ErrorCode::RejectionLimit: return "RejectionLimit";
    case ErrorCode::NonPositiveEpsilon: return "NonPositiveEpsilon";
    case ErrorCode::NegativeEpsilon: return "NegativeEpsilon";
    case ErrorCode::PositiveEpsilon: return "PositiveEpsilon";
    case ErrorCode::ZeroIteration: return "ZeroIteration";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::ConfigInconsistent: return "ConfigInconsistent";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::WrongSize: return "WrongSize";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::NotAtOptimum: return "NotAtOptimum";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

namespace {

constexpr double kWeightSumTolerance = 1e-6;

void check_weights(const RowMatrix& points, const Vector& weights) {
  require(points.rows() >= 1, ErrorCode::EmptySupport, "measure needs at least one point");
  require(weights.size() == points.rows(), ErrorCode::LengthMismatch,
          std::to_string(points.rows()) + " points but " + std::to_string(weights.size()) +
              " weights");
  for (Index j = 0; j < weights.size(); ++j) {
    require(weights[j] > 0.0 && std::isfinite(weights[j]), ErrorCode::NonPositiveWeight,
            "weight " + std::to_string(j) + " is " + std::to_string(weights[j]));
  }
}

}  // namespace

DiscreteMeasure::DiscreteMeasure(RowMatrix points, Vector weights)
    : points_(std::move(points)), weights_(std::move(weights)) {
  check_weights(points_, weights_);
  const double total = weights_.sum();
  require(std::abs(total - 1.0) <= kWeightSumTolerance, ErrorCode::WeightSumMismatch,
          "weights sum to " + std::to_string(total));
  weights_ /= total;
  log_weights_ = weights_.array().log().matrix();
}

DiscreteMeasure DiscreteMeasure::uniform(RowMatrix points) {
  require(points.rows() >= 1, ErrorCode::EmptySupport, "measure needs at least one point");
  const Index n = points.rows();
  return DiscreteMeasure(std::move(points), Vector::Constant(n, 1.0 / static_cast<double>(n)));
}

DiscreteMeasure discrete_from_points(RowMatrix points, const std::optional<Vector>& weights) {
  if (!weights) return DiscreteMeasure::uniform(std::move(points));
  check_weights(points, *weights);
  Vector normalized = *weights / weights->sum();
  return DiscreteMeasure(std::move(points), std::move(normalized));
}

Box Box::unit(Index dim) { return Box{Vector::Zero(dim), Vector::Ones(dim)}; }

bool Box::contains(ConstVectorRef x) const {
  return (x.array() >= lower.array()).all() && (x.array() <= upper.array()).all();
}

double mixture_density(const std::vector<GaussianComponent>& components, ConstVectorRef x) {
  double density = 0.0;
  for (const auto& g : components) {
    require(g.mean.size() == x.size() && g.stddev.size() == x.size(),
            ErrorCode::DimensionMismatch, "mixture component dimension");
    const Eigen::ArrayXd z = (x - g.mean).array() / g.stddev.array();
    const double norm = std::pow(2.0 * std::numbers::pi, -0.5 * static_cast<double>(x.size())) /
                        g.stddev.prod();
    density += g.weight * norm * std::exp(-0.5 * z.square().sum());
  }
  return density;
}

DiscreteMeasure discretize_mixture(const std::vector<GaussianComponent>& components,
                                   RowMatrix nodes) {
  Vector weights(nodes.rows());
  for (Index i = 0; i < nodes.rows(); ++i)
    weights[i] = mixture_density(components, nodes.row(i).transpose());
  return discrete_from_points(std::move(nodes), weights);
}

RowMatrix regular_grid(Index per_axis, Index dim) {
  require(per_axis >= 1 && dim >= 1, ErrorCode::EmptySupport, "grid needs a positive size");
  Index total = 1;
  for (Index k = 0; k < dim; ++k) total *= per_axis;
  RowMatrix grid(total, dim);
  for (Index i = 0; i < total; ++i) {
    Index rest = i;
    for (Index k = dim - 1; k >= 0; --k) {
      grid(i, k) = (static_cast<double>(rest % per_axis) + 0.5) / static_cast<double>(per_axis);
      rest /= per_axis;
    }
  }
  return grid;
}

RowMatrix rescale_unit_box(const RowMatrix& points) {
  RowMatrix out(points.rows(), points.cols());
  for (Index k = 0; k < points.cols(); ++k) {
    const double lo = points.col(k).minCoeff();
    const double span = points.col(k).maxCoeff() - lo;
    if (span > 0.0) {
      out.col(k) = (points.col(k).array() - lo) / span;
    } else {
      out.col(k).setZero();
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sampling

SampleSource::SampleSource(Kind kind, Index dim, std::uint64_t seed)
    : kind_(std::move(kind)), dim_(dim), rng_(seed) {}

SampleSource SampleSource::empirical(std::shared_ptr<const DiscreteMeasure> measure,
                                     std::uint64_t seed) {
  require(measure != nullptr, ErrorCode::EmptySupport, "empirical source without a measure");
  const auto& w = measure->weights();
  boost::random::discrete_distribution<Index, double> pick(w.data(), w.data() + w.size());
  const Index dim = measure->dim();
  return SampleSource(Empirical{std::move(measure), std::move(pick)}, dim, seed);
}

SampleSource SampleSource::gaussian_mixture(std::vector<GaussianComponent> components, Box box,
                                            std::uint64_t seed) {
  require(!components.empty(), ErrorCode::EmptySupport, "mixture without components");
  const Index dim = box.lower.size();
  std::vector<double> w;
  for (const auto& g : components) {
    require(g.weight > 0.0, ErrorCode::NonPositiveWeight, "mixture weight");
    require(g.mean.size() == dim && g.stddev.size() == dim && box.upper.size() == dim,
            ErrorCode::DimensionMismatch, "mixture component dimension");
    w.push_back(g.weight);
  }
  boost::random::discrete_distribution<std::size_t, double> pick(w.begin(), w.end());
  return SampleSource(Mixture{std::move(components), std::move(pick), std::move(box)}, dim,
                      seed);
}

SampleSource SampleSource::uniform_hypercube(Index dim, std::uint64_t seed) {
  require(dim >= 1, ErrorCode::DimensionMismatch, "hypercube dimension must be positive");
  return SampleSource(Uniform{}, dim, seed);
}

Index SampleSource::next_atom() {
  auto* e = std::get_if<Empirical>(&kind_);
  require(e != nullptr, ErrorCode::ConfigInconsistent, "next_atom on a non-empirical source");
  return e->pick(rng_);
}

bool SampleSource::next(Eigen::Ref<Vector> x) {
  if (auto* e = std::get_if<Empirical>(&kind_)) {
    x = e->measure->point(e->pick(rng_));
  } else if (auto* m = std::get_if<Mixture>(&kind_)) {
    for (long attempt = 0;; ++attempt) {
      require(attempt < kMaxRejections, ErrorCode::RejectionLimit,
              "truncated mixture rejected " + std::to_string(kMaxRejections) + " draws");
      const auto& g = m->components[m->pick(rng_)];
      for (Index k = 0; k < dim_; ++k) x[k] = g.mean[k] + g.stddev[k] * standard_normal(rng_);
      if (m->box.contains(x)) break;
    }
  } else {
    for (Index k = 0; k < dim_; ++k) x[k] = uniform01(rng_);
  }
  return true;
}

RowMatrix SampleSource::draw(Index n) {
  RowMatrix out(n, dim_);
  Vector x(dim_);
  for (Index i = 0; i < n; ++i) {
    next(x);
    out.row(i) = x.transpose();
  }
  return out;
}

const DiscreteMeasure* SampleSource::discrete_measure() const {
  if (const auto* e = std::get_if<Empirical>(&kind_)) return e->measure.get();
  return nullptr;
}

// ---------------------------------------------------------------------------
// Costs

CostSpec CostSpec::custom(RowMatrix table) {
  require(table.size() > 0, ErrorCode::EmptySupport, "empty cost table");
  require((table.array() >= 0.0).all() && table.allFinite(), ErrorCode::NegativeCost,
          "cost table entries must be finite and nonnegative");
  return CostSpec(Kind::Custom, std::make_shared<const RowMatrix>(std::move(table)));
}

namespace {

Index table_index(double coordinate, Index limit) {
  const double r = std::round(coordinate);
  require(r == coordinate && r >= 0.0 && r < static_cast<double>(limit),
          ErrorCode::IndexOutOfRange, "custom cost index " + std::to_string(coordinate));
  return static_cast<Index>(r);
}

}  // namespace

double CostSpec::operator()(ConstVectorRef x, ConstVectorRef y) const {
  require(x.size() == y.size(), ErrorCode::DimensionMismatch,
          "cost between dimensions " + std::to_string(x.size()) + " and " +
              std::to_string(y.size()));
  switch (kind_) {
    case Kind::Euclidean: return (x - y).norm();
    case Kind::SquaredEuclidean: return (x - y).squaredNorm();
    case Kind::Custom:
      require(x.size() == 1, ErrorCode::DimensionMismatch, "custom cost expects index points");
      return (*table_)(table_index(x[0], table_->rows()), table_index(y[0], table_->cols()));
  }
  return 0.0;
}

void CostSpec::row(ConstVectorRef x, const RowMatrix& targets, Eigen::Ref<Vector> out) const {
  const Index J = targets.rows();
  require(x.size() == targets.cols(), ErrorCode::DimensionMismatch,
          "point of dimension " + std::to_string(x.size()) + " against targets of dimension " +
              std::to_string(targets.cols()));
  switch (kind_) {
    case Kind::Euclidean:
      for (Index j = 0; j < J; ++j) out[j] = (targets.row(j).transpose() - x).norm();
      break;
    case Kind::SquaredEuclidean:
      for (Index j = 0; j < J; ++j) out[j] = (targets.row(j).transpose() - x).squaredNorm();
      break;
    case Kind::Custom: {
      require(x.size() == 1, ErrorCode::DimensionMismatch, "custom cost expects index points");
      const Index i = table_index(x[0], table_->rows());
      for (Index j = 0; j < J; ++j) out[j] = (*table_)(i, table_index(targets(j, 0), table_->cols()));
      break;
    }
  }
}

double cost(const CostSpec& spec, ConstVectorRef x, ConstVectorRef y) { return spec(x, y); }

CostMatrix cost_matrix(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                       const CostSpec& spec) {
  require(mu.dim() == nu.dim(), ErrorCode::DimensionMismatch,
          "source dimension " + std::to_string(mu.dim()) + " vs target dimension " +
              std::to_string(nu.dim()));
  CostMatrix out;
  kernels::omp::cost_matrix(mu.points(), nu.points(), spec, out.values);
  return out;
}

}  // namespace rmot
