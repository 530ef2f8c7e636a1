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

#include "rmot/rmsolver.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include "rmot/csv.hpp"
#include "rmot/error.hpp"
#include "rmot/kernels.hpp"

namespace rmot {

double step_size(const StepSchedule& schedule, std::int64_t n) {
  require(n >= 1, ErrorCode::ZeroIteration, "step sizes are indexed from n = 1");
  return schedule.gamma / std::pow(static_cast<double>(n), schedule.c);
}

double default_gamma(double eps, const DiscreteMeasure& nu, double eps_min) {
  if (eps > 0.0) return eps / (2.0 * nu.min_weight());
  return eps_min / (4.0 * nu.min_weight());
}

double default_alpha(double eps, const DiscreteMeasure& nu, double eps_min) {
  return nu.min_weight() / (eps > 0.0 ? eps : eps_min);
}

void RunConfig::validate(Index J) const {
  require(eps >= 0.0 && std::isfinite(eps), ErrorCode::NegativeEpsilon,
          "epsilon must be nonnegative, got " + std::to_string(eps));
  require(alpha >= 0.0, ErrorCode::ConfigInconsistent, "alpha must be nonnegative");
  require(schedule.gamma > 0.0, ErrorCode::ConfigInconsistent, "gamma must be positive");
  require(schedule.c > 0.5 && schedule.c <= 1.0, ErrorCode::ConfigInconsistent,
          "step exponent c must lie in (1/2, 1], got " + std::to_string(schedule.c));
  require(n_iters >= 0, ErrorCode::ConfigInconsistent, "negative iteration budget");
  require(record_every >= 1, ErrorCode::ConfigInconsistent, "record_every must be positive");
  require(level > 0.0 && level < 1.0, ErrorCode::ConfigInconsistent, "level must lie in (0,1)");
  if (init.kind == InitialPotential::Kind::Given) {
    require(init.given.size() == J, ErrorCode::ConfigInconsistent,
            "initial potential has " + std::to_string(init.given.size()) + " entries, expected " +
                std::to_string(J));
  }
  if (alpha == 0.0) {
    bool centred = true;
    if (init.kind == InitialPotential::Kind::UnitDirection) centred = false;
    if (init.kind == InitialPotential::Kind::Given)
      centred = std::abs(init.given.sum()) <= 1e-9 * std::max(1.0, init.given.norm());
    require(centred, ErrorCode::ConfigInconsistent,
            "alpha = 0 needs an initial potential on the zero-mean hyperplane");
  }
}

// ---------------------------------------------------------------------------
// SolverState

SolverState::SolverState(DualPotential v0, Index J)
    : v_hat_(std::move(v0)), v_bar_(v_hat_.values()), costs_(J), direction_(J) {}

SolverState SolverState::initial(const RunConfig& config, Index J) {
  config.validate(J);
  const bool project = config.alpha == 0.0;
  switch (config.init.kind) {
    case InitialPotential::Kind::Zero:
      return SolverState(DualPotential(Vector::Zero(J), project), J);
    case InitialPotential::Kind::UnitDirection:
      return SolverState(DualPotential::unit_direction(J), J);
    case InitialPotential::Kind::Given:
      return SolverState(DualPotential(config.init.given, project), J);
  }
  return SolverState(DualPotential(Vector::Zero(J), project), J);
}

double SolverState::sigma2_hat() const noexcept {
  return std::max(0.0, s2_accum_ - w_hat_ * w_hat_);
}

double SolverState::sigma_hat() const noexcept { return std::sqrt(sigma2_hat()); }

// direction_ holds the (super)gradient at V_n; h is h(X_{n+1}, V_n).
void SolverState::finish_step(double h, const RunConfig& config) {
  const double gamma = step_size(config.schedule, n_ + 1);
  Vector& v = v_hat_.values();
  if (config.alpha > 0.0) direction_.array() -= config.alpha * v.mean();
  v.noalias() += gamma * direction_;
  v_hat_.enforce_zero_mean();

  const double inv = 1.0 / static_cast<double>(n_ + 1);
  w_hat_ += (h - w_hat_) * inv;
  s2_accum_ += (h * h - s2_accum_) * inv;
  v_bar_ += (v - v_bar_) * inv;
  ++n_;
}

void rm_step_from_costs(SolverState& state, ConstVectorRef costs, const DiscreteMeasure& nu,
                        const RunConfig& config) {
  require(config.eps > 0.0, ErrorCode::NonPositiveEpsilon,
          "regularized step needs eps > 0, got " + std::to_string(config.eps));
  const double h = assignment_and_h_from_costs(costs, state.v_hat_.values(), nu, config.eps,
                                               state.direction_);
  state.direction_ = nu.weights() - state.direction_;
  state.finish_step(h, config);
}

void rm_step_unregularized_from_costs(SolverState& state, ConstVectorRef costs,
                                      const DiscreteMeasure& nu, const RunConfig& config) {
  require(config.eps == 0.0, ErrorCode::PositiveEpsilon,
          "unregularized step needs eps = 0, got " + std::to_string(config.eps));
  const Vector& v = state.v_hat_.values();
  const Index j = kernels::argmin_reduced_cost(costs.data(), v.data(), nu.size());
  const double h = v.dot(nu.weights()) + (costs[j] - v[j]);
  state.direction_ = nu.weights();
  state.direction_[j] -= 1.0;
  state.finish_step(h, config);
}

void rm_step(SolverState& state, ConstVectorRef x, const DiscreteMeasure& nu,
             const CostSpec& cost, const RunConfig& config) {
  cost.row(x, nu.points(), state.costs_);
  rm_step_from_costs(state, state.costs_, nu, config);
}

void rm_step_unregularized(SolverState& state, ConstVectorRef x, const DiscreteMeasure& nu,
                           const CostSpec& cost, const RunConfig& config) {
  cost.row(x, nu.points(), state.costs_);
  rm_step_unregularized_from_costs(state, state.costs_, nu, config);
}

Interval confidence_interval(const SolverState& state, double level) {
  require(state.n() >= 2, ErrorCode::InsufficientSamples,
          "confidence intervals need n >= 2, have " + std::to_string(state.n()));
  const double z = normal_quantile(0.5 + 0.5 * level);
  const double half = z * state.sigma_hat() / std::sqrt(static_cast<double>(state.n()));
  return Interval{state.w_hat() - half, state.w_hat() + half};
}

// ---------------------------------------------------------------------------
// Driver

namespace {

TraceRecord snapshot(const SolverState& state, const RunConfig& config,
                     const DiscreteProblem* exact) {
  TraceRecord r;
  r.n = state.n();
  r.w_hat = state.w_hat();
  r.sigma_hat = state.sigma_hat();
  if (state.n() >= 2) r.ci = confidence_interval(state, config.level);
  if (exact != nullptr) r.grad_norm = exact_grad_H(*exact, state.v_hat(), config.eps).norm();
  r.v_hat = state.v_hat().values();
  r.v_bar = state.v_bar();
  return r;
}

// `next_costs(row)` fills the cost row of the next sample and returns false
// when the source is exhausted.
template <class NextCosts>
RunTrace drive(const RunConfig& config, const DiscreteMeasure& nu, const DiscreteProblem* exact,
               NextCosts&& next_costs) {
  RunTrace trace{{}, SolverState::initial(config, nu.size()), config.eps, config.eps == 0.0};
  SolverState& state = trace.final_state;
  trace.records.push_back(snapshot(state, config, exact));

  Vector costs(nu.size());
  for (std::int64_t k = 0; k < config.n_iters; ++k) {
    if (!next_costs(costs)) break;
    if (config.eps > 0.0) {
      rm_step_from_costs(state, costs, nu, config);
    } else {
      rm_step_unregularized_from_costs(state, costs, nu, config);
    }
    if (state.n() % config.record_every == 0) trace.records.push_back(snapshot(state, config, exact));
  }
  if (trace.records.back().n != state.n()) trace.records.push_back(snapshot(state, config, exact));
  return trace;
}

}  // namespace

RunTrace run(const RunConfig& config, SampleStream& source, const DiscreteMeasure& nu,
             const CostSpec& cost, const DiscreteProblem* exact) {
  require(source.dim() == nu.dim() || cost.kind() == CostSpec::Kind::Custom,
          ErrorCode::DimensionMismatch, "source and target dimensions differ");
  Vector x(source.dim());
  return drive(config, nu, exact, [&](Vector& costs) {
    if (!source.next(x)) return false;
    cost.row(x, nu.points(), costs);
    return true;
  });
}

RunTrace run(const RunConfig& config, const DiscreteProblem& problem) {
  const auto& w = problem.mu.weights();
  boost::random::discrete_distribution<Index, double> pick(w.data(), w.data() + w.size());
  Rng rng(config.seed);
  return drive(config, problem.nu, &problem, [&](Vector& costs) {
    costs = problem.C.values.row(pick(rng)).transpose();
    return true;
  });
}

void write_trace_csv(std::ostream& out, const RunTrace& trace) {
  const Index J = trace.final_state.v_hat().size();
  out << "n,w_hat,sigma_hat,ci_lo,ci_hi,grad_norm";
  for (Index j = 0; j < J; ++j) out << ",v_" << j;
  out << '\n';
  for (const auto& r : trace.records) {
    out << r.n << ',';
    if (r.n >= 1) out << format_number(r.w_hat) << ',' << format_number(r.sigma_hat);
    else out << ',';
    out << ',';
    if (r.ci) out << format_number(r.ci->lower) << ',' << format_number(r.ci->upper);
    else out << ',';
    out << ',';
    if (r.grad_norm) out << format_number(*r.grad_norm);
    for (Index j = 0; j < J; ++j) out << ',' << format_number(r.v_hat[j]);
    out << '\n';
  }
}

}  // namespace rmot
