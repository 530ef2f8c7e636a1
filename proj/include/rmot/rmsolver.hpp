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

#ifndef RMOT_RMSOLVER_HPP
#define RMOT_RMSOLVER_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "rmot/measures.hpp"
#include "rmot/semidual.hpp"

namespace rmot {

/// gamma_n = gamma / n^c.
struct StepSchedule {
  double gamma = 1.0;
  double c = 0.51;
};

double step_size(const StepSchedule& schedule, std::int64_t n);

/// eps / (2 nu_min) for eps > 0, eps_min / (4 nu_min) for eps = 0.
double default_gamma(double eps, const DiscreteMeasure& nu, double eps_min = 0.01);

/// nu_min / eps for eps > 0; nu_min / eps_min for eps = 0.
double default_alpha(double eps, const DiscreteMeasure& nu, double eps_min = 0.01);

struct InitialPotential {
  enum class Kind { Zero, UnitDirection, Given };
  Kind kind = Kind::Zero;
  Vector given;

  static InitialPotential zero() { return {}; }
  static InitialPotential unit_direction() { return {Kind::UnitDirection, {}}; }
  static InitialPotential from(Vector v) { return {Kind::Given, std::move(v)}; }
};

struct RunConfig {
  double eps = 0.1;
  /// 0 runs the projected recursion; > 0 adds the penalty
  /// -alpha <V, v_J> v_J with v_J = 1_J / sqrt(J).
  double alpha = 0.0;
  StepSchedule schedule;
  std::int64_t n_iters = 0;
  std::uint64_t seed = 0;
  InitialPotential init;
  std::int64_t record_every = 1000;
  double level = 0.95;

  /// Throws ConfigInconsistent when the settings cannot run on J atoms.
  void validate(Index J) const;
};

/// Iterate, running average and online statistics of one Robbins-Monro run.
///
/// After n steps: v_bar = (1/n) sum_{k=1..n} V_k (V_0 excluded), and
/// w_hat / s2_accum are the means of h(X_k, V_{k-1}) and its square, always
/// evaluated at the potential held before consuming X_k.
class SolverState {
 public:
  static SolverState initial(const RunConfig& config, Index J);

  const DualPotential& v_hat() const noexcept { return v_hat_; }
  const Vector& v_bar() const noexcept { return v_bar_; }
  std::int64_t n() const noexcept { return n_; }
  double w_hat() const noexcept { return w_hat_; }
  double s2_accum() const noexcept { return s2_accum_; }
  /// s2_accum - w_hat^2, clamped at 0.
  double sigma2_hat() const noexcept;
  double sigma_hat() const noexcept;

 private:
  friend void rm_step_from_costs(SolverState&, ConstVectorRef, const DiscreteMeasure&,
                                 const RunConfig&);
  friend void rm_step_unregularized_from_costs(SolverState&, ConstVectorRef,
                                               const DiscreteMeasure&, const RunConfig&);
  friend void rm_step(SolverState&, ConstVectorRef, const DiscreteMeasure&, const CostSpec&,
                      const RunConfig&);
  friend void rm_step_unregularized(SolverState&, ConstVectorRef, const DiscreteMeasure&,
                                    const CostSpec&, const RunConfig&);

  SolverState(DualPotential v0, Index J);
  void finish_step(double h, const RunConfig& config);

  DualPotential v_hat_;
  Vector v_bar_;
  std::int64_t n_ = 0;
  double w_hat_ = 0.0;
  double s2_accum_ = 0.0;
  // scratch
  Vector costs_;
  Vector direction_;
};

/// One step of the regularized recursion on sample x (eps > 0).
void rm_step(SolverState& state, ConstVectorRef x, const DiscreteMeasure& nu,
             const CostSpec& cost, const RunConfig& config);
/// One supergradient step of the unregularized recursion (eps = 0).
void rm_step_unregularized(SolverState& state, ConstVectorRef x, const DiscreteMeasure& nu,
                           const CostSpec& cost, const RunConfig& config);

/// Same steps from the precomputed cost row c(x, y_j).
void rm_step_from_costs(SolverState& state, ConstVectorRef costs, const DiscreteMeasure& nu,
                        const RunConfig& config);
void rm_step_unregularized_from_costs(SolverState& state, ConstVectorRef costs,
                                      const DiscreteMeasure& nu, const RunConfig& config);

struct Interval {
  double lower;
  double upper;

  bool contains(double value) const noexcept { return lower <= value && value <= upper; }
  double width() const noexcept { return upper - lower; }
};

/// Standard normal quantile function.
double normal_quantile(double p);

/// w_hat +- z sigma_hat / sqrt(n), z the two-sided normal quantile of `level`.
Interval confidence_interval(const SolverState& state, double level);

struct TraceRecord {
  std::int64_t n = 0;
  double w_hat = 0.0;
  double sigma_hat = 0.0;
  std::optional<Interval> ci;
  std::optional<double> grad_norm;
  Vector v_hat;
  Vector v_bar;
};

struct RunTrace {
  std::vector<TraceRecord> records;
  SolverState final_state;
  double eps = 0.0;
  /// Set for eps = 0, where the normal approximation behind the intervals
  /// is conjectured rather than proven.
  bool conjectural_ci = false;
};

/// Runs config.n_iters steps (fewer if a finite stream runs dry), recording
/// every record_every steps plus the initial and final states. Gradient
/// norms are recorded when `exact` supplies a discrete source.
RunTrace run(const RunConfig& config, SampleStream& source, const DiscreteMeasure& nu,
             const CostSpec& cost, const DiscreteProblem* exact = nullptr);

/// Samples the discrete source of `problem` with seed config.seed, reading
/// costs from the precomputed matrix.
RunTrace run(const RunConfig& config, const DiscreteProblem& problem);

/// Columns n,w_hat,sigma_hat,ci_lo,ci_hi,grad_norm,v_0..v_{J-1}; undefined
/// fields are left empty.
void write_trace_csv(std::ostream& out, const RunTrace& trace);

}  // namespace rmot

#endif  // RMOT_RMSOLVER_HPP
