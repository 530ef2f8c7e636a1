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

#ifndef RMOT_DIAGNOSTICS_HPP
#define RMOT_DIAGNOSTICS_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "rmot/measures.hpp"
#include "rmot/rmsolver.hpp"
#include "rmot/semidual.hpp"

namespace rmot {

// ---------------------------------------------------------------------------
// Finite-difference audit

enum class AuditMode { Gradient, Hessian };

/// Max relative error |a - b| / max(|b|, 1e-3) between the analytic
/// derivative a and central differences b, over `trials` random draws of
/// (x, nu, v) with eps cycling through {0.05, 0.5, 5} and J through `sizes`.
double gradient_audit(std::int64_t trials, std::uint64_t seed, AuditMode mode = AuditMode::Gradient,
                      const std::vector<Index>& sizes = {2, 5, 10});

// ---------------------------------------------------------------------------
// Spectral audit of the expected Hessian A = Hess H_eps(v)

/// p_j q_j / (p_j + q_j), j = 1..J-1, with p_j = pi_j and
/// q_j = 1 - (pi_1 + ... + pi_j).
Vector pq_formula_values(const Vector& pi);

struct SpectralReport {
  Vector eigenvalues;               // of A, ascending
  double max_eigenvalue = 0.0;      // (a) should be <= 1e-10
  double kernel_residual = 0.0;     // (b) |A 1| / |A|_F
  std::optional<double> second_smallest;  // of -A; J >= 2
  double lower_bound = 0.0;         // min_j nu_j / eps
  /// Largest gap over source atoms between the positive eigenvalues of
  /// diag(pi) - pi pi^T and pq_formula_values(pi), both sorted.
  double formula_mismatch = 0.0;
  bool bound_checked = false;

  bool negative_semidefinite() const { return max_eigenvalue <= 1e-10; }
  bool kernel_contains_ones() const { return kernel_residual <= 1e-10; }
  /// Vacuously true when the bound was not requested or J = 1.
  bool second_eigenvalue_bound() const;
  bool formula_matches() const { return formula_mismatch <= 1e-10; }
};

/// With at_optimum set, also compares the second-smallest eigenvalue of -A
/// against min nu / eps; throws NotAtOptimum when |grad H(v)| > 1e-6.
SpectralReport spectral_audit(const DiscreteProblem& problem, const DualPotential& v, double eps,
                              bool at_optimum = false);

// ---------------------------------------------------------------------------
// Monte Carlo studies over seeded replicate runs

struct CoverageReport {
  std::int64_t n_reps = 0;
  std::int64_t n_iters = 0;
  double level = 0.0;
  std::int64_t hits = 0;
  double coverage = 0.0;
  double mean_ci_width = 0.0;
  double truth = 0.0;

  struct Rep {
    std::uint64_t seed;
    double w_hat;
    Interval ci;
    bool hit;
  };
  std::vector<Rep> reps;
};

/// Runs n_reps independent copies of `config` (seed k is
/// derive_seed(config.seed, k)) and counts how often the final level-CI
/// holds the Sinkhorn value. Needs eps > 0 and n_reps >= 50. `jobs` <= 0
/// uses the OpenMP default; the report does not depend on it.
CoverageReport coverage_study(const DiscreteProblem& problem, const RunConfig& config,
                              std::int64_t n_reps, double level, int jobs = 0);

struct SlopeReport {
  struct Checkpoint {
    std::int64_t n;
    double excess;  // mean of H(v*) - H(V_n) over seeds
  };
  std::vector<Checkpoint> checkpoints;
  double fitted_slope = 0.0;  // least squares on (log n, log excess); NaN if excess <= 0
  /// c in (2/3, 1), where the n^-(2c-1) rate is established.
  bool in_rate_range = false;
};

/// Mean excess risk of the iterate at each checkpoint over n_seeds runs of
/// `config`, with v* from full_gradient_ascent. Needs 0 < eps <= 1.
SlopeReport excess_risk_study(const DiscreteProblem& problem, const RunConfig& config,
                              const std::vector<std::int64_t>& checkpoints,
                              std::int64_t n_seeds = 20, int jobs = 0);

/// Columns rep,seed,w_hat,ci_lo,ci_hi,hit.
void write_coverage_csv(std::ostream& out, const CoverageReport& report);
/// Columns n,excess.
void write_slope_csv(std::ostream& out, const SlopeReport& report);

}  // namespace rmot

#endif  // RMOT_DIAGNOSTICS_HPP
