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

#include "rmot/diagnostics.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <ostream>
#include <string>

#include <Eigen/Eigenvalues>
#include <boost/random/discrete_distribution.hpp>

#include "rmot/baselines.hpp"
#include "rmot/csv.hpp"
#include "rmot/error.hpp"
#include "rmot/rng.hpp"

namespace rmot {

namespace {

constexpr double kRelativeFloor = 1e-3;

double relative_error(const Eigen::Ref<const Matrix>& analytic,
                      const Eigen::Ref<const Matrix>& numeric) {
  return (analytic - numeric).norm() / std::max(numeric.norm(), kRelativeFloor);
}

int thread_count(int jobs) { return jobs > 0 ? jobs : omp_get_max_threads(); }

}  // namespace

double gradient_audit(std::int64_t trials, std::uint64_t seed, AuditMode mode,
                      const std::vector<Index>& sizes) {
  require(trials >= 1, ErrorCode::ConfigInconsistent, "audit needs at least one trial");
  require(!sizes.empty(), ErrorCode::ConfigInconsistent, "audit needs at least one support size");
  static constexpr double kEps[] = {0.05, 0.5, 5.0};
  const CostSpec cost = CostSpec::euclidean();
  double worst = 0.0;
  for (std::int64_t t = 0; t < trials; ++t) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
    const double eps = kEps[t % 3];
    const Index J = sizes[static_cast<std::size_t>((t / 3) % static_cast<std::int64_t>(sizes.size()))];
    // h is constant in v when there is a single atom.
    if (J == 1) continue;

    RowMatrix ys(J, 2);
    Vector masses(J);
    Vector v0(J);
    for (Index j = 0; j < J; ++j) {
      ys(j, 0) = uniform01(rng);
      ys(j, 1) = uniform01(rng);
      masses[j] = 0.2 + 0.8 * uniform01(rng);
      v0[j] = 0.5 * standard_normal(rng);
    }
    const DiscreteMeasure nu = discrete_from_points(ys, masses);
    Vector x(2);
    x << uniform01(rng), uniform01(rng);
    const DualPotential v(v0);
    const double step = 1e-5 * eps;

    auto shifted = [&](Index j, double s) {
      Vector w = v0;
      w[j] += s;
      return DualPotential(w);
    };
    if (mode == AuditMode::Gradient) {
      const Vector analytic = grad_h(x, v, nu, cost, eps);
      Vector numeric(J);
      for (Index j = 0; j < J; ++j)
        numeric[j] = (h_eps(x, shifted(j, step), nu, cost, eps) -
                      h_eps(x, shifted(j, -step), nu, cost, eps)) /
                     (2.0 * step);
      worst = std::max(worst, relative_error(analytic, numeric));
    } else {
      const Matrix analytic = hessian_h(x, v, nu, cost, eps);
      Matrix numeric(J, J);
      for (Index j = 0; j < J; ++j)
        numeric.col(j) = (grad_h(x, shifted(j, step), nu, cost, eps) -
                          grad_h(x, shifted(j, -step), nu, cost, eps)) /
                         (2.0 * step);
      worst = std::max(worst, relative_error(analytic, numeric));
    }
  }
  return worst;
}

Vector pq_formula_values(const Vector& pi) {
  const Index J = pi.size();
  Vector out(std::max<Index>(J - 1, 0));
  double tail = 1.0;
  for (Index j = 0; j + 1 < J; ++j) {
    tail -= pi[j];
    const double p = pi[j];
    const double q = tail;
    out[j] = p + q > 0.0 ? p * q / (p + q) : 0.0;
  }
  return out;
}

bool SpectralReport::second_eigenvalue_bound() const {
  if (!bound_checked || !second_smallest) return true;
  return *second_smallest >= lower_bound - 1e-8;
}

SpectralReport spectral_audit(const DiscreteProblem& problem, const DualPotential& v, double eps,
                              bool at_optimum) {
  require(eps > 0.0, ErrorCode::NonPositiveEpsilon,
          "spectral audit needs eps > 0, got " + std::to_string(eps));
  const Index J = problem.nu.size();
  if (at_optimum) {
    const double g = exact_grad_H(problem, v, eps).norm();
    require(g <= 1e-6, ErrorCode::NotAtOptimum,
            "gradient norm " + format_number(g) + " exceeds 1e-6");
  }

  SpectralReport r;
  const Matrix A = exact_hessian_H(problem, v, eps);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(A, Eigen::EigenvaluesOnly);
  r.eigenvalues = solver.eigenvalues();
  r.max_eigenvalue = r.eigenvalues.maxCoeff();
  const double frob = A.norm();
  r.kernel_residual = frob > 0.0 ? (A * Vector::Ones(J)).norm() / frob : 0.0;
  r.lower_bound = problem.nu.min_weight() / eps;
  r.bound_checked = at_optimum;
  if (J >= 2) {
    // Ascending eigenvalues of -A are the negated eigenvalues of A reversed.
    r.second_smallest = -r.eigenvalues[J - 2];
  }

  Vector pi(J);
  Vector costs(J);
  for (Index i = 0; i < problem.mu.size(); ++i) {
    costs = problem.C.values.row(i).transpose();
    assignment_and_h_from_costs(costs, v.values(), problem.nu, eps, pi);
    Matrix S = -pi * pi.transpose();
    S.diagonal() += pi;
    Eigen::SelfAdjointEigenSolver<Matrix> local(S, Eigen::EigenvaluesOnly);
    // Drop the zero eigenvalue (smallest) and compare the rest.
    Vector positive = local.eigenvalues().tail(J - 1);
    Vector formula = pq_formula_values(pi);
    std::sort(formula.data(), formula.data() + formula.size());
    if (J >= 2) r.formula_mismatch = std::max(r.formula_mismatch, (positive - formula).cwiseAbs().maxCoeff());
  }
  return r;
}

CoverageReport coverage_study(const DiscreteProblem& problem, const RunConfig& config,
                              std::int64_t n_reps, double level, int jobs) {
  require(config.eps > 0.0, ErrorCode::NonPositiveEpsilon,
          "coverage needs eps > 0 for a Sinkhorn ground truth");
  require(n_reps >= 50, ErrorCode::ConfigInconsistent,
          "coverage needs at least 50 repetitions, got " + std::to_string(n_reps));
  require(level > 0.0 && level < 1.0, ErrorCode::ConfigInconsistent, "level must lie in (0,1)");
  config.validate(problem.nu.size());

  CoverageReport report;
  report.n_reps = n_reps;
  report.n_iters = config.n_iters;
  report.level = level;
  report.truth = sinkhorn(problem.mu, problem.nu, problem.C, config.eps).value;
  report.reps.resize(static_cast<std::size_t>(n_reps));

  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic) num_threads(thread_count(jobs))
  for (std::int64_t k = 0; k < n_reps; ++k) {
    try {
      RunConfig local = config;
      local.seed = derive_seed(config.seed, static_cast<std::uint64_t>(k));
      local.level = level;
      local.record_every = std::max<std::int64_t>(1, config.n_iters);
      const RunTrace trace = run(local, problem);
      const Interval ci = confidence_interval(trace.final_state, level);
      report.reps[static_cast<std::size_t>(k)] = {local.seed, trace.final_state.w_hat(), ci,
                                                  ci.contains(report.truth)};
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  double width = 0.0;
  for (const auto& rep : report.reps) {
    report.hits += rep.hit ? 1 : 0;
    width += rep.ci.width();
  }
  report.coverage = static_cast<double>(report.hits) / static_cast<double>(n_reps);
  report.mean_ci_width = width / static_cast<double>(n_reps);
  return report;
}

SlopeReport excess_risk_study(const DiscreteProblem& problem, const RunConfig& config,
                              const std::vector<std::int64_t>& checkpoints, std::int64_t n_seeds,
                              int jobs) {
  require(config.eps > 0.0 && config.eps <= 1.0, ErrorCode::ConfigInconsistent,
          "excess risk study needs 0 < eps <= 1, got " + std::to_string(config.eps));
  require(n_seeds >= 1, ErrorCode::ConfigInconsistent, "need at least one seed");
  require(!checkpoints.empty() && std::is_sorted(checkpoints.begin(), checkpoints.end()) &&
              checkpoints.front() >= 1,
          ErrorCode::ConfigInconsistent, "checkpoints must be positive and increasing");
  config.validate(problem.nu.size());

  const double optimum = full_gradient_ascent(problem, config.eps).value;
  const std::size_t K = checkpoints.size();
  Matrix excess(static_cast<Index>(n_seeds), static_cast<Index>(K));
  const Vector& w = problem.mu.weights();

#pragma omp parallel for schedule(dynamic) num_threads(thread_count(jobs))
  for (std::int64_t s = 0; s < n_seeds; ++s) {
    Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(s)));
    boost::random::discrete_distribution<Index, double> pick(w.data(), w.data() + w.size());
    SolverState state = SolverState::initial(config, problem.nu.size());
    std::size_t next = 0;
    while (next < K) {
      rm_step_from_costs(state, problem.C.values.row(pick(rng)).transpose(), problem.nu, config);
      while (next < K && state.n() == checkpoints[next]) {
        excess(s, static_cast<Index>(next)) = optimum - exact_H(problem, state.v_hat(), config.eps);
        ++next;
      }
    }
  }

  SlopeReport report;
  report.in_rate_range = config.schedule.c > 2.0 / 3.0 && config.schedule.c < 1.0;
  const Vector mean = excess.colwise().mean().transpose();
  bool positive = true;
  for (std::size_t k = 0; k < K; ++k) {
    report.checkpoints.push_back({checkpoints[k], mean[static_cast<Index>(k)]});
    positive = positive && mean[static_cast<Index>(k)] > 0.0;
  }
  if (!positive || K < 2) {
    report.fitted_slope = std::numeric_limits<double>::quiet_NaN();
    return report;
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& c : report.checkpoints) {
    const double lx = std::log(static_cast<double>(c.n));
    const double ly = std::log(c.excess);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double m = static_cast<double>(K);
  report.fitted_slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return report;
}

void write_coverage_csv(std::ostream& out, const CoverageReport& report) {
  out << "rep,seed,w_hat,ci_lo,ci_hi,hit\n";
  for (std::size_t k = 0; k < report.reps.size(); ++k) {
    const auto& r = report.reps[k];
    out << k << ',' << r.seed << ',' << format_number(r.w_hat) << ',' << format_number(r.ci.lower)
        << ',' << format_number(r.ci.upper) << ',' << (r.hit ? 1 : 0) << '\n';
  }
}

void write_slope_csv(std::ostream& out, const SlopeReport& report) {
  out << "n,excess\n";
  for (const auto& c : report.checkpoints) out << c.n << ',' << format_number(c.excess) << '\n';
}

}  // namespace rmot
