#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "proxvr/problem.hpp"
#include "proxvr/prox.hpp"
#include "proxvr/sampling.hpp"
#include "proxvr/vec.hpp"

namespace proxvr {

// Signed slack of an inequality lhs <= rhs: value = rhs - lhs, so negative
// means violated. scale is the magnitude of the larger side, for relative
// tolerancing.
struct Residual {
  double value = 0.0;
  double scale = 0.0;
};

// One-step decrease certificate. For x_plus = prox_{eta h}(x - eta v) and any
// z with h(z) finite,
//   Phi(x_plus) <= Phi(z) + <grad_f(x) - v, x_plus - z>
//                 - (1/eta) <x_plus - x, x_plus - z>
//                 + (L/2) ||x_plus - x||^2 + (L/2) ||z - x||^2
// for every eta > 0. Feasibility of x itself is not required. Returns
// rhs - lhs; throws if h(z) is infinite (the bound is vacuous there).
Residual descent_inequality_residual(const FiniteSumProblem& p, const Vec& x,
                                     const Vec& v, const Vec& z, double eta);

// How far a step taken with the estimate v lands from the step taken with the
// exact gradient. For x_v = prox_{eta h}(x - eta v) and
// x_g = prox_{eta h}(x - eta grad_f(x)):
//   distance: ||x_v - x_g||               <= eta ||grad_f(x) - v||
//   inner:    <grad_f(x) - v, x_v - x_g>  <= eta ||grad_f(x) - v||^2
struct ShiftResiduals {
  Residual inner;
  Residual distance;
};
ShiftResiduals estimator_shift_residuals(const FiniteSumProblem& p, const Vec& x,
                                         const Vec& v, double eta);

// Closed-form second moment of the variance-reduced estimator
//   v = (1/b) sum_{i in I} (grad_i(x) - grad_i(snapshot)) + g_B
// where I holds b i.i.d. uniform indices and g_B averages B i.i.d. uniform
// component gradients at the snapshot (the exact full gradient when B = n):
//   exact = (1/b) popvar_i[grad_i(x) - grad_i(snapshot)]
//         + [B < n] (1/B) popvar_i[grad_i(snapshot)]
// with popvar the population variance over components. bound replaces the
// first term by its smoothness majorant (L^2 / b) ||x - snapshot||^2 and
// keeps the exact point variance in the second, so exact <= bound always.
struct VariancePair {
  double exact = 0.0;
  double bound = 0.0;
};
VariancePair estimator_variance_exact(const FiniteSumProblem& p, const Vec& x,
                                      const Vec& snapshot, std::size_t b, std::size_t B);

// Monte Carlo mean of ||v - grad_f(x)||^2 over independent draws of the
// estimator above, drawing both index sets through the given sampler.
// std_error is the sample standard error of the mean (0 when trials == 1).
struct VarianceEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t trials = 0;
};
VarianceEstimate estimator_variance_empirical(const FiniteSumProblem& p, const Vec& x,
                                              const Vec& snapshot, std::size_t b,
                                              std::size_t B, std::size_t trials,
                                              MinibatchSampler& sampler);

// Linear-convergence certificates at one point, relative to the problem's
// curvature constant mu and reference optimum:
//   mapping_form: ||G_eta(x)||^2 >= 2 mu (Phi(x) - Phi*)
//   gap_form:     D(x, 1/eta)    >= 2 mu (Phi(x) - Phi*)
//   cross:        D(x, 1/eta)    >= ||G_eta(x)||^2
// gap_form and cross hold for all three nonsmooth terms when the smooth part
// has curvature mu; mapping_form is only guaranteed with h = 0, and
// mapping_asserted reports which case applies. Requires pl_mu and phi_star.
struct PlResiduals {
  Residual mapping_form;
  Residual gap_form;
  Residual cross;
  bool mapping_asserted = false;
};
PlResiduals pl_point_residuals(const FiniteSumProblem& p, const Vec& x, double eta);

// Aggregate of one inequality check over randomized trials. worst_residual is
// the smallest signed slack seen; a trial counts as a violation when its
// residual falls below -(slack + slack * scale). Rows with asserted == false
// are informational (the inequality is not guaranteed in that configuration)
// and do not gate pass/fail decisions.
struct InequalityReport {
  std::string suite;
  std::string check;
  std::size_t trials = 0;
  std::size_t violations = 0;
  double worst_residual = std::numeric_limits<double>::infinity();
  double slack = 1e-9;
  bool asserted = true;
};

// Evaluates the three certificates above at every point and aggregates one
// report row per form: mapping_form, gap_form, gap_dominates_mapping.
std::vector<InequalityReport> pl_certificate(const FiniteSumProblem& p,
                                             const std::vector<Vec>& points, double eta);

// Randomized low-dimensional instance for the inequality suites: a
// single-component quadratic with eigenvalue magnitudes in [0.1, 5] (possibly
// indefinite), the nonsmooth term cycling with seed % 3 (zero, l1,
// ball_nonneg), a base point x, a surrogate gradient estimate v, a feasible
// comparison point z, and a step size in [0.02, 1.02].
struct CompositeInstance {
  QuadraticProblem problem;
  Vec x;
  Vec v;
  Vec z;
  double eta = 0.0;
};
CompositeInstance random_composite_instance(std::uint64_t seed);

// Proximal operator properties, one fold per trial per row: nonexpansiveness
// (nonsmooth term cycling with the trial index), projection membership and
// idempotence, and the h = 0 collapses of the mapping and the gap.
std::vector<InequalityReport> run_prox_suite(std::size_t trials, std::uint64_t seed);

// One-step descent and estimator-shift inequalities over random composite
// instances.
std::vector<InequalityReport> run_lemma_suite(std::size_t trials, std::uint64_t seed);

// Estimator variance identities on a toy instance (n=6, d=4), one fold per
// (b, B) in {1,2,4,6}^2: exact formula vs closed-form bound, the same bound
// with sigma routed through estimate_sigma, and Monte Carlo agreement within
// 3 standard errors under both index policies. Here `trials` is the Monte
// Carlo draw count per configuration (floored at 1000 so the standard error
// is meaningful); the without-replacement row is informational because the
// closed-form moments assume independent draws.
std::vector<InequalityReport> run_variance_suite(std::size_t trials, std::uint64_t seed);

// Linear-convergence certificates on synthetic curved instances with h = 0
// and h = 0.1 ||.||_1 (`trials` random points each), plus the
// gap-dominates-mapping relation on `trials` random composite instances.
std::vector<InequalityReport> run_pl_suite(std::size_t trials, std::uint64_t seed);

// All four suites concatenated in the order prox, lemmas, variance, pl.
std::vector<InequalityReport> run_all_suites(std::size_t trials, std::uint64_t seed);

}  // namespace proxvr
