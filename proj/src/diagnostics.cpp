#include "proxvr/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "proxvr/dataset.hpp"
#include "proxvr/rng.hpp"

namespace proxvr {

namespace {

double larger_side(double a, double b) { return std::max(std::abs(a), std::abs(b)); }

InequalityReport make_report(const char* suite, const char* check, bool asserted = true) {
  InequalityReport rep;
  rep.suite = suite;
  rep.check = check;
  rep.asserted = asserted;
  return rep;
}

void fold(InequalityReport& rep, const Residual& r) {
  ++rep.trials;
  rep.worst_residual = std::min(rep.worst_residual, r.value);
  if (r.value < -(rep.slack + rep.slack * r.scale)) ++rep.violations;
}

Vec gaussian_vec(SplitMix64& rng, std::size_t d) {
  Vec x(d);
  for (double& c : x) c = rng.next_gaussian();
  return x;
}

// One row per component gradient.
Matrix gradient_table(const FiniteSumProblem& p, const Vec& x) {
  Matrix t(p.num_components(), p.dim());
  Vec g(p.dim());
  for (std::size_t i = 0; i < t.rows; ++i) {
    p.component_gradient(i, x, g);
    std::copy(g.begin(), g.end(), t.row(i).begin());
  }
  return t;
}

Vec row_mean(const Matrix& t) {
  Vec m(t.cols, 0.0);
  for (std::size_t i = 0; i < t.rows; ++i) axpy(1.0, t.row(i), m);
  scale(m, 1.0 / static_cast<double>(t.rows));
  return m;
}

// (1/rows) sum_i ||row_i - center||^2
double rows_popvar(const Matrix& t, const Vec& center) {
  double s = 0.0;
  for (std::size_t i = 0; i < t.rows; ++i) {
    const auto r = t.row(i);
    double d2 = 0.0;
    for (std::size_t j = 0; j < t.cols; ++j) {
      const double dv = r[j] - center[j];
      d2 += dv * dv;
    }
    s += d2;
  }
  return s / static_cast<double>(t.rows);
}

void require_step(double eta, const char* what) {
  if (!(eta > 0.0) || !std::isfinite(eta))
    throw std::invalid_argument(std::string(what) + ": eta must be positive and finite");
}

}  // namespace

Residual descent_inequality_residual(const FiniteSumProblem& p, const Vec& x,
                                     const Vec& v, const Vec& z, double eta) {
  require_step(eta, "descent_inequality_residual");
  check_same_dim(x, v, "descent_inequality_residual");
  check_same_dim(x, z, "descent_inequality_residual");
  const double phi_z = p.objective(z);
  if (!std::isfinite(phi_z))
    throw std::domain_error("descent_inequality_residual: z must be feasible");
  const Vec grad = p.full_gradient(x);
  const Vec xp = prox_linearized(x, v, eta, p.h());
  const Vec step = sub(xp, x);
  const Vec to_z = sub(xp, z);
  const Vec err = sub(grad, v);
  const double half_l = 0.5 * p.lipschitz();
  const double lhs = p.objective(xp);
  const double rhs = phi_z + dot(err, to_z) - dot(step, to_z) / eta +
                     half_l * norm_sq(step) + half_l * dist_sq(z, x);
  return {rhs - lhs, larger_side(lhs, rhs)};
}

ShiftResiduals estimator_shift_residuals(const FiniteSumProblem& p, const Vec& x,
                                         const Vec& v, double eta) {
  require_step(eta, "estimator_shift_residuals");
  check_same_dim(x, v, "estimator_shift_residuals");
  const Vec grad = p.full_gradient(x);
  const Vec xv = prox_linearized(x, v, eta, p.h());
  const Vec xg = prox_linearized(x, grad, eta, p.h());
  const Vec err = sub(grad, v);
  const Vec gap = sub(xv, xg);
  const double err_sq = norm_sq(err);
  const double inner_lhs = dot(err, gap);
  const double inner_rhs = eta * err_sq;
  const double dist_lhs = norm(gap);
  const double dist_rhs = eta * std::sqrt(err_sq);
  ShiftResiduals out;
  out.inner = {inner_rhs - inner_lhs, larger_side(inner_lhs, inner_rhs)};
  out.distance = {dist_rhs - dist_lhs, larger_side(dist_lhs, dist_rhs)};
  return out;
}

VariancePair estimator_variance_exact(const FiniteSumProblem& p, const Vec& x,
                                      const Vec& snapshot, std::size_t b, std::size_t B) {
  if (b == 0 || B == 0)
    throw std::invalid_argument("estimator_variance_exact: b and B must be >= 1");
  if (B > p.num_components())
    throw std::invalid_argument("estimator_variance_exact: B exceeds the component count");
  check_same_dim(x, snapshot, "estimator_variance_exact");
  const Matrix gx = gradient_table(p, x);
  const Matrix gs = gradient_table(p, snapshot);
  Matrix diff(gx.rows, gx.cols);
  for (std::size_t k = 0; k < diff.data.size(); ++k) diff.data[k] = gx.data[k] - gs.data[k];
  const double var_diff = rows_popvar(diff, row_mean(diff));

  VariancePair out;
  out.exact = var_diff / static_cast<double>(b);
  out.bound = p.lipschitz() * p.lipschitz() * dist_sq(x, snapshot) / static_cast<double>(b);
  if (B < p.num_components()) {
    const double var_snap = rows_popvar(gs, row_mean(gs));
    out.exact += var_snap / static_cast<double>(B);
    out.bound += var_snap / static_cast<double>(B);
  }
  return out;
}

VarianceEstimate estimator_variance_empirical(const FiniteSumProblem& p, const Vec& x,
                                              const Vec& snapshot, std::size_t b,
                                              std::size_t B, std::size_t trials,
                                              MinibatchSampler& sampler) {
  if (trials == 0)
    throw std::invalid_argument("estimator_variance_empirical: trials must be >= 1");
  if (b == 0 || B == 0)
    throw std::invalid_argument("estimator_variance_empirical: b and B must be >= 1");
  const std::size_t n = p.num_components();
  const std::size_t d = p.dim();
  if (B > n)
    throw std::invalid_argument("estimator_variance_empirical: B exceeds the component count");
  check_same_dim(x, snapshot, "estimator_variance_empirical");
  const Matrix gx = gradient_table(p, x);
  const Matrix gs = gradient_table(p, snapshot);
  const Vec grad_fx = row_mean(gx);
  const Vec snap_full = row_mean(gs);

  std::vector<std::uint32_t> idx;
  Vec v(d);
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    std::fill(v.begin(), v.end(), 0.0);
    sampler.sample(b, n, idx);
    for (const auto i : idx) {
      const auto rx = gx.row(i);
      const auto rs = gs.row(i);
      for (std::size_t j = 0; j < d; ++j) v[j] += rx[j] - rs[j];
    }
    const double inv_b = 1.0 / static_cast<double>(b);
    for (double& c : v) c *= inv_b;
    if (B < n) {
      sampler.sample(B, n, idx);
      const double inv_big = 1.0 / static_cast<double>(B);
      for (const auto i : idx) axpy(inv_big, gs.row(i), v);
    } else {
      axpy(1.0, snap_full, v);
    }
    const double val = dist_sq(v, grad_fx);
    const double delta = val - mean;
    mean += delta / static_cast<double>(t + 1);
    m2 += delta * (val - mean);
  }
  VarianceEstimate out;
  out.mean = mean;
  out.trials = trials;
  if (trials >= 2)
    out.std_error = std::sqrt(m2 / (static_cast<double>(trials - 1) * static_cast<double>(trials)));
  return out;
}

PlResiduals pl_point_residuals(const FiniteSumProblem& p, const Vec& x, double eta) {
  require_step(eta, "pl_point_residuals");
  const auto mu = p.pl_mu();
  const auto star = p.phi_star();
  if (!mu || !star)
    throw std::invalid_argument(
        "pl_point_residuals: problem must carry a curvature constant and a reference optimum");
  const double phi_x = p.objective(x);
  if (!std::isfinite(phi_x)) throw std::domain_error("pl_point_residuals: x must be feasible");
  const Vec grad = p.full_gradient(x);
  const double map_sq = norm_sq(gradient_mapping(x, grad, eta, p.h()));
  const double gap = stationarity_gap(x, grad, 1.0 / eta, p.h());
  const double excess = 2.0 * *mu * (phi_x - *star);
  PlResiduals out;
  out.mapping_form = {map_sq - excess, larger_side(map_sq, excess)};
  out.gap_form = {gap - excess, larger_side(gap, excess)};
  out.cross = {gap - map_sq, larger_side(gap, map_sq)};
  out.mapping_asserted = p.h().kind() == NonsmoothKind::Zero;
  return out;
}

std::vector<InequalityReport> pl_certificate(const FiniteSumProblem& p,
                                             const std::vector<Vec>& points, double eta) {
  const bool smooth = p.h().kind() == NonsmoothKind::Zero;
  auto mapping = make_report("pl", "mapping_form", smooth);
  auto gap = make_report("pl", "gap_form");
  auto cross = make_report("pl", "gap_dominates_mapping");
  for (const Vec& x : points) {
    const PlResiduals r = pl_point_residuals(p, x, eta);
    fold(mapping, r.mapping_form);
    fold(gap, r.gap_form);
    fold(cross, r.cross);
  }
  return {mapping, gap, cross};
}

CompositeInstance random_composite_instance(std::uint64_t seed) {
  SplitMix64 rng(seed);
  const std::size_t d = 2 + static_cast<std::size_t>(rng.next_below(5));
  NonsmoothTerm h = NonsmoothTerm::zero();
  switch (seed % 3) {
    case 1:
      h = NonsmoothTerm::l1(0.05 + 0.45 * rng.next_double());
      break;
    case 2:
      h = NonsmoothTerm::ball_nonneg();
      break;
    default:
      break;
  }
  std::vector<Matrix> comps;
  comps.push_back(random_symmetric_spectrum(d, 0.1, 5.0, true, rng.next()));
  Vec c = gaussian_vec(rng, d);
  Vec x = gaussian_vec(rng, d);
  Vec v = gaussian_vec(rng, d);
  Vec z = gaussian_vec(rng, d);
  if (h.kind() == NonsmoothKind::BallNonneg) z = project_ball_nonneg(z);
  const double eta = 0.02 + rng.next_double();
  return {QuadraticProblem(std::move(comps), std::move(c), h), std::move(x), std::move(v),
          std::move(z), eta};
}

std::vector<InequalityReport> run_prox_suite(std::size_t trials, std::uint64_t seed) {
  auto nonexp = make_report("prox", "nonexpansive");
  auto member = make_report("prox", "projection_membership");
  auto idem = make_report("prox", "projection_idempotent");
  auto map0 = make_report("prox", "zero_h_mapping_collapse");
  auto gap0 = make_report("prox", "zero_h_gap_collapse");
  const SplitMix64 root(seed);
  for (std::size_t k = 0; k < trials; ++k) {
    SplitMix64 rng = root.substream(stream_key(1, k));
    const std::size_t d = 1 + static_cast<std::size_t>(rng.next_below(6));
    const double eta = 0.02 + rng.next_double();
    NonsmoothTerm h = NonsmoothTerm::zero();
    if (k % 3 == 1) h = NonsmoothTerm::l1(0.05 + 0.45 * rng.next_double());
    if (k % 3 == 2) h = NonsmoothTerm::ball_nonneg();

    const Vec x = gaussian_vec(rng, d);
    const Vec y = gaussian_vec(rng, d);
    const Vec px = h.prox(x, eta);
    const Vec py = h.prox(y, eta);
    fold(nonexp, {dist(x, y) - dist(px, py), dist(x, y)});

    const Vec pb = project_ball_nonneg(x);
    const double min_coord = pb.empty() ? 0.0 : *std::min_element(pb.begin(), pb.end());
    fold(member, {std::min(min_coord, 1.0 - norm(pb)), 1.0});
    fold(idem, {-dist(project_ball_nonneg(pb), pb), 1.0});

    const NonsmoothTerm none = NonsmoothTerm::zero();
    const Vec g = gaussian_vec(rng, d);
    const Vec gm = gradient_mapping(x, g, eta, none);
    fold(map0, {-dist(gm, g), norm(g)});
    const double gsq = norm_sq(g);
    const double direct = stationarity_gap(x, g, 1.0 / eta, none);
    fold(gap0, {-std::abs(direct - gsq), larger_side(direct, gsq)});
  }
  return {nonexp, member, idem, map0, gap0};
}

std::vector<InequalityReport> run_lemma_suite(std::size_t trials, std::uint64_t seed) {
  auto descent = make_report("lemmas", "one_step_descent");
  auto inner = make_report("lemmas", "shift_inner_product");
  auto distance = make_report("lemmas", "shift_distance");
  // Instance seeds keep seed_k % 3 == k % 3 so the nonsmooth term cycles
  // through all three kinds deterministically.
  const std::uint64_t offset = 3 * (SplitMix64(seed).next() >> 2);
  for (std::size_t k = 0; k < trials; ++k) {
    const CompositeInstance ins = random_composite_instance(offset + k);
    fold(descent, descent_inequality_residual(ins.problem, ins.x, ins.v, ins.z, ins.eta));
    const ShiftResiduals sr = estimator_shift_residuals(ins.problem, ins.x, ins.v, ins.eta);
    fold(inner, sr.inner);
    fold(distance, sr.distance);
  }
  return {descent, inner, distance};
}

std::vector<InequalityReport> run_variance_suite(std::size_t trials, std::uint64_t seed) {
  auto exact_bound = make_report("variance", "exact_le_bound");
  auto sigma_bound = make_report("variance", "sigma_consistency");
  auto mc = make_report("variance", "monte_carlo_3se");
  auto wor = make_report("variance", "without_replacement_3se", false);
  const std::size_t draws = std::max<std::size_t>(trials, 1000);

  const SplitMix64 root(seed);
  SplitMix64 rng = root.substream(stream_key(3, 0));
  const SampleSet toy = synthetic_samples(6, 4, rng.next());
  const NnPcaProblem p(toy);
  const Vec x = gaussian_vec(rng, p.dim());
  Vec snapshot = x;
  for (double& c : snapshot) c += 0.5 * rng.next_gaussian();

  const std::size_t sizes[] = {1, 2, 4, 6};
  std::size_t cfg = 0;
  for (const std::size_t b : sizes) {
    for (const std::size_t B : sizes) {
      ++cfg;
      const VariancePair pair = estimator_variance_exact(p, x, snapshot, b, B);
      fold(exact_bound, {pair.bound - pair.exact, larger_side(pair.exact, pair.bound)});

      MinibatchSampler sig_sampler(root.substream(stream_key(4, cfg)),
                                   Replacement::WithReplacement);
      const double sigma = estimate_sigma(p, snapshot, p.num_components(), sig_sampler);
      double routed = p.lipschitz() * p.lipschitz() * dist_sq(x, snapshot) /
                      static_cast<double>(b);
      if (B < p.num_components()) routed += sigma * sigma / static_cast<double>(B);
      fold(sigma_bound, {routed - pair.exact, larger_side(pair.exact, routed)});

      MinibatchSampler with(root.substream(stream_key(5, cfg)), Replacement::WithReplacement);
      const VarianceEstimate est = estimator_variance_empirical(p, x, snapshot, b, B, draws, with);
      fold(mc, {3.0 * est.std_error - std::abs(est.mean - pair.exact),
                larger_side(est.mean, pair.exact)});

      MinibatchSampler without(root.substream(stream_key(6, cfg)),
                               Replacement::WithoutReplacement);
      const VarianceEstimate wo = estimator_variance_empirical(p, x, snapshot, b, B, draws, without);
      fold(wor, {3.0 * wo.std_error - std::abs(wo.mean - pair.exact),
                 larger_side(wo.mean, pair.exact)});
    }
  }
  return {exact_bound, sigma_bound, mc, wor};
}

std::vector<InequalityReport> run_pl_suite(std::size_t trials, std::uint64_t seed) {
  SplitMix64 rng = SplitMix64(seed).substream(stream_key(7, 0));

  std::vector<InequalityReport> rows;
  const double lambdas[] = {0.0, 0.1};
  for (const double lambda : lambdas) {
    PlQuadraticConfig cfg;
    cfg.lambda = lambda;
    cfg.seed = rng.next();
    const QuadraticProblem p = synthetic_pl_quadratic(cfg);
    const double eta = 1.0 / (6.0 * p.lipschitz());
    std::vector<Vec> points;
    points.reserve(trials);
    for (std::size_t k = 0; k < trials; ++k) points.push_back(gaussian_vec(rng, p.dim()));
    const char* tag = lambda == 0.0 ? "_smooth" : "_composite";
    for (InequalityReport rep : pl_certificate(p, points, eta)) {
      if (rep.check == "gap_dominates_mapping") continue;
      rep.check += tag;
      rows.push_back(std::move(rep));
    }
  }

  auto cross = make_report("pl", "gap_dominates_mapping");
  const std::uint64_t offset = 3 * (SplitMix64(seed).next() >> 2) + 0x30000;
  for (std::size_t k = 0; k < trials; ++k) {
    const CompositeInstance ins = random_composite_instance(offset + k);
    const Vec grad = ins.problem.full_gradient(ins.z);
    const double map_sq = norm_sq(gradient_mapping(ins.z, grad, ins.eta, ins.problem.h()));
    const double gap = stationarity_gap(ins.z, grad, 1.0 / ins.eta, ins.problem.h());
    fold(cross, {gap - map_sq, larger_side(gap, map_sq)});
  }
  rows.push_back(std::move(cross));
  return rows;
}

std::vector<InequalityReport> run_all_suites(std::size_t trials, std::uint64_t seed) {
  std::vector<InequalityReport> rows = run_prox_suite(trials, seed);
  for (auto&& part : {run_lemma_suite(trials, seed), run_variance_suite(trials, seed),
                      run_pl_suite(trials, seed)})
    for (const InequalityReport& rep : part) rows.push_back(rep);
  return rows;
}

}  // namespace proxvr
