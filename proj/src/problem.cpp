#include "proxvr/problem.hpp"

#include <Eigen/Dense>

#include "proxvr/parallel.hpp"
#include "proxvr/rng.hpp"

namespace proxvr {

namespace {

Eigen::MatrixXd to_eigen(const Matrix& m) {
  Eigen::MatrixXd e(m.rows, m.cols);
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) e(i, j) = m.at(i, j);
  return e;
}

double spectral_norm_symmetric(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_eigen(m), Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return std::max(std::abs(ev.minCoeff()), std::abs(ev.maxCoeff()));
}

double min_eigenvalue(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_eigen(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

// Deterministic proximal gradient descent at eta = 1/L, run to fixed-point
// stagnation. Supplies reference optimal values for instances whose averaged
// curvature guarantees a unique minimizer.
double reference_solve(const QuadraticProblem& p) {
  const double eta = 1.0 / p.lipschitz();
  Vec x(p.dim(), 0.0), g(p.dim());
  for (std::size_t it = 0; it < 200000; ++it) {
    p.full_gradient(x, g);
    Vec next = prox_linearized(x, g, eta, p.h());
    const double move = dist(next, x);
    x = std::move(next);
    if (move <= 1e-13 * std::max(1.0, norm(x))) break;
  }
  return p.objective(x);
}

}  // namespace

FiniteSumProblem::FiniteSumProblem(std::size_t n, std::size_t d, NonsmoothTerm h,
                                   std::string name)
    : h_(h), name_(std::move(name)) {
  if (n == 0) throw std::invalid_argument(name_ + ": need at least one component");
  if (d == 0) throw std::invalid_argument(name_ + ": dimension must be >= 1");
  n_ = n;
  d_ = d;
}

void FiniteSumProblem::component_gradient(std::size_t i, const Vec& x, Vec& out) const {
  if (i >= n_) throw std::out_of_range(name_ + ": component index out of range");
  check_same_dim(x, out, "component_gradient");
  if (x.size() != d_) throw std::invalid_argument(name_ + ": point has wrong dimension");
  std::fill(out.begin(), out.end(), 0.0);
  add_component_gradient(i, x, out.data());
}

Vec FiniteSumProblem::component_gradient(std::size_t i, const Vec& x) const {
  Vec out(d_, 0.0);
  component_gradient(i, x, out);
  return out;
}

double FiniteSumProblem::f_value(const Vec& x) const {
  if (x.size() != d_) throw std::invalid_argument(name_ + ": point has wrong dimension");
  check_finite(x, "f_value");
  const double s = sum(n_, [&](std::size_t i) { return component_value(i, x); });
  return s / static_cast<double>(n_);
}

void FiniteSumProblem::full_gradient(const Vec& x, Vec& out) const {
  if (x.size() != d_) throw std::invalid_argument(name_ + ": point has wrong dimension");
  check_finite(x, "full_gradient");
  out.resize(d_);
  accumulate(n_, d_, out.data(),
             [&](std::size_t i, double* slot) { add_component_gradient(i, x, slot); });
  const double inv = 1.0 / static_cast<double>(n_);
  for (double& v : out) v *= inv;
}

Vec FiniteSumProblem::full_gradient(const Vec& x) const {
  Vec out(d_);
  full_gradient(x, out);
  return out;
}

void FiniteSumProblem::sum_component_gradients(std::span<const std::uint32_t> idx, const Vec& x,
                                               Vec& out) const {
  if (x.size() != d_) throw std::invalid_argument(name_ + ": point has wrong dimension");
  out.resize(d_);
  accumulate(idx.size(), d_, out.data(),
             [&](std::size_t k, double* slot) { add_component_gradient(idx[k], x, slot); });
}

NnPcaProblem::NnPcaProblem(const SampleSet& samples)
    : FiniteSumProblem(samples.n(), samples.dim(), NonsmoothTerm::ball_nonneg(), "nnpca"),
      z_(samples.rows) {
  double lmax = 0.0;
  for (std::size_t i = 0; i < z_.rows; ++i) lmax = std::max(lmax, norm_sq(z_.row(i)));
  if (lmax == 0.0) throw std::invalid_argument("nnpca: all samples are zero");
  L_ = lmax;

  // Gram matrix (1/n) Z^T Z; top eigenvalue gives the ball-constrained
  // optimum of f without the sign constraint.
  Eigen::MatrixXd zt(z_.rows, z_.cols);
  for (std::size_t i = 0; i < z_.rows; ++i)
    for (std::size_t j = 0; j < z_.cols; ++j) zt(i, j) = z_.at(i, j);
  Eigen::MatrixXd gram = (zt.transpose() * zt) / static_cast<double>(z_.rows);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram, Eigen::EigenvaluesOnly);
  spectral_bound_ = -0.5 * es.eigenvalues().maxCoeff();
}

double NnPcaProblem::component_value(std::size_t i, const Vec& x) const {
  const double t = dot(z_.row(i), x);
  return -0.5 * t * t;
}

void NnPcaProblem::add_component_gradient(std::size_t i, const Vec& x, double* slot) const {
  const auto z = z_.row(i);
  const double t = dot(z, x);
  for (std::size_t j = 0; j < z.size(); ++j) slot[j] -= t * z[j];
}

QuadraticProblem::QuadraticProblem(std::vector<Matrix> components, Vec c, NonsmoothTerm h)
    : FiniteSumProblem(components.size(), c.size(), h, "quadratic"), a_(std::move(components)),
      c_(std::move(c)) {
  const std::size_t d = dim();
  for (auto& m : a_) {
    if (m.rows != d || m.cols != d)
      throw std::invalid_argument("quadratic: component matrix has wrong shape");
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i + 1; j < d; ++j) {
        const double s = 0.5 * (m.at(i, j) + m.at(j, i));
        m.at(i, j) = s;
        m.at(j, i) = s;
      }
  }
  abar_ = Matrix(d, d);
  for (const auto& m : a_)
    for (std::size_t k = 0; k < abar_.data.size(); ++k) abar_.data[k] += m.data[k];
  const double inv = 1.0 / static_cast<double>(a_.size());
  for (double& v : abar_.data) v *= inv;

  double lmax = 0.0;
  for (const auto& m : a_) lmax = std::max(lmax, spectral_norm_symmetric(m));
  if (lmax == 0.0) throw std::invalid_argument("quadratic: all components are zero");
  L_ = lmax;

  const double lmin = min_eigenvalue(abar_);
  if (lmin > 0.0) {
    mu_ = lmin;
    phi_star_ = reference_solve(*this);
  }
}

double QuadraticProblem::component_value(std::size_t i, const Vec& x) const {
  const Matrix& m = a_[i];
  double q = 0.0;
  for (std::size_t r = 0; r < m.rows; ++r) q += x[r] * dot(m.row(r), x);
  return 0.5 * q - dot(c_, x);
}

void QuadraticProblem::add_component_gradient(std::size_t i, const Vec& x, double* slot) const {
  const Matrix& m = a_[i];
  for (std::size_t r = 0; r < m.rows; ++r) slot[r] += dot(m.row(r), x) - c_[r];
}

void QuadraticProblem::full_gradient(const Vec& x, Vec& out) const {
  if (x.size() != dim()) throw std::invalid_argument("quadratic: point has wrong dimension");
  check_finite(x, "full_gradient");
  out.resize(dim());
  for (std::size_t r = 0; r < abar_.rows; ++r) out[r] = dot(abar_.row(r), x) - c_[r];
}

NnPcaProblem build_nnpca(const SampleSet& samples) {
  if (samples.n() == 0) throw std::invalid_argument("build_nnpca: empty sample set");
  return NnPcaProblem(samples);
}

QuadraticProblem build_pl_quadratic(std::vector<Matrix> components, Vec c, double lambda) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("build_pl_quadratic: lambda must be >= 0");
  const NonsmoothTerm h = lambda == 0.0 ? NonsmoothTerm::zero() : NonsmoothTerm::l1(lambda);
  QuadraticProblem p(std::move(components), std::move(c), h);
  if (!p.pl_mu())
    throw std::invalid_argument(
        "build_pl_quadratic: averaged matrix is not positive definite");
  return p;
}

namespace {

// Conjugates diag(eigs) by a product of random Givens rotations.
Matrix rotated_spectrum(const Vec& eigs, SplitMix64 rot) {
  const std::size_t d = eigs.size();
  Matrix base(d, d);
  for (std::size_t k = 0; k < d; ++k) base.at(k, k) = eigs[k];
  for (std::size_t sweep = 0; d >= 2 && sweep < 3 * d; ++sweep) {
    const auto p = static_cast<std::size_t>(rot.next_below(d));
    auto q = static_cast<std::size_t>(rot.next_below(d - 1));
    if (q >= p) ++q;
    const double theta = 6.283185307179586 * rot.next_double();
    const double cs = std::cos(theta), sn = std::sin(theta);
    // rotate rows p,q then columns p,q: base <- G^T base G
    for (std::size_t j = 0; j < d; ++j) {
      const double rp = base.at(p, j), rq = base.at(q, j);
      base.at(p, j) = cs * rp - sn * rq;
      base.at(q, j) = sn * rp + cs * rq;
    }
    for (std::size_t i = 0; i < d; ++i) {
      const double cp = base.at(i, p), cq = base.at(i, q);
      base.at(i, p) = cs * cp - sn * cq;
      base.at(i, q) = sn * cp + cs * cq;
    }
  }
  return base;
}

}  // namespace

Matrix random_symmetric_spectrum(std::size_t d, double lo_mag, double hi_mag,
                                 bool allow_negative, std::uint64_t seed) {
  if (d == 0) throw std::invalid_argument("random_symmetric_spectrum: d must be >= 1");
  if (!(lo_mag > 0.0) || hi_mag < lo_mag)
    throw std::invalid_argument("random_symmetric_spectrum: need 0 < lo_mag <= hi_mag");
  SplitMix64 rng(seed);
  Vec eigs(d);
  for (double& e : eigs) {
    e = lo_mag + (hi_mag - lo_mag) * rng.next_double();
    if (allow_negative && rng.next_below(2) == 0) e = -e;
  }
  return rotated_spectrum(eigs, rng.substream(7));
}

QuadraticProblem synthetic_pl_quadratic(const PlQuadraticConfig& cfg) {
  if (cfg.n == 0 || cfg.d == 0)
    throw std::invalid_argument("synthetic_pl_quadratic: n and d must be >= 1");
  if (!(cfg.mu_target > 0.0) || cfg.l_top < cfg.mu_target)
    throw std::invalid_argument("synthetic_pl_quadratic: need 0 < mu_target <= l_top");
  const std::size_t d = cfg.d;
  SplitMix64 rng(cfg.seed);

  // Base matrix: spectrum linearly spread over [mu_target, l_top] under a
  // random rotation.
  Vec eigs(d);
  for (std::size_t k = 0; k < d; ++k)
    eigs[k] = d == 1 ? cfg.mu_target
                     : cfg.mu_target + (cfg.l_top - cfg.mu_target) * static_cast<double>(k) /
                                           static_cast<double>(d - 1);
  Matrix base = rotated_spectrum(eigs, rng.substream(1));

  // Components: base plus mean-zero rank-one perturbations u_i u_i^T - Ubar.
  std::vector<Vec> u(cfg.n, Vec(d));
  SplitMix64 pert = rng.substream(2);
  for (auto& ui : u)
    for (double& v : ui) v = cfg.perturb * pert.next_gaussian();
  Matrix ubar(d, d);
  for (const auto& ui : u)
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) ubar.at(i, j) += ui[i] * ui[j];
  for (double& v : ubar.data) v /= static_cast<double>(cfg.n);

  std::vector<Matrix> comps(cfg.n, Matrix(d, d));
  for (std::size_t i = 0; i < cfg.n; ++i)
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t cidx = 0; cidx < d; ++cidx)
        comps[i].at(r, cidx) = base.at(r, cidx) + u[i][r] * u[i][cidx] - ubar.at(r, cidx);

  Vec c(d);
  SplitMix64 crng = rng.substream(3);
  for (double& v : c) v = crng.next_gaussian();

  return build_pl_quadratic(std::move(comps), std::move(c), cfg.lambda);
}

}  // namespace proxvr
