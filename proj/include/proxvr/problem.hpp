#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>

#include "proxvr/dataset.hpp"
#include "proxvr/prox.hpp"
#include "proxvr/vec.hpp"

namespace proxvr {

// Composite finite-sum objective Phi(x) = f(x) + h(x) with
// f(x) = (1/n) sum_i f_i(x). Every component gradient is L-Lipschitz with the
// stored L. Instances are immutable after construction; gradient evaluations
// are pure and safe to call concurrently.
class FiniteSumProblem {
 public:
  virtual ~FiniteSumProblem() = default;

  std::size_t num_components() const { return n_; }
  std::size_t dim() const { return d_; }
  const NonsmoothTerm& h() const { return h_; }
  double lipschitz() const { return L_; }
  // PL constant, present when the instance certifiably satisfies the PL
  // condition (set for positive definite quadratics).
  std::optional<double> pl_mu() const { return mu_; }
  // Reference optimal value from a high-accuracy deterministic solve, when
  // one is available.
  std::optional<double> phi_star() const { return phi_star_; }
  const std::string& name() const { return name_; }

  virtual double component_value(std::size_t i, const Vec& x) const = 0;
  // slot[0..d) += grad f_i(x); the raw kernel entry point, index unchecked.
  virtual void add_component_gradient(std::size_t i, const Vec& x, double* slot) const = 0;

  void component_gradient(std::size_t i, const Vec& x, Vec& out) const;
  Vec component_gradient(std::size_t i, const Vec& x) const;

  // f(x): average of component values.
  double f_value(const Vec& x) const;
  // Phi(x) = f(x) + h(x); +infinity when x is outside dom h.
  double objective(const Vec& x) const { return f_value(x) + h_.value(x); }

  // out = (1/n) sum_i grad f_i(x).
  virtual void full_gradient(const Vec& x, Vec& out) const;
  Vec full_gradient(const Vec& x) const;

  // out = sum over idx of grad f_i(x) (unnormalized; callers divide).
  void sum_component_gradients(std::span<const std::uint32_t> idx, const Vec& x, Vec& out) const;

 protected:
  FiniteSumProblem(std::size_t n, std::size_t d, NonsmoothTerm h, std::string name);

  double L_ = 0.0;
  std::optional<double> mu_;
  std::optional<double> phi_star_;

 private:
  std::size_t n_;
  std::size_t d_;
  NonsmoothTerm h_;
  std::string name_;
};

// Non-negative PCA: f_i(x) = -1/2 (x^T z_i)^2 over the constraint set
// { ||x|| <= 1, x >= 0 }. L = max_i ||z_i||^2, which is 1 for normalized data.
class NnPcaProblem final : public FiniteSumProblem {
 public:
  explicit NnPcaProblem(const SampleSet& samples);

  double component_value(std::size_t i, const Vec& x) const override;
  void add_component_gradient(std::size_t i, const Vec& x, double* slot) const override;

  // Unconstrained-sign optimum over the unit ball, -lambda_max((1/n)Z^T Z)/2:
  // a lower bound on every feasible objective value, used as a sanity anchor
  // in reports.
  double spectral_lower_bound() const { return spectral_bound_; }

  const Matrix& samples() const { return z_; }

 private:
  Matrix z_;
  double spectral_bound_;
};

// Regularized quadratic: f_i(x) = 1/2 x^T A_i x - c^T x with symmetric A_i,
// h = lambda * ||x||_1 (or zero). When the averaged matrix is positive
// definite the instance carries mu = lambda_min(avg A) and a reference
// optimal value, making it the linear-convergence test bed.
class QuadraticProblem final : public FiniteSumProblem {
 public:
  QuadraticProblem(std::vector<Matrix> components, Vec c, NonsmoothTerm h);

  double component_value(std::size_t i, const Vec& x) const override;
  void add_component_gradient(std::size_t i, const Vec& x, double* slot) const override;
  using FiniteSumProblem::full_gradient;
  void full_gradient(const Vec& x, Vec& out) const override;

  const Matrix& averaged_matrix() const { return abar_; }
  const Vec& shift() const { return c_; }

 private:
  std::vector<Matrix> a_;
  Matrix abar_;
  Vec c_;
};

NnPcaProblem build_nnpca(const SampleSet& samples);

// Requires the averaged matrix to be positive definite; h = L1(lambda).
QuadraticProblem build_pl_quadratic(std::vector<Matrix> components, Vec c, double lambda);

// Seeded generator for PL quadratic instances: average matrix with spectrum
// spread over [mu_target, l_top] under a random rotation, components
// perturbed by mean-zero rank-one terms of the given scale.
struct PlQuadraticConfig {
  std::size_t n = 64;
  std::size_t d = 10;
  double mu_target = 1.0;
  double l_top = 4.0;
  double perturb = 0.5;
  double lambda = 0.0;
  std::uint64_t seed = 0;
};

QuadraticProblem synthetic_pl_quadratic(const PlQuadraticConfig& cfg);

// Symmetric d x d matrix with eigenvalue magnitudes spread over
// [lo_mag, hi_mag] under a seeded random rotation; signs drawn at random when
// allow_negative (possibly indefinite), else all positive.
Matrix random_symmetric_spectrum(std::size_t d, double lo_mag, double hi_mag,
                                 bool allow_negative, std::uint64_t seed);

}  // namespace proxvr
