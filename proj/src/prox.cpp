#include "proxvr/prox.hpp"

#include <limits>

namespace proxvr {

namespace {
constexpr double kMembershipSlack = 1e-12;
}

NonsmoothTerm NonsmoothTerm::l1(double lambda) {
  if (!(lambda >= 0.0))
    throw std::invalid_argument("NonsmoothTerm::l1: lambda must be nonnegative");
  return NonsmoothTerm(NonsmoothKind::L1, lambda);
}

double NonsmoothTerm::value(const Vec& x) const {
  check_finite(x, "NonsmoothTerm::value");
  switch (kind_) {
    case NonsmoothKind::Zero:
      return 0.0;
    case NonsmoothKind::L1: {
      double s = 0.0;
      for (double v : x) s += std::abs(v);
      return lambda_ * s;
    }
    case NonsmoothKind::BallNonneg: {
      for (double v : x)
        if (v < -kMembershipSlack) return std::numeric_limits<double>::infinity();
      if (norm(x) > 1.0 + kMembershipSlack) return std::numeric_limits<double>::infinity();
      return 0.0;
    }
  }
  return 0.0;
}

Vec NonsmoothTerm::prox(const Vec& x, double eta) const {
  check_finite(x, "prox");
  if (!(eta > 0.0)) throw std::invalid_argument("prox: eta must be positive");
  switch (kind_) {
    case NonsmoothKind::Zero:
      return x;
    case NonsmoothKind::L1:
      return prox_l1(x, eta, lambda_);
    case NonsmoothKind::BallNonneg:
      return project_ball_nonneg(x);
  }
  return x;
}

const char* NonsmoothTerm::name() const {
  switch (kind_) {
    case NonsmoothKind::Zero:
      return "zero";
    case NonsmoothKind::L1:
      return "l1";
    case NonsmoothKind::BallNonneg:
      return "ball_nonneg";
  }
  return "?";
}

Vec prox_l1(const Vec& x, double eta, double lambda) {
  const double t = eta * lambda;
  Vec y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double v = x[i];
    if (v > t)
      y[i] = v - t;
    else if (v < -t)
      y[i] = v + t;
    else
      y[i] = 0.0;
  }
  return y;
}

Vec project_ball_nonneg(const Vec& x) {
  Vec y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] > 0.0 ? x[i] : 0.0;
  const double r = norm(y);
  if (r > 1.0) {
    const double inv = 1.0 / r;
    for (double& v : y) v *= inv;
  }
  return y;
}

Vec prox_linearized(const Vec& x, const Vec& grad, double eta, const NonsmoothTerm& h) {
  check_same_dim(x, grad, "prox_linearized");
  check_finite(x, "prox_linearized x");
  check_finite(grad, "prox_linearized grad");
  if (!(eta > 0.0)) throw std::invalid_argument("prox_linearized: eta must be positive");
  Vec z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] - eta * grad[i];
  return h.prox(z, eta);
}

Vec gradient_mapping(const Vec& x, const Vec& grad, double eta, const NonsmoothTerm& h) {
  Vec p = prox_linearized(x, grad, eta, h);
  Vec g(x.size());
  const double inv = 1.0 / eta;
  for (std::size_t i = 0; i < x.size(); ++i) g[i] = (x[i] - p[i]) * inv;
  return g;
}

double stationarity_gap(const Vec& x, const Vec& grad, double alpha, const NonsmoothTerm& h) {
  check_same_dim(x, grad, "stationarity_gap");
  check_finite(x, "stationarity_gap x");
  check_finite(grad, "stationarity_gap grad");
  if (!(alpha > 0.0)) throw std::invalid_argument("stationarity_gap: alpha must be positive");
  const double hx = h.value(x);
  if (!std::isfinite(hx))
    throw std::domain_error("stationarity_gap: x outside the domain of h");
  const Vec y = prox_linearized(x, grad, 1.0 / alpha, h);
  double lin = 0.0, sq = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = y[i] - x[i];
    lin += grad[i] * d;
    sq += d * d;
  }
  const double inner_min = lin + 0.5 * alpha * sq + h.value(y) - hx;
  return -2.0 * alpha * inner_min;
}

}  // namespace proxvr
