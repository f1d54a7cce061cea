#pragma once

#include "proxvr/vec.hpp"

namespace proxvr {

enum class NonsmoothKind { Zero, L1, BallNonneg };

// The nonsmooth part h of the composite objective f + h. Three closed-form
// cases: h = 0, h = lambda * ||x||_1, and the indicator of
// C = { x : ||x||_2 <= 1, x >= 0 }.
class NonsmoothTerm {
 public:
  static NonsmoothTerm zero() { return NonsmoothTerm(NonsmoothKind::Zero, 0.0); }
  static NonsmoothTerm l1(double lambda);
  static NonsmoothTerm ball_nonneg() { return NonsmoothTerm(NonsmoothKind::BallNonneg, 0.0); }

  NonsmoothKind kind() const { return kind_; }
  double lambda() const { return lambda_; }

  // h(x); +infinity outside the indicator set. Membership uses a 1e-12 slack
  // so that points produced by the projection itself always evaluate to 0.
  double value(const Vec& x) const;

  // argmin_y { h(y) + ||y - x||^2 / (2 eta) }. For the indicator this is the
  // Euclidean projection onto C and does not depend on eta.
  Vec prox(const Vec& x, double eta) const;

  const char* name() const;

 private:
  NonsmoothTerm(NonsmoothKind k, double lambda) : kind_(k), lambda_(lambda) {}
  NonsmoothKind kind_;
  double lambda_;
};

// Elementwise soft threshold with level eta * lambda.
Vec prox_l1(const Vec& x, double eta, double lambda);

// Projection onto { x : ||x||_2 <= 1, x >= 0 }: clip negatives to zero, then
// rescale to the unit ball if needed.
Vec project_ball_nonneg(const Vec& x);

// One composite step: prox_{eta h}(x - eta * grad).
Vec prox_linearized(const Vec& x, const Vec& grad, double eta, const NonsmoothTerm& h);

// Gradient mapping (x - prox_{eta h}(x - eta * grad)) / eta. With h = 0 this
// collapses to grad; its squared norm is the stationarity measure every run
// reports.
Vec gradient_mapping(const Vec& x, const Vec& grad, double eta, const NonsmoothTerm& h);

// Generalized stationarity gap
//   D(x, alpha) = -2 alpha min_y { <grad, y - x> + (alpha/2)||y - x||^2
//                                  + h(y) - h(x) },
// evaluated through the closed-form minimizer y* = prox_{h/alpha}(x - grad/alpha).
// Requires h(x) finite. With h = 0 it equals ||grad||^2.
double stationarity_gap(const Vec& x, const Vec& grad, double alpha, const NonsmoothTerm& h);

}  // namespace proxvr
