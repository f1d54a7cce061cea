#pragma once

// Independent oracles used by the test suites. Everything here recomputes
// quantities by brute force (grid search, finite differences, enumeration)
// or by a structurally different algorithm, without calling the closed forms
// under test.

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "proxvr/vec.hpp"

namespace oracle {

using proxvr::Vec;

// Minimizes obj over the box [lo, hi]^d by coarse-to-fine grid search: a full
// scan at the coarse resolution, then repeated refinement of a window around
// the incumbent (window = 3 spacings each side, spacing shrinks 4x per
// level). Raw grid points quantize poorly along constraint boundaries, so
// each point also spawns boundary candidates: negatives clamped to zero
// (nonnegative orthant) and, for points outside the unit ball, the rescaled
// point on the sphere (plus the clamp-then-rescale composite). The search
// still picks purely by objective value, so these extras only make boundary
// minimizers reachable. obj may return +infinity to mark infeasible points.
inline Vec grid_argmin(const std::function<double(const Vec&)>& obj, std::size_t d, double lo,
                       double hi, std::size_t coarse_per_axis = 51, int refine_levels = 9) {
  Vec best(d, 0.0);
  double best_val = std::numeric_limits<double>::infinity();

  Vec center(d, 0.5 * (lo + hi));
  double half = 0.5 * (hi - lo);

  Vec pt(d), clamped(d), scaled(d);
  auto consider = [&](const Vec& y) {
    const double v = obj(y);
    if (v < best_val) {
      best_val = v;
      best = y;
    }
  };
  auto consider_rescaled = [&](const Vec& y) {
    const double r = proxvr::norm(y);
    if (r > 1.0) {
      for (std::size_t k = 0; k < d; ++k) scaled[k] = y[k] / r;
      consider(scaled);
    }
  };

  for (int level = 0; level <= refine_levels; ++level) {
    const std::size_t per_axis = level == 0 ? coarse_per_axis : 25;
    std::vector<std::size_t> idx(d, 0);
    for (;;) {
      bool any_negative = false;
      for (std::size_t k = 0; k < d; ++k) {
        const double frac =
            per_axis == 1 ? 0.5 : static_cast<double>(idx[k]) / static_cast<double>(per_axis - 1);
        pt[k] = center[k] - half + 2.0 * half * frac;
        if (pt[k] < 0.0) any_negative = true;
      }
      consider(pt);
      consider_rescaled(pt);
      if (any_negative) {
        for (std::size_t k = 0; k < d; ++k) clamped[k] = pt[k] > 0.0 ? pt[k] : 0.0;
        consider(clamped);
        consider_rescaled(clamped);
      }
      std::size_t k = 0;
      while (k < d && ++idx[k] == per_axis) idx[k++] = 0;
      if (k == d) break;
    }
    center = best;
    const double step = 2.0 * half / static_cast<double>(per_axis - 1);
    half = 3.0 * step;
  }
  return best;
}

// prox_{eta h}(x) by grid search: minimizes h(y) + ||y - x||^2 / (2 eta).
inline Vec grid_prox(const std::function<double(const Vec&)>& h_value, const Vec& x, double eta,
                     double lo, double hi) {
  auto obj = [&](const Vec& y) {
    const double hv = h_value(y);
    if (!std::isfinite(hv)) return hv;
    double q = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double d = y[i] - x[i];
      q += d * d;
    }
    return hv + q / (2.0 * eta);
  };
  return grid_argmin(obj, x.size(), lo, hi);
}

// Projection onto { y : ||y|| <= 1, y >= 0 } by Dykstra's alternating
// projection scheme onto the ball and the orthant separately. Converges to
// the exact projection onto the intersection; used as a second independent
// reference for the closed-form projection.
inline Vec dykstra_ball_nonneg(const Vec& x, int iters = 20000) {
  const std::size_t d = x.size();
  Vec y = x, p(d, 0.0), q(d, 0.0), t(d);
  for (int it = 0; it < iters; ++it) {
    for (std::size_t k = 0; k < d; ++k) t[k] = y[k] + p[k];
    Vec yb = t;
    double r = proxvr::norm(yb);
    if (r > 1.0)
      for (double& v : yb) v /= r;
    for (std::size_t k = 0; k < d; ++k) p[k] = t[k] - yb[k];
    for (std::size_t k = 0; k < d; ++k) t[k] = yb[k] + q[k];
    for (std::size_t k = 0; k < d; ++k) y[k] = t[k] > 0.0 ? t[k] : 0.0;
    for (std::size_t k = 0; k < d; ++k) q[k] = t[k] - y[k];
  }
  return y;
}

// Central finite difference gradient of f at x with step h.
inline Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& x,
                       double h = 1e-5) {
  Vec g(x.size());
  Vec p = x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    p[i] = xi + h;
    const double fp = f(p);
    p[i] = xi - h;
    const double fm = f(p);
    p[i] = xi;
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

// Population variance of a set of vectors around their mean:
// (1/n) sum_i ||v_i - vbar||^2.
inline double population_variance(const std::vector<Vec>& vs) {
  if (vs.empty()) return 0.0;
  const std::size_t d = vs[0].size();
  Vec mean(d, 0.0);
  for (const Vec& v : vs)
    for (std::size_t j = 0; j < d; ++j) mean[j] += v[j];
  for (double& m : mean) m /= static_cast<double>(vs.size());
  double s = 0.0;
  for (const Vec& v : vs)
    for (std::size_t j = 0; j < d; ++j) {
      const double dd = v[j] - mean[j];
      s += dd * dd;
    }
  return s / static_cast<double>(vs.size());
}

}  // namespace oracle
