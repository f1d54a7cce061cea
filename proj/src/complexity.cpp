#include "proxvr/complexity.hpp"

#include <cmath>
#include <stdexcept>

namespace proxvr {

namespace {

void validate(const BoundQuery& q) {
  if (q.n == 0) throw std::invalid_argument("bounds: n must be >= 1");
  if (q.b == 0 || q.b > q.n) throw std::invalid_argument("bounds: need 1 <= b <= n");
  if (!(q.eps > 0.0)) throw std::invalid_argument("bounds: eps must be positive");
  if (!(q.L > 0.0)) throw std::invalid_argument("bounds: L must be positive");
  if (!(q.delta_phi > 0.0)) throw std::invalid_argument("bounds: delta_phi must be positive");
}

double snapshot_size(const BoundQuery& q, Regime regime, double eps_scale) {
  if (q.batch_override) return *q.batch_override;
  if (regime == Regime::FiniteSum) return static_cast<double>(q.n);
  if (!q.sigma)
    throw std::invalid_argument("bounds: the online regime needs sigma");
  return std::min(6.0 * (*q.sigma) * (*q.sigma) / eps_scale, static_cast<double>(q.n));
}

std::string regime_label(Regime regime) {
  return regime == Regime::FiniteSum ? "full snapshot (B=n)" : "subsampled snapshot";
}

// Shared expression for the recommended-step SFO bound so that the
// epoch-scaled variant at m <= sqrt(b) is bit-identical to the recommended
// one at m = sqrt(b).
BoundResult recommended_form(const BoundQuery& q, double m_eff, Regime regime) {
  const double B = snapshot_size(q, regime, q.eps);
  const double batch_term = B / (q.eps * m_eff);
  const double mini_term = static_cast<double>(q.b) / q.eps;
  BoundResult r;
  r.sfo = 36.0 * q.L * q.delta_phi * (batch_term + mini_term);
  r.po = 36.0 * q.L * q.delta_phi / q.eps;
  r.label = regime_label(regime);
  r.dominating = batch_term >= mini_term ? "batch" : "minibatch";
  r.asymptotic = false;
  return r;
}

}  // namespace

BoundResult recommended_bounds(const BoundQuery& q, Regime regime) {
  validate(q);
  return recommended_form(q, std::sqrt(static_cast<double>(q.b)), regime);
}

BoundResult epoch_scaled_bounds(const BoundQuery& q, std::size_t m, Regime regime) {
  validate(q);
  if (m == 0) throw std::invalid_argument("bounds: epoch length must be >= 1");
  // m^2 <= b means the step cap 1/(6L) binds and the recommended form applies
  // with m in the batch-term denominator (integer test avoids any rounding
  // ambiguity at the boundary).
  if (m * m <= q.b) {
    BoundResult r = recommended_form(q, static_cast<double>(m), regime);
    r.label += ", step 1/(6L)";
    return r;
  }
  const double md = static_cast<double>(m);
  const double eta = std::sqrt(static_cast<double>(q.b)) / (6.0 * md * q.L);
  const double B = snapshot_size(q, regime, q.eps);
  const double batch_term = B / (q.eps * eta * md);
  const double mini_term = static_cast<double>(q.b) / (q.eps * eta);
  BoundResult r;
  r.sfo = 6.0 * q.delta_phi * (batch_term + mini_term);
  r.po = 6.0 * q.delta_phi / (q.eps * eta);
  r.label = regime_label(regime) + ", step sqrt(b)/(6mL)";
  r.dominating = batch_term >= mini_term ? "batch" : "minibatch";
  r.asymptotic = false;
  return r;
}

BoundResult pl_bounds(const BoundQuery& q, Regime regime) {
  validate(q);
  if (!q.mu || !(*q.mu > 0.0))
    throw std::invalid_argument("bounds: the PL form needs mu > 0");
  const double mu = *q.mu;
  const double B = snapshot_size(q, regime, mu * q.eps);
  const double log_term = std::max(std::log(1.0 / q.eps), 0.0);
  const double batch_term = B / (mu * std::sqrt(static_cast<double>(q.b)));
  const double mini_term = static_cast<double>(q.b) / mu;
  BoundResult r;
  r.sfo = (batch_term + mini_term) * log_term;
  r.po = log_term / mu;
  r.label = regime_label(regime) + ", PL, asymptotic (constants not specified)";
  r.dominating = batch_term >= mini_term ? "batch" : "minibatch";
  r.asymptotic = true;
  return r;
}

MinibatchChoice optimal_minibatch(const BoundQuery& q, Regime regime) {
  validate(q);
  const double B = snapshot_size(q, regime, q.eps);
  MinibatchChoice choice;
  choice.b_continuous = std::pow(B / 2.0, 2.0 / 3.0);

  BoundQuery probe = q;
  double best = 0.0;
  for (std::size_t b = 1; b <= q.n; ++b) {
    probe.b = b;
    const double sfo = recommended_bounds(probe, regime).sfo;
    if (b == 1 || sfo < best) {
      best = sfo;
      choice.b_star = b;
    }
  }
  return choice;
}

std::vector<ComparisonRow> comparison_rows(const BoundQuery& q, bool pl) {
  validate(q);
  const double n = static_cast<double>(q.n);
  const double b = static_cast<double>(q.b);
  const double eps = q.eps;
  std::vector<ComparisonRow> rows;

  if (!pl) {
    rows.push_back({"proxgd", n / eps, 1.0 / eps, true, "-", true});
    rows.push_back({"proxsgd", b / eps, 1.0 / eps, true, "sigma=O(1); b>=1/eps", true});
    rows.push_back({"proxsvrg", n / (eps * std::sqrt(b)) + n, n / (eps * std::pow(b, 1.5)), true,
                    "b<=n^(2/3)", true});
    if (q.sigma) {
      const double cap = std::min(n, 1.0 / eps);
      rows.push_back({"scsg", std::cbrt(b) / eps * std::pow(cap, 2.0 / 3.0), 0.0, false,
                      "sigma=O(1); smooth only (h=0)", true});
      rows.push_back({"natasha1.5", std::pow(1.0 / eps, 5.0 / 3.0),
                      std::pow(1.0 / eps, 5.0 / 3.0), true, "sigma=O(1)", true});
    }
    const BoundResult fs = recommended_bounds(q, Regime::FiniteSum);
    rows.push_back({"proxsvrg+", fs.sfo, fs.po, true, "-", false});
    if (q.sigma) {
      const BoundResult on = recommended_bounds(q, Regime::Online);
      rows.push_back({"proxsvrg+/online", on.sfo, on.po, true, "sigma=O(1)", false});
    }
    return rows;
  }

  if (!q.mu || !(*q.mu > 0.0))
    throw std::invalid_argument("comparison_rows: the PL table needs mu > 0");
  const double mu = *q.mu;
  const double log_term = std::max(std::log(1.0 / eps), 0.0);
  rows.push_back({"proxgd", n / mu * log_term, log_term / mu, true, "-", true});
  rows.push_back({"proxsvrg", (n / (mu * std::sqrt(b)) + n) * log_term,
                  n / (mu * std::pow(b, 1.5)) * log_term, true, "b<=n^(2/3); restarts", true});
  if (q.sigma) {
    const double cap = std::min(n, 1.0 / (mu * eps));
    rows.push_back({"scsg",
                    (std::cbrt(b) / mu * std::pow(cap, 2.0 / 3.0) + cap) * log_term, 0.0, false,
                    "sigma=O(1); smooth only (h=0)", true});
  }
  const BoundResult fs = pl_bounds(q, Regime::FiniteSum);
  rows.push_back({"proxsvrg+", fs.sfo, fs.po, true, "-", true});
  if (q.sigma) {
    const BoundResult on = pl_bounds(q, Regime::Online);
    rows.push_back({"proxsvrg+/online", on.sfo, on.po, true, "sigma=O(1)", true});
  }
  return rows;
}

}  // namespace proxvr
