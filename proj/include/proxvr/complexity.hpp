#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace proxvr {

// Inputs for the oracle-complexity formulas. eps is the target on the
// squared gradient-mapping norm (or the objective gap in the PL forms).
struct BoundQuery {
  std::size_t n = 1;
  std::size_t b = 1;
  double eps = 0.0;
  double L = 0.0;
  double delta_phi = 0.0;  // Phi(x0) - Phi*
  std::optional<double> sigma;
  std::optional<double> mu;
  std::optional<double> batch_override;  // forces the snapshot batch size B
};

// FiniteSum uses the full snapshot B = n; Online subsamples the snapshot,
// B = min{6 sigma^2 / eps, n}, and requires sigma.
enum class Regime { FiniteSum, Online };

struct BoundResult {
  double sfo = 0.0;
  double po = 0.0;
  std::string label;
  std::string dominating;  // "batch" or "minibatch" term
  bool asymptotic = false;  // true when the formula carries unit constants only
};

// Named-constant oracle bounds for the variance-reduced method at the
// recommended step size 1/(6L) with epoch length sqrt(b):
//   SFO = 36 L delta (B/(eps sqrt(b)) + b/eps),  PO = 36 L delta / eps.
BoundResult recommended_bounds(const BoundQuery& q, Regime regime);

// Same bounds for a freely chosen epoch length m, step size
// min{1/(6L), sqrt(b)/(6mL)}:
//   SFO = 6 delta (B/(eps eta m) + b/(eps eta)),  PO = 6 delta/(eps eta).
// At m <= sqrt(b) this reduces to the recommended form with m in place of
// sqrt(b), evaluated through the identical floating-point expression.
BoundResult epoch_scaled_bounds(const BoundQuery& q, std::size_t m, Regime regime);

// Order-level bounds under the PL condition (constants unspecified, unit
// constants used, result flagged asymptotic):
//   SFO = (B/(mu sqrt(b)) + b/mu) log(1/eps),  PO = (1/mu) log(1/eps),
// with B = n or min{6 sigma^2/(mu eps), n}. Requires mu.
BoundResult pl_bounds(const BoundQuery& q, Regime regime);

struct MinibatchChoice {
  std::size_t b_star = 1;     // exact integer argmin of the SFO bound over [1, n]
  double b_continuous = 1.0;  // stationary point (B/2)^(2/3)
};

MinibatchChoice optimal_minibatch(const BoundQuery& q, Regime regime);

// One comparison line per algorithm, for regime sweeps. Rows other than the
// variance-reduced method carry unit constants and are flagged asymptotic.
struct ComparisonRow {
  std::string algo;
  double sfo = 0.0;
  double po = 0.0;
  bool po_defined = true;
  std::string condition;
  bool asymptotic = true;
};

std::vector<ComparisonRow> comparison_rows(const BoundQuery& q, bool pl);

}  // namespace proxvr
