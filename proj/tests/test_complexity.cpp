#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "proxvr/complexity.hpp"

using namespace proxvr;

namespace {

BoundQuery base_query() {
  BoundQuery q;
  q.n = 10000;
  q.b = 100;
  q.eps = 0.01;
  q.L = 1.0;
  q.delta_phi = 1.0;
  return q;
}

}  // namespace

TEST_CASE("recommended bound reproduces the hand-computed reference values") {
  BoundResult r = recommended_bounds(base_query(), Regime::FiniteSum);
  CHECK(r.sfo == 3.96e6);
  CHECK(r.po == 3600.0);
  CHECK(!r.asymptotic);

  BoundQuery small;
  small.n = 100;
  small.b = 1;
  small.eps = 0.1;
  small.L = 1.0;
  small.delta_phi = 1.0;
  BoundResult s = recommended_bounds(small, Regime::FiniteSum);
  CHECK(s.sfo == 36360.0);  // 36 * (100/0.1 + 1/0.1)
  CHECK(s.po == 360.0);
  CHECK(s.dominating == "batch");
}

TEST_CASE("epoch-scaled bound at the default epoch length is bit-identical") {
  BoundQuery q = base_query();
  BoundResult rec = recommended_bounds(q, Regime::FiniteSum);
  BoundResult eq = epoch_scaled_bounds(q, 10, Regime::FiniteSum);  // m = sqrt(100)
  CHECK(eq.sfo == rec.sfo);
  CHECK(eq.po == rec.po);

  // shorter epochs keep the capped step and inflate only the batch term
  BoundResult shorter = epoch_scaled_bounds(q, 5, Regime::FiniteSum);
  CHECK(shorter.sfo > rec.sfo);
  CHECK(shorter.po == rec.po);

  // longer epochs shrink the step and inflate both terms
  BoundResult longer = epoch_scaled_bounds(q, 40, Regime::FiniteSum);
  CHECK(longer.sfo > rec.sfo);
  CHECK(longer.po > rec.po);
  CHECK_THROWS_AS(epoch_scaled_bounds(q, 0, Regime::FiniteSum), std::invalid_argument);
}

TEST_CASE("single-sample minibatch reduces to the classical full-snapshot rate") {
  BoundQuery q;
  q.n = 500;
  q.b = 1;
  q.eps = 0.05;
  q.L = 2.0;
  q.delta_phi = 3.0;
  BoundResult r = recommended_bounds(q, Regime::FiniteSum);
  const double expect = 36.0 * q.L * q.delta_phi * (500.0 / q.eps + 1.0 / q.eps);
  CHECK(r.sfo == expect);
}

TEST_CASE("online regime subsamples the snapshot through sigma") {
  BoundQuery q = base_query();
  q.sigma = 1.0;
  BoundResult on = recommended_bounds(q, Regime::Online);
  // B = min(6 sigma^2 / eps, n) = min(600, 10000) = 600
  const double expect = 36.0 * (600.0 / (q.eps * 10.0) + 100.0 / q.eps);
  CHECK(on.sfo == expect);
  CHECK(on.po == 3600.0);  // PO does not depend on the snapshot size
  CHECK(on.label.find("subsampled") != std::string::npos);

  // with sigma large the cap at n binds and the bounds match the finite-sum form
  q.sigma = 1e6;
  BoundResult capped = recommended_bounds(q, Regime::Online);
  CHECK(capped.sfo == recommended_bounds(base_query(), Regime::FiniteSum).sfo);

  BoundQuery no_sigma = base_query();
  CHECK_THROWS_AS(recommended_bounds(no_sigma, Regime::Online), std::invalid_argument);
}

TEST_CASE("bound queries are validated") {
  BoundQuery q = base_query();
  q.eps = 0.0;
  CHECK_THROWS_AS(recommended_bounds(q, Regime::FiniteSum), std::invalid_argument);
  q = base_query();
  q.b = 0;
  CHECK_THROWS_AS(recommended_bounds(q, Regime::FiniteSum), std::invalid_argument);
  q = base_query();
  q.b = q.n + 1;
  CHECK_THROWS_AS(recommended_bounds(q, Regime::FiniteSum), std::invalid_argument);
  q = base_query();
  q.L = -1.0;
  CHECK_THROWS_AS(recommended_bounds(q, Regime::FiniteSum), std::invalid_argument);
  q = base_query();
  q.delta_phi = 0.0;
  CHECK_THROWS_AS(recommended_bounds(q, Regime::FiniteSum), std::invalid_argument);
}

TEST_CASE("integer scan finds the minibatch minimizing the SFO bound") {
  for (std::size_t n : {std::size_t(1000), std::size_t(10000), std::size_t(100000)}) {
    BoundQuery q;
    q.n = n;
    q.eps = 0.01;
    q.L = 1.0;
    q.delta_phi = 1.0;
    MinibatchChoice choice = optimal_minibatch(q, Regime::FiniteSum);
    const double cont = std::pow(static_cast<double>(n) / 2.0, 2.0 / 3.0);
    CHECK(choice.b_continuous == doctest::Approx(cont).epsilon(1e-12));
    CHECK(std::abs(static_cast<double>(choice.b_star) - std::round(cont)) <= 1.0);

    // the scan result is a true argmin against its neighbors
    BoundQuery probe = q;
    probe.b = choice.b_star;
    const double at_star = recommended_bounds(probe, Regime::FiniteSum).sfo;
    if (choice.b_star > 1) {
      probe.b = choice.b_star - 1;
      CHECK(at_star <= recommended_bounds(probe, Regime::FiniteSum).sfo);
    }
    if (choice.b_star < n) {
      probe.b = choice.b_star + 1;
      CHECK(at_star <= recommended_bounds(probe, Regime::FiniteSum).sfo);
    }
  }

  BoundQuery tiny;
  tiny.n = 1;
  tiny.eps = 0.1;
  tiny.L = 1.0;
  tiny.delta_phi = 1.0;
  CHECK(optimal_minibatch(tiny, Regime::FiniteSum).b_star == 1);
}

TEST_CASE("the proximal-call bound is constant across minibatch sizes") {
  BoundQuery q = base_query();
  double po_ref = 0.0;
  for (std::size_t b : {std::size_t(1), std::size_t(10), std::size_t(215),
                        std::size_t(4000), std::size_t(10000)}) {
    q.b = b;
    const double po = recommended_bounds(q, Regime::FiniteSum).po;
    if (po_ref == 0.0) po_ref = po;
    CHECK(po == po_ref);
  }
}

TEST_CASE("linear-convergence bounds scale logarithmically in the accuracy") {
  BoundQuery q = base_query();
  q.mu = 0.5;
  q.eps = 1e-3;
  BoundResult r = pl_bounds(q, Regime::FiniteSum);
  CHECK(r.asymptotic);
  CHECK(r.po == doctest::Approx(std::log(1e3) / 0.5).epsilon(1e-12));

  BoundQuery sharper = q;
  sharper.eps = 1e-6;  // squaring 1/eps doubles the log factor
  BoundResult r2 = pl_bounds(sharper, Regime::FiniteSum);
  CHECK(r2.sfo == doctest::Approx(2.0 * r.sfo).epsilon(1e-12));
  CHECK(r2.po == doctest::Approx(2.0 * r.po).epsilon(1e-12));

  // b = n^{2/3} balances the two terms to ~n^{2/3} each; b = 1 pays the full n
  BoundQuery balanced = q;
  balanced.b = 464;  // ~10000^(2/3)
  BoundQuery single = q;
  single.b = 1;
  CHECK(pl_bounds(balanced, Regime::FiniteSum).sfo <
        pl_bounds(single, Regime::FiniteSum).sfo);

  BoundQuery no_mu = base_query();
  CHECK_THROWS_AS(pl_bounds(no_mu, Regime::FiniteSum), std::invalid_argument);
}

TEST_CASE("comparison table lists the expected algorithms with marked caveats") {
  BoundQuery q = base_query();
  q.sigma = 1.0;
  auto rows = comparison_rows(q, false);
  bool saw_main = false, saw_scsg = false, saw_gd = false;
  for (const auto& r : rows) {
    if (r.algo == "proxsvrg+") {
      saw_main = true;
      CHECK(!r.asymptotic);  // the only row with pinned constants
      CHECK(r.po_defined);
    }
    if (r.algo == "scsg") {
      saw_scsg = true;
      CHECK(!r.po_defined);  // smooth-only method, no proximal-call column
      CHECK(r.condition.find("h=0") != std::string::npos);
    }
    if (r.algo == "proxgd") {
      saw_gd = true;
      CHECK(r.sfo == 10000.0 / 0.01);
    }
  }
  CHECK(saw_main);
  CHECK(saw_scsg);
  CHECK(saw_gd);

  // PL variant requires mu
  CHECK_THROWS_AS(comparison_rows(q, true), std::invalid_argument);
  q.mu = 1.0;
  auto pl_rows = comparison_rows(q, true);
  bool saw_pl_main = false;
  for (const auto& r : pl_rows)
    if (r.algo == "proxsvrg+") saw_pl_main = true;
  CHECK(saw_pl_main);
}
