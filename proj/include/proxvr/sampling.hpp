#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "proxvr/rng.hpp"

namespace proxvr {

class FiniteSumProblem;

enum class Replacement { WithReplacement, WithoutReplacement };

// Draws minibatch index sets. WithReplacement is the default policy: the
// variance identities the diagnostics certify assume independent draws.
// WithoutReplacement is offered as an option and flagged heuristic in output.
class MinibatchSampler {
 public:
  explicit MinibatchSampler(std::uint64_t seed,
                            Replacement policy = Replacement::WithReplacement)
      : rng_(seed), policy_(policy) {}

  MinibatchSampler(SplitMix64 rng, Replacement policy) : rng_(rng), policy_(policy) {}

  Replacement policy() const { return policy_; }

  void sample(std::size_t b, std::size_t n, std::vector<std::uint32_t>& out);

  std::vector<std::uint32_t> sample(std::size_t b, std::size_t n) {
    std::vector<std::uint32_t> idx;
    sample(b, n, idx);
    return idx;
  }

  // Independent sampler derived from this one's seed and a key; does not
  // advance this sampler. Gives each (epoch, iteration) its own stream.
  MinibatchSampler substream(std::uint64_t key) const {
    return MinibatchSampler(rng_.substream(key), policy_);
  }

  SplitMix64& rng() { return rng_; }

 private:
  SplitMix64 rng_;
  Replacement policy_;
};

inline std::vector<std::uint32_t> sample_indices(MinibatchSampler& s, std::size_t b,
                                                 std::size_t n) {
  return s.sample(b, n);
}

// Oracle-call tallies. sfo/po follow the accounting convention: a full
// gradient costs n, a snapshot costs B, an inner iteration costs b (the two
// per-component evaluations at the current point and the snapshot count as
// one call each, i.e. b per iteration) plus one prox call. Metric evaluations
// (objective/gradient-mapping values written to traces) go to the separate
// diag_sfo tally so the algorithm budget stays clean.
class OracleCounter {
 public:
  void record(std::uint64_t sfo_delta, std::uint64_t po_delta) {
    add(sfo_, sfo_delta);
    add(po_, po_delta);
  }
  void record_diag(std::uint64_t sfo_delta) { add(diag_sfo_, sfo_delta); }

  std::uint64_t sfo() const { return sfo_; }
  std::uint64_t po() const { return po_; }
  std::uint64_t diag_sfo() const { return diag_sfo_; }

 private:
  static void add(std::uint64_t& slot, std::uint64_t delta) {
    if (slot > UINT64_MAX - delta) throw std::overflow_error("oracle counter overflow");
    slot += delta;
  }
  std::uint64_t sfo_ = 0;
  std::uint64_t po_ = 0;
  std::uint64_t diag_sfo_ = 0;
};

// sigma estimate for the batch-size rule B = min{ceil(6 sigma^2 / eps), n}:
// the square root of the population variance (1/n) sum_i ||grad f_i(x) -
// grad f(x)||^2, computed exactly by enumeration when trials >= n, else by
// Monte Carlo over `trials` uniform component draws.
double estimate_sigma(const FiniteSumProblem& problem, const std::vector<double>& x,
                      std::size_t trials, MinibatchSampler& sampler);

}  // namespace proxvr
