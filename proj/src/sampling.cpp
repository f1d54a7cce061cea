#include "proxvr/sampling.hpp"

#include <unordered_map>

#include "proxvr/problem.hpp"

namespace proxvr {

void MinibatchSampler::sample(std::size_t b, std::size_t n, std::vector<std::uint32_t>& out) {
  if (b == 0) throw std::invalid_argument("sample: batch size must be >= 1");
  if (n == 0) throw std::invalid_argument("sample: population must be >= 1");
  out.resize(b);
  if (policy_ == Replacement::WithReplacement) {
    for (std::size_t k = 0; k < b; ++k)
      out[k] = static_cast<std::uint32_t>(rng_.next_below(n));
    return;
  }
  if (b > n)
    throw std::invalid_argument("sample: batch size " + std::to_string(b) +
                                " exceeds population " + std::to_string(n) +
                                " without replacement");
  // Sparse partial Fisher-Yates: only touched slots of the virtual identity
  // permutation are materialized, so cost is O(b) regardless of n.
  std::unordered_map<std::size_t, std::uint32_t> slot;
  slot.reserve(2 * b);
  auto value_at = [&](std::size_t pos) -> std::uint32_t {
    const auto it = slot.find(pos);
    return it == slot.end() ? static_cast<std::uint32_t>(pos) : it->second;
  };
  for (std::size_t k = 0; k < b; ++k) {
    const std::size_t j = k + static_cast<std::size_t>(rng_.next_below(n - k));
    const std::uint32_t vk = value_at(k);
    const std::uint32_t vj = value_at(j);
    out[k] = vj;
    slot[j] = vk;
  }
}

double estimate_sigma(const FiniteSumProblem& problem, const std::vector<double>& x,
                      std::size_t trials, MinibatchSampler& sampler) {
  if (trials < 2) throw std::invalid_argument("estimate_sigma: trials must be >= 2");
  const std::size_t n = problem.num_components();
  Vec full(problem.dim());
  problem.full_gradient(x, full);
  Vec g(problem.dim());
  if (trials >= n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      problem.component_gradient(i, x, g);
      acc += dist_sq(g, full);
    }
    return std::sqrt(acc / static_cast<double>(n));
  }
  double acc = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto i = static_cast<std::size_t>(sampler.rng().next_below(n));
    problem.component_gradient(i, x, g);
    acc += dist_sq(g, full);
  }
  return std::sqrt(acc / static_cast<double>(trials));
}

}  // namespace proxvr
