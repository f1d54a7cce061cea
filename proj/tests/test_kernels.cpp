#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <omp.h>

#include <cmath>
#include <cstring>

#include "doctest.h"
#include "proxvr/dataset.hpp"
#include "proxvr/parallel.hpp"
#include "proxvr/problem.hpp"
#include "proxvr/rng.hpp"
#include "proxvr/vec.hpp"

using namespace proxvr;

namespace {

struct ModeGuard {
  ExecMode saved = exec_mode();
  ~ModeGuard() { set_exec_mode(saved); }
};

Matrix random_terms(std::size_t n, std::size_t d, std::uint64_t seed) {
  Matrix t(n, d);
  SplitMix64 rng(seed);
  for (double& v : t.data) v = rng.next_gaussian();
  return t;
}

bool bitwise_equal(const Vec& a, const Vec& b) {
  return a.size() == b.size() &&
         (a.empty() || std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
}

}  // namespace

TEST_CASE("vector reduction: parallel kernel matches the serial reference") {
  for (const std::size_t n : {0ul, 1ul, 7ul, 255ul, 256ul, 257ul, 1000ul, 5000ul}) {
    for (const std::size_t d : {1ul, 3ul, 8ul}) {
      const Matrix terms = random_terms(n, d, stream_key(n, d));
      auto body = [&](std::size_t i, double* slot) {
        for (std::size_t j = 0; j < d; ++j) slot[j] += terms.at(i, j);
      };
      Vec serial(d, -1.0), parallel(d, -1.0);
      accumulate_serial(n, d, serial.data(), body);
      accumulate_parallel(n, d, parallel.data(), body);
      for (std::size_t j = 0; j < d; ++j)
        CHECK(std::abs(serial[j] - parallel[j]) <= 1e-12 * std::max(1.0, std::abs(serial[j])));
    }
  }
}

TEST_CASE("scalar reduction: parallel kernel matches the serial reference") {
  for (const std::size_t n : {0ul, 1ul, 255ul, 256ul, 4097ul}) {
    SplitMix64 rng(n + 3);
    std::vector<double> vals(n);
    for (double& v : vals) v = rng.next_gaussian();
    auto term = [&](std::size_t i) { return vals[i]; };
    const double a = sum_serial(n, term);
    const double b = sum_parallel(n, term);
    CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)));
  }
}

TEST_CASE("parallel reduction is bitwise independent of the thread count") {
  const std::size_t n = 4097, d = 5;
  const Matrix terms = random_terms(n, d, 99);
  auto body = [&](std::size_t i, double* slot) {
    for (std::size_t j = 0; j < d; ++j) slot[j] += terms.at(i, j);
  };
  auto term = [&](std::size_t i) { return terms.at(i, 0); };

  const int saved = omp_get_max_threads();
  Vec one(d), many(d);
  omp_set_num_threads(1);
  accumulate_parallel(n, d, one.data(), body);
  const double sum_one = sum_parallel(n, term);
  omp_set_num_threads(3);
  accumulate_parallel(n, d, many.data(), body);
  const double sum_many = sum_parallel(n, term);
  omp_set_num_threads(saved);

  CHECK(bitwise_equal(one, many));
  CHECK(std::memcmp(&sum_one, &sum_many, sizeof sum_one) == 0);
}

TEST_CASE("problem gradients agree across execution modes") {
  ModeGuard guard;
  const NnPcaProblem p(synthetic_samples(3000, 40, 17));
  SplitMix64 rng(5);
  Vec x(p.dim());
  for (double& c : x) c = rng.next_gaussian();

  set_exec_mode(ExecMode::Serial);
  const Vec gs = p.full_gradient(x);
  const double fs = p.f_value(x);
  set_exec_mode(ExecMode::Parallel);
  const Vec gp = p.full_gradient(x);
  const double fp = p.f_value(x);

  CHECK(max_abs(sub(gs, gp)) <= 1e-12 * std::max(1.0, max_abs(gs)));
  CHECK(std::abs(fs - fp) <= 1e-12 * std::max(1.0, std::abs(fs)));
}

TEST_CASE("default execution mode is the parallel kernel") {
  CHECK(exec_mode() == ExecMode::Parallel);
}
