#pragma once

#include <cstddef>
#include <vector>

namespace proxvr {

// Execution mode for the reduction kernels. Parallel is the default; the
// serial path is a naive reference kept for testing and benchmarking.
enum class ExecMode { Serial, Parallel };

ExecMode exec_mode();
void set_exec_mode(ExecMode m);

// Chunk size for deterministic reductions. Work is split into fixed chunks,
// each chunk accumulates its partial locally, and partials are folded in
// chunk order. The floating-point association is therefore a function of the
// data only, never of the thread count, so parallel results are bitwise
// reproducible across machines with the same libm and across OMP_NUM_THREADS.
inline constexpr std::size_t kReduceChunk = 256;

namespace detail {
inline std::size_t chunk_count(std::size_t n) { return n == 0 ? 0 : (n - 1) / kReduceChunk + 1; }
}  // namespace detail

// Accumulates `count` vector-valued terms of dimension `dim` into out[0..dim).
// body(i, slot) must add term i into slot[0..dim). out is overwritten.
// Naive left-to-right sum, the reference the parallel kernel is tested against.
template <typename Body>
void accumulate_serial(std::size_t count, std::size_t dim, double* out, Body&& body) {
  for (std::size_t j = 0; j < dim; ++j) out[j] = 0.0;
  for (std::size_t i = 0; i < count; ++i) body(i, out);
}

template <typename Body>
void accumulate_parallel(std::size_t count, std::size_t dim, double* out, Body&& body) {
  const std::size_t nchunks = detail::chunk_count(count);
  std::vector<double> partial(nchunks * dim, 0.0);
#pragma omp parallel for schedule(static)
  for (std::size_t c = 0; c < nchunks; ++c) {
    double* slot = partial.data() + c * dim;
    const std::size_t hi = std::min(count, (c + 1) * kReduceChunk);
    for (std::size_t i = c * kReduceChunk; i < hi; ++i) body(i, slot);
  }
  for (std::size_t j = 0; j < dim; ++j) out[j] = 0.0;
  for (std::size_t c = 0; c < nchunks; ++c) {
    const double* slot = partial.data() + c * dim;
    for (std::size_t j = 0; j < dim; ++j) out[j] += slot[j];
  }
}

template <typename Body>
void accumulate(std::size_t count, std::size_t dim, double* out, Body&& body) {
  if (exec_mode() == ExecMode::Serial)
    accumulate_serial(count, dim, out, body);
  else
    accumulate_parallel(count, dim, out, body);
}

// Scalar reduction: returns sum over i of term(i).
template <typename Term>
double sum_serial(std::size_t count, Term&& term) {
  double s = 0.0;
  for (std::size_t i = 0; i < count; ++i) s += term(i);
  return s;
}

template <typename Term>
double sum_parallel(std::size_t count, Term&& term) {
  const std::size_t nchunks = detail::chunk_count(count);
  std::vector<double> partial(nchunks, 0.0);
#pragma omp parallel for schedule(static)
  for (std::size_t c = 0; c < nchunks; ++c) {
    double s = 0.0;
    const std::size_t hi = std::min(count, (c + 1) * kReduceChunk);
    for (std::size_t i = c * kReduceChunk; i < hi; ++i) s += term(i);
    partial[c] = s;
  }
  double s = 0.0;
  for (std::size_t c = 0; c < nchunks; ++c) s += partial[c];
  return s;
}

template <typename Term>
double sum(std::size_t count, Term&& term) {
  return exec_mode() == ExecMode::Serial ? sum_serial(count, term) : sum_parallel(count, term);
}

}  // namespace proxvr
