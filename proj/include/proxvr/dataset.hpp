#pragma once

#include <cstdint>
#include <string>

#include "proxvr/vec.hpp"

namespace proxvr {

// A set of dense sample rows. Sparse LIBSVM input is densified on load;
// desk scale keeps that cheap and the gradient kernels simple.
struct SampleSet {
  Matrix rows;                 // n x d, one sample per row
  std::vector<double> labels;  // parallel to rows; empty unless retained on load
  std::string source;
  bool normalized = false;

  std::size_t n() const { return rows.rows; }
  std::size_t dim() const { return rows.cols; }
};

// Parses LIBSVM text ("label idx:val idx:val ..." with 1-based ascending
// indices, '#' comments, blank lines skipped). Labels are discarded unless
// keep_labels is set; the dimension is the max index seen, or expected_dim
// when given (indices beyond it are an error). Malformed lines raise
// std::runtime_error naming the line number.
SampleSet read_libsvm(const std::string& path, std::size_t expected_dim = 0,
                      bool keep_labels = false);

// Writes rows in the same format (zeros skipped, 1-based indices, label 0
// when none stored). Values use round-trip precision.
void write_libsvm(const SampleSet& s, const std::string& path);

// Divides every nonzero row by its Euclidean norm; zero rows are dropped and
// counted in dropped_zero_rows when provided.
SampleSet normalize_rows(const SampleSet& s, std::size_t* dropped_zero_rows = nullptr);

// n unit-norm rows of seeded standard Gaussians; identical (n, d, seed) gives
// a bit-identical set.
SampleSet synthetic_samples(std::size_t n, std::size_t d, std::uint64_t seed);

}  // namespace proxvr
