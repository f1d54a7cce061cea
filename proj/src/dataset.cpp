#include "proxvr/dataset.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <utility>

#include "proxvr/rng.hpp"

namespace proxvr {

namespace {

[[noreturn]] void parse_fail(const std::string& path, std::size_t line, const std::string& what) {
  throw std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

bool parse_double(const std::string& tok, double& out) {
  std::size_t pos = 0;
  try {
    out = std::stod(tok, &pos);
  } catch (const std::exception&) {
    return false;
  }
  return pos == tok.size();
}

bool parse_index(const std::string& tok, std::size_t& out) {
  std::size_t pos = 0;
  try {
    const auto v = std::stoull(tok, &pos);
    out = static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    return false;
  }
  return pos == tok.size();
}

}  // namespace

SampleSet read_libsvm(const std::string& path, std::size_t expected_dim, bool keep_labels) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset file: " + path);

  std::vector<std::vector<std::pair<std::size_t, double>>> sparse_rows;
  std::vector<double> labels;
  std::size_t dmax = 0;
  std::string line;
  std::size_t lineno = 0;

  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream toks(line);
    std::string tok;
    if (!(toks >> tok)) continue;

    if (tok.find(':') != std::string::npos)
      parse_fail(path, lineno, "missing label before first feature '" + tok + "'");
    double label;
    if (!parse_double(tok, label)) parse_fail(path, lineno, "non-numeric label '" + tok + "'");

    std::vector<std::pair<std::size_t, double>> row;
    std::size_t prev_idx = 0;
    while (toks >> tok) {
      const auto colon = tok.find(':');
      if (colon == std::string::npos)
        parse_fail(path, lineno, "feature without ':' separator: '" + tok + "'");
      std::size_t idx;
      double val;
      if (!parse_index(tok.substr(0, colon), idx) || idx == 0)
        parse_fail(path, lineno, "bad feature index in '" + tok + "' (must be a 1-based integer)");
      if (!parse_double(tok.substr(colon + 1), val))
        parse_fail(path, lineno, "non-numeric feature value in '" + tok + "'");
      if (idx <= prev_idx)
        parse_fail(path, lineno, "feature indices not strictly ascending at '" + tok + "'");
      if (expected_dim != 0 && idx > expected_dim)
        parse_fail(path, lineno,
                   "feature index " + std::to_string(idx) + " exceeds expected dimension " +
                       std::to_string(expected_dim));
      prev_idx = idx;
      dmax = std::max(dmax, idx);
      row.emplace_back(idx, val);
    }
    sparse_rows.push_back(std::move(row));
    labels.push_back(label);
  }

  if (sparse_rows.empty()) throw std::runtime_error(path + ": no samples (empty file)");

  SampleSet s;
  const std::size_t d = expected_dim != 0 ? expected_dim : dmax;
  if (d == 0) throw std::runtime_error(path + ": all rows empty, dimension undetermined");
  s.rows = Matrix(sparse_rows.size(), d);
  for (std::size_t i = 0; i < sparse_rows.size(); ++i)
    for (const auto& [idx, val] : sparse_rows[i]) s.rows.at(i, idx - 1) = val;
  if (keep_labels) s.labels = std::move(labels);
  s.source = path;
  return s;
}

void write_libsvm(const SampleSet& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  char buf[64];
  for (std::size_t i = 0; i < s.n(); ++i) {
    const double label = s.labels.empty() ? 0.0 : s.labels[i];
    std::snprintf(buf, sizeof buf, "%.17g", label);
    out << buf;
    const auto row = s.rows.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (row[j] == 0.0) continue;
      std::snprintf(buf, sizeof buf, "%.17g", row[j]);
      out << ' ' << (j + 1) << ':' << buf;
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

SampleSet normalize_rows(const SampleSet& s, std::size_t* dropped_zero_rows) {
  SampleSet r;
  r.source = s.source;
  r.normalized = true;
  std::size_t dropped = 0;
  std::vector<std::size_t> keep;
  keep.reserve(s.n());
  for (std::size_t i = 0; i < s.n(); ++i) {
    if (norm(s.rows.row(i)) == 0.0)
      ++dropped;
    else
      keep.push_back(i);
  }
  r.rows = Matrix(keep.size(), s.dim());
  for (std::size_t k = 0; k < keep.size(); ++k) {
    const auto src = s.rows.row(keep[k]);
    const double inv = 1.0 / norm(src);
    auto dst = r.rows.row(k);
    for (std::size_t j = 0; j < src.size(); ++j) dst[j] = src[j] * inv;
    if (!s.labels.empty()) r.labels.push_back(s.labels[keep[k]]);
  }
  if (dropped_zero_rows) *dropped_zero_rows = dropped;
  return r;
}

SampleSet synthetic_samples(std::size_t n, std::size_t d, std::uint64_t seed) {
  if (n == 0 || d == 0) throw std::invalid_argument("synthetic_samples: n and d must be >= 1");
  SampleSet s;
  s.rows = Matrix(n, d);
  SplitMix64 root(seed);
  for (std::size_t i = 0; i < n; ++i) {
    auto row = s.rows.row(i);
    for (std::uint64_t attempt = 0;; ++attempt) {
      SplitMix64 rng = root.substream(stream_key(i, attempt));
      for (std::size_t j = 0; j < d; ++j) row[j] = rng.next_gaussian();
      const double r = norm(row);
      if (r > 0.0) {
        for (std::size_t j = 0; j < d; ++j) row[j] /= r;
        break;
      }
    }
  }
  s.source = "synthetic(n=" + std::to_string(n) + ",d=" + std::to_string(d) +
             ",seed=" + std::to_string(seed) + ")";
  s.normalized = true;
  return s;
}

}  // namespace proxvr
