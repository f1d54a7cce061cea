#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <string>

#include "doctest.h"
#include "proxvr/dataset.hpp"
#include "proxvr/vec.hpp"

using namespace proxvr;

namespace {

// Writes content to a fresh temp file and returns its path.
class TempFile {
 public:
  explicit TempFile(const std::string& content) {
    static int counter = 0;
    path_ = "/tmp/proxvr_dataset_" + std::to_string(getpid()) + "_" +
            std::to_string(counter++) + ".libsvm";
    std::ofstream out(path_, std::ios::binary);
    out << content;
  }
  ~TempFile() { std::remove(path_.c_str()); }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

std::string thrown_message(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("libsvm parsing fills dense rows with zeros for missing indices") {
  TempFile f("1 1:0.5 3:0.5\n");
  const SampleSet s = read_libsvm(f.path(), 3);
  REQUIRE(s.n() == 1);
  REQUIRE(s.dim() == 3);
  CHECK(s.rows.at(0, 0) == 0.5);
  CHECK(s.rows.at(0, 1) == 0.0);
  CHECK(s.rows.at(0, 2) == 0.5);
  CHECK(s.labels.empty());
}

TEST_CASE("libsvm parsing infers the dimension, keeps labels on request, skips comments") {
  TempFile f("# header comment\n+1 2:1.0\n\n-1 1:2.0 4:3.0  # trailing note\n");
  const SampleSet s = read_libsvm(f.path(), 0, true);
  REQUIRE(s.n() == 2);
  REQUIRE(s.dim() == 4);
  CHECK(s.rows.at(0, 1) == 1.0);
  CHECK(s.rows.at(1, 0) == 2.0);
  CHECK(s.rows.at(1, 3) == 3.0);
  REQUIRE(s.labels.size() == 2);
  CHECK(s.labels[0] == 1.0);
  CHECK(s.labels[1] == -1.0);
}

TEST_CASE("libsvm parse errors name the offending line") {
  TempFile empty("");
  CHECK_THROWS_AS(read_libsvm(empty.path()), std::runtime_error);

  TempFile only_comments("# nothing\n\n");
  CHECK_THROWS_AS(read_libsvm(only_comments.path()), std::runtime_error);

  TempFile bad_value("1 1:0.5\n1 2:abc\n");
  const std::string msg = thrown_message([&] { read_libsvm(bad_value.path()); });
  CHECK(msg.find(":2:") != std::string::npos);

  TempFile non_ascending("1 2:1.0 2:2.0\n");
  CHECK_THROWS_AS(read_libsvm(non_ascending.path()), std::runtime_error);

  TempFile descending("1 3:1.0 2:2.0\n");
  CHECK_THROWS_AS(read_libsvm(descending.path()), std::runtime_error);

  TempFile zero_index("1 0:1.0\n");
  CHECK_THROWS_AS(read_libsvm(zero_index.path()), std::runtime_error);

  TempFile beyond_dim("1 5:1.0\n");
  CHECK_THROWS_AS(read_libsvm(beyond_dim.path(), 4), std::runtime_error);

  TempFile label_missing("1:0.5 2:0.5\n");
  CHECK_THROWS_AS(read_libsvm(label_missing.path()), std::runtime_error);

  CHECK_THROWS_AS(read_libsvm("/nonexistent/proxvr.libsvm"), std::runtime_error);
}

TEST_CASE("libsvm write-then-read round-trips exactly") {
  SampleSet s;
  s.rows = Matrix(2, 3);
  s.rows.at(0, 0) = 0.125;
  s.rows.at(0, 2) = -1.75;
  s.rows.at(1, 1) = 0.1;  // not exactly representable, exercises round-trip text
  s.labels = {1.0, -1.0};

  static int counter = 0;
  const std::string path =
      "/tmp/proxvr_roundtrip_" + std::to_string(getpid()) + "_" + std::to_string(counter++);
  write_libsvm(s, path);
  const SampleSet back = read_libsvm(path, 3, true);
  std::remove(path.c_str());

  REQUIRE(back.n() == 2);
  REQUIRE(back.dim() == 3);
  CHECK(std::memcmp(back.rows.data.data(), s.rows.data.data(), 6 * sizeof(double)) == 0);
  CHECK(back.labels == s.labels);
}

TEST_CASE("row normalization scales, drops zero rows, and is idempotent") {
  SampleSet s;
  s.rows = Matrix(3, 2);
  s.rows.at(0, 0) = 3.0;
  s.rows.at(0, 1) = 4.0;
  // row 1 stays zero
  s.rows.at(2, 0) = -2.0;

  std::size_t dropped = 0;
  const SampleSet norm = normalize_rows(s, &dropped);
  CHECK(dropped == 1);
  REQUIRE(norm.n() == 2);
  CHECK(norm.normalized);
  CHECK(norm.rows.at(0, 0) == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(norm.rows.at(0, 1) == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(norm.rows.at(1, 0) == doctest::Approx(-1.0).epsilon(1e-12));

  const SampleSet twice = normalize_rows(norm);
  for (std::size_t i = 0; i < twice.n(); ++i)
    for (std::size_t j = 0; j < twice.dim(); ++j)
      CHECK(std::abs(twice.rows.at(i, j) - norm.rows.at(i, j)) <= 1e-12);
}

TEST_CASE("synthetic samples are deterministic, unit norm, and centered") {
  const SampleSet a = synthetic_samples(5, 3, 7);
  const SampleSet b = synthetic_samples(5, 3, 7);
  REQUIRE(a.rows.data.size() == b.rows.data.size());
  CHECK(std::memcmp(a.rows.data.data(), b.rows.data.data(),
                    a.rows.data.size() * sizeof(double)) == 0);
  CHECK(a.normalized);

  const SampleSet other = synthetic_samples(5, 3, 8);
  CHECK(std::memcmp(a.rows.data.data(), other.rows.data.data(),
                    a.rows.data.size() * sizeof(double)) != 0);

  const SampleSet big = synthetic_samples(1000, 100, 3);
  for (std::size_t i = 0; i < big.n(); ++i)
    CHECK(std::abs(norm(big.rows.row(i)) - 1.0) <= 1e-10);

  double mean = 0.0;
  for (const double v : big.rows.data) mean += v;
  mean /= static_cast<double>(big.rows.data.size());
  CHECK(std::abs(mean) <= 4.0 / std::sqrt(static_cast<double>(big.rows.data.size())));
}

TEST_CASE("synthetic samples reject degenerate shapes") {
  CHECK_THROWS_AS(synthetic_samples(0, 3, 1), std::invalid_argument);
  CHECK_THROWS_AS(synthetic_samples(3, 0, 1), std::invalid_argument);
}
