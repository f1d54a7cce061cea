#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "doctest.h"
#include "proxvr/trace.hpp"

namespace {

std::string temp_path(const std::string& tag) {
  static int counter = 0;
  return "/tmp/proxvr_cli_" + std::to_string(getpid()) + "_" + tag + "_" +
         std::to_string(counter++) + ".csv";
}

int run_cmd(const std::string& args) {
  const std::string cmd = std::string(PROXBENCH_PATH) + " " + args + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  if (status == -1) return -1;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  return cells;
}

std::string drop_last_column(const std::string& line) {
  const auto pos = line.rfind(',');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

struct Cleanup {
  std::vector<std::string> paths;
  ~Cleanup() {
    for (const auto& p : paths) std::remove(p.c_str());
  }
  const std::string& add(std::string p) {
    paths.push_back(std::move(p));
    return paths.back();
  }
};

}  // namespace

TEST_CASE("run emits the documented trace header and resolves B = n/5") {
  Cleanup tmp;
  const std::string out = tmp.add(temp_path("run"));
  const int rc = run_cmd(
      "run --algo proxsvrg+ --problem nnpca --synthetic n=2000,d=50 "
      "--b 64 --B n/5 --epochs 30 --seed 1 -o " + out);
  CHECK(rc == 0);
  auto lines = read_lines(out);
  REQUIRE(lines.size() >= 3);
  CHECK(lines[0] == proxvr::kTraceHeader);
  // default epoch length for b = 64 is 8, traced every step: 1 + 30*8 rows
  CHECK(lines.size() == 242);

  auto first = split_csv(lines[1]);
  REQUIRE(first.size() == 16);
  CHECK(first[0] == "proxsvrg+");
  CHECK(first[1] == "1");
  CHECK(first[2] == "2000");
  CHECK(first[3] == "50");
  CHECK(first[4] == "400");  // n/5
  CHECK(first[5] == "64");
  CHECK(first[6] == "8");
  CHECK(first[8] == "0");
  CHECK(first[9] == "0");

  auto last = split_csv(lines.back());
  REQUIRE(last.size() == 16);
  CHECK(std::stod(last[14]) < std::stod(first[14]));  // stationarity improved
}

TEST_CASE("identical run specifications produce identical traces modulo timing") {
  Cleanup tmp;
  const std::string a = tmp.add(temp_path("rerun_a"));
  const std::string b = tmp.add(temp_path("rerun_b"));
  const std::string spec =
      "run --algo proxsvrg+ --problem nnpca --synthetic n=500,d=20 "
      "--b 16 --B n/2 --epochs 8 --seed 3 -o ";
  CHECK(run_cmd(spec + a) == 0);
  CHECK(run_cmd(spec + b) == 0);
  auto la = read_lines(a);
  auto lb = read_lines(b);
  REQUIRE(la.size() == lb.size());
  REQUIRE(la.size() > 1);
  for (std::size_t k = 0; k < la.size(); ++k) {
    CHECK(drop_last_column(la[k]) == drop_last_column(lb[k]));
  }
}

TEST_CASE("full-gradient runs charge exactly n oracle calls per step") {
  Cleanup tmp;
  const std::string out = tmp.add(temp_path("gd"));
  const int rc = run_cmd(
      "run --algo proxgd --problem nnpca --synthetic n=100,d=10 --epochs 5 -o " + out);
  CHECK(rc == 0);
  auto lines = read_lines(out);
  REQUIRE(lines.size() == 7);  // header + setup row + 5 steps
  for (std::size_t k = 1; k < lines.size(); ++k) {
    auto cells = split_csv(lines[k]);
    REQUIRE(cells.size() == 16);
    CHECK(cells[10] == std::to_string((k - 1) * 100));  // sfo column
    CHECK(cells[11] == std::to_string(k - 1));          // po column
  }
}

TEST_CASE("compare interleaves algorithms and seeds under one header") {
  Cleanup tmp;
  const std::string out = tmp.add(temp_path("cmp"));
  const int rc = run_cmd(
      "compare --problem nnpca --synthetic n=300,d=20 --b 16 --epochs 3 "
      "--algos proxgd,proxsvrg+ --seeds 0,1 -o " + out);
  CHECK(rc == 0);
  auto lines = read_lines(out);
  REQUIRE(lines.size() > 1);
  CHECK(lines[0] == proxvr::kTraceHeader);

  std::set<std::pair<std::string, std::string>> blocks;
  std::set<std::string> start_objectives;
  std::size_t headers = 0;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    if (lines[k] == proxvr::kTraceHeader) {
      ++headers;
      continue;
    }
    auto cells = split_csv(lines[k]);
    REQUIRE(cells.size() == 16);
    blocks.insert({cells[0], cells[1]});
    if (cells[8] == "0" && cells[9] == "0") start_objectives.insert(cells[13]);
  }
  CHECK(headers == 0);      // exactly one header, already consumed as line 0
  CHECK(blocks.size() == 4);  // 2 algorithms x 2 seeds
  CHECK(start_objectives.size() == 1);  // shared starting point
}

TEST_CASE("compare rejects a single-algorithm list") {
  Cleanup tmp;
  const std::string out = tmp.add(temp_path("cmp_one"));
  const int rc = run_cmd(
      "compare --problem nnpca --synthetic n=50,d=5 --algos proxgd -o " + out);
  CHECK(rc != 0);
}

TEST_CASE("complexity sweep carries the optimum marker and flat proximal column") {
  Cleanup tmp;
  const std::string out = tmp.add(temp_path("cx"));
  const int rc = run_cmd("complexity --n 1000 --points 10 -o " + out);
  CHECK(rc == 0);
  auto lines = read_lines(out);
  REQUIRE(lines.size() > 1);
  CHECK(lines[0] == "b,algo,sfo,po,condition,asymptotic,optimal");

  std::set<std::string> main_po;
  std::size_t starred = 0;
  double prev_b = 0.0, prev_svrg_po = 0.0;
  bool svrg_po_decreasing = true;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    auto cells = split_csv(lines[k]);
    REQUIRE(cells.size() == 7);
    if (cells[1] == "proxsvrg+") {
      main_po.insert(cells[3]);
      CHECK(cells[5] == "0");  // pinned constants, not asymptotic
      starred += cells[6] == "1";
    }
    if (cells[1] == "proxsvrg") {
      const double bval = std::stod(cells[0]);
      const double po = std::stod(cells[3]);
      if (prev_b > 0.0 && bval > prev_b && po >= prev_svrg_po) svrg_po_decreasing = false;
      prev_b = bval;
      prev_svrg_po = po;
    }
  }
  CHECK(main_po.size() == 1);  // proximal bound independent of b
  CHECK(starred == 1);         // exactly one row marks the scanned optimum
  CHECK(svrg_po_decreasing);
}

TEST_CASE("complexity rejects an empty sweep range") {
  CHECK(run_cmd("complexity --n 100 --b-min 50 --b-max 10 -o /dev/null") != 0);
}

TEST_CASE("validate suites exit cleanly and write the report schema") {
  Cleanup tmp;
  for (const char* suite : {"prox", "lemmas", "variance", "pl"}) {
    const std::string out = tmp.add(temp_path(std::string("val_") + suite));
    const int rc = run_cmd("validate --suite " + std::string(suite) +
                           " --trials 200 --seed 9 -o " + out);
    CHECK(rc == 0);
    auto lines = read_lines(out);
    REQUIRE(lines.size() >= 2);
    CHECK(lines[0] == proxvr::kReportHeader);
    for (std::size_t k = 1; k < lines.size(); ++k) {
      auto cells = split_csv(lines[k]);
      REQUIRE(cells.size() == 7);
      CHECK(cells[0] == suite);
      if (cells[6] == "1") CHECK(cells[3] == "0");  // asserted rows are clean
    }
  }
}

TEST_CASE("the documented validation example passes at full trial count") {
  Cleanup tmp;
  const std::string out = tmp.add(temp_path("val_full"));
  CHECK(run_cmd("validate --suite lemmas --trials 1000 --seed 9 -o " + out) == 0);
  auto lines = read_lines(out);
  REQUIRE(lines.size() == 4);  // header + three inequality rows
  for (std::size_t k = 1; k < lines.size(); ++k) {
    auto cells = split_csv(lines[k]);
    CHECK(cells[2] == "1000");
    CHECK(cells[3] == "0");
  }
}

TEST_CASE("usage errors exit with the failure status") {
  CHECK(run_cmd("run --algo newton --problem nnpca --synthetic n=10,d=3 -o /dev/null") != 0);
  CHECK(run_cmd("validate --suite bogus -o /dev/null") != 0);
  CHECK(run_cmd("run --problem nnpca -o /dev/null") != 0);              // no data source
  CHECK(run_cmd("run --problem nnpca --synthetic n=10 -o /dev/null") != 0);  // missing d
  CHECK(run_cmd("") != 0);  // subcommand required
}
