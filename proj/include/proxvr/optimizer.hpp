#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "proxvr/problem.hpp"
#include "proxvr/sampling.hpp"

namespace proxvr {

enum class Algo { ProxSvrgPlus, ProxSvrg, ProxSgd, ProxGd };
enum class OutputMode { UniformIterate, LastIterate };

const char* algo_name(Algo a);
std::optional<Algo> parse_algo(const std::string& name);

struct OptimizerConfig {
  std::size_t batch = 0;         // snapshot batch B; 0 resolves to n
  std::size_t minibatch = 1;     // b
  std::size_t epoch_length = 0;  // m; 0 resolves to the per-algorithm default
  double eta = 0.0;              // step size; 0 resolves to the per-algorithm default
  std::size_t epochs = 1;        // S
  OutputMode output_mode = OutputMode::UniformIterate;
  std::uint64_t seed = 0;
  std::optional<double> eps_target;  // early stop when the squared gradient
                                     // mapping at the epoch point falls below
  Replacement replacement = Replacement::WithReplacement;
  std::size_t trace_stride = 0;  // rows every this many inner iterations; 0 = auto
  double metric_eta = 0.0;       // step used inside the reported metric; 0 = run's eta
  bool record_trace = true;
  bool keep_history = false;  // store every pre-step iterate (test hook)
};

struct TraceRecord {
  std::size_t epoch = 0;
  std::size_t iter = 0;
  std::uint64_t sfo = 0;
  std::uint64_t po = 0;
  std::uint64_t diag_sfo = 0;
  double objective = 0.0;
  double grad_map_sq = 0.0;
  double elapsed_ms = 0.0;
};

struct RunResult {
  Vec output;        // selected per output_mode
  Vec last_iterate;  // final epoch point
  std::vector<TraceRecord> trace;
  OracleCounter counters;
  bool aborted = false;  // non-finite iterate encountered
  std::size_t abort_epoch = 0;
  bool reached_target = false;
  // resolved settings the run actually used
  double eta = 0.0;
  std::size_t batch = 0;
  std::size_t epoch_length = 0;
  std::vector<Vec> history;  // pre-step iterates, only when keep_history
};

// Variance-reduced proximal run: per epoch, a batch snapshot gradient over B
// indices, then m inner steps using the minibatch difference estimator
//   v = (1/b) sum_{i in I_b} (grad f_i(x) - grad f_i(snapshot)) + g
// and x <- prox_{eta h}(x - eta v). Accounting: B SFO per snapshot, b SFO and
// 1 PO per inner step; trace metrics go to the diagnostic tally.
RunResult prox_svrg_plus(const FiniteSumProblem& problem, const Vec& x0,
                         const OptimizerConfig& cfg);

// ProxGd: full-gradient steps at eta (default 1/L), one iteration per epoch.
// ProxSgd: plain minibatch steps at eta (default 1/(2L)), no snapshot.
// ProxSvrg: the snapshot scheme with B forced to n, eta default
// b^{3/2}/(3Ln), epoch length default round(n/(3b)).
RunResult run_baseline(Algo kind, const FiniteSumProblem& problem, const Vec& x0,
                       const OptimizerConfig& cfg);

RunResult run_algorithm(Algo kind, const FiniteSumProblem& problem, const Vec& x0,
                        const OptimizerConfig& cfg);

double default_step_size(Algo kind, double L, std::size_t b, std::size_t n);
std::size_t default_epoch_length(Algo kind, std::size_t b, std::size_t n);

// Recommended configuration: eta = 1/(6L), m = ceil(sqrt(b)), B = n or
// min{ceil(6 sigma^2/eps), n} when sigma is given, S = ceil(T/m) with
// T = ceil(36 L delta_phi / eps) total inner iterations.
OptimizerConfig configure_recommended(std::size_t n, double L, double delta_phi, double eps,
                                      std::size_t b, std::optional<double> sigma = {});

// Free-epoch-length configuration: eta = min{1/(6L), sqrt(b)/(6 m L)}, same B
// rule, S = ceil(T/m) with T = ceil(6 delta_phi / (eps eta)).
OptimizerConfig configure_for_epoch_length(std::size_t m, std::size_t b, std::size_t n, double L,
                                           double delta_phi, double eps,
                                           std::optional<double> sigma = {});

// Uniform draw over stored candidates, or the last one.
Vec select_output(const std::vector<Vec>& history, OutputMode mode, SplitMix64& rng);

// Shared starting point: ones(d)/sqrt(d), feasible for the ball-and-nonneg
// constraint and identical across algorithms.
Vec default_start(const FiniteSumProblem& problem);

}  // namespace proxvr
