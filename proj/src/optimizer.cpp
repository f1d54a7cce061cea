#include "proxvr/optimizer.hpp"

#include <chrono>
#include <cmath>
#include <limits>

namespace proxvr {

const char* algo_name(Algo a) {
  switch (a) {
    case Algo::ProxSvrgPlus:
      return "proxsvrg+";
    case Algo::ProxSvrg:
      return "proxsvrg";
    case Algo::ProxSgd:
      return "proxsgd";
    case Algo::ProxGd:
      return "proxgd";
  }
  return "?";
}

std::optional<Algo> parse_algo(const std::string& name) {
  if (name == "proxsvrg+" || name == "proxsvrgplus") return Algo::ProxSvrgPlus;
  if (name == "proxsvrg") return Algo::ProxSvrg;
  if (name == "proxsgd") return Algo::ProxSgd;
  if (name == "proxgd") return Algo::ProxGd;
  return std::nullopt;
}

double default_step_size(Algo kind, double L, std::size_t b, std::size_t n) {
  switch (kind) {
    case Algo::ProxGd:
      return 1.0 / L;
    case Algo::ProxSgd:
      return 1.0 / (2.0 * L);
    case Algo::ProxSvrg:
      return std::pow(static_cast<double>(b), 1.5) / (3.0 * L * static_cast<double>(n));
    case Algo::ProxSvrgPlus:
      return 1.0 / (6.0 * L);
  }
  return 1.0 / L;
}

std::size_t default_epoch_length(Algo kind, std::size_t b, std::size_t n) {
  switch (kind) {
    case Algo::ProxGd:
      return 1;
    case Algo::ProxSgd:
      return (n + b - 1) / b;
    case Algo::ProxSvrg: {
      const auto m = static_cast<std::size_t>(
          std::llround(static_cast<double>(n) / (3.0 * static_cast<double>(b))));
      return std::max<std::size_t>(1, m);
    }
    case Algo::ProxSvrgPlus:
      return static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(b))));
  }
  return 1;
}

Vec default_start(const FiniteSumProblem& problem) {
  const std::size_t d = problem.dim();
  return Vec(d, 1.0 / std::sqrt(static_cast<double>(d)));
}

Vec select_output(const std::vector<Vec>& history, OutputMode mode, SplitMix64& rng) {
  if (history.empty()) throw std::invalid_argument("select_output: empty history");
  if (mode == OutputMode::LastIterate) return history.back();
  return history[rng.next_below(history.size())];
}

namespace {

struct EngineSetup {
  bool uses_snapshot = false;   // batch gradient anchored estimator
  bool full_gradient = false;   // v = grad f(x) every step
};

EngineSetup setup_for(Algo kind) {
  switch (kind) {
    case Algo::ProxSvrgPlus:
    case Algo::ProxSvrg:
      return {true, false};
    case Algo::ProxSgd:
      return {false, false};
    case Algo::ProxGd:
      return {false, true};
  }
  return {};
}

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

// Gradient step x - eta v followed by the prox, tolerant of overflow: the
// engine turns a non-finite step into an abort record instead of letting the
// prox input validation throw mid-run. Matches prox_linearized bit for bit on
// finite inputs.
bool guarded_prox_step(const Vec& x, const Vec& v, double eta, const NonsmoothTerm& h, Vec& out) {
  Vec z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] - eta * v[i];
  if (!all_finite(z)) return false;
  out = h.prox(z, eta);
  return all_finite(out);
}

// Squared gradient-mapping norm at p, +infinity when the evaluation overflows.
double guarded_mapping_sq(const Vec& p, const Vec& grad, double eta, const NonsmoothTerm& h) {
  if (!all_finite(grad)) return std::numeric_limits<double>::infinity();
  Vec mapped;
  if (!guarded_prox_step(p, grad, eta, h, mapped))
    return std::numeric_limits<double>::infinity();
  double acc = 0.0;
  const double inv = 1.0 / eta;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double g = (p[i] - mapped[i]) * inv;
    acc += g * g;
  }
  return acc;
}

// Keeps one uniformly-drawn candidate from a stream of unknown length.
class Reservoir {
 public:
  explicit Reservoir(SplitMix64 rng) : rng_(rng) {}
  void consider(const Vec& x) {
    ++count_;
    if (rng_.next_below(count_) == 0) pick_ = x;
  }
  bool empty() const { return count_ == 0; }
  const Vec& pick() const { return pick_; }

 private:
  SplitMix64 rng_;
  std::uint64_t count_ = 0;
  Vec pick_;
};

RunResult run_engine(Algo kind, const FiniteSumProblem& problem, const Vec& x0,
                     const OptimizerConfig& cfg) {
  const std::size_t n = problem.num_components();
  const std::size_t d = problem.dim();
  if (x0.size() != d) throw std::invalid_argument("run: x0 has wrong dimension");
  check_finite(x0, "run x0");

  const EngineSetup mode = setup_for(kind);

  const std::size_t b = cfg.minibatch == 0 ? 1 : cfg.minibatch;
  if (b > n) throw std::invalid_argument("run: minibatch exceeds component count");
  std::size_t B = cfg.batch == 0 ? n : cfg.batch;
  if (B > n) throw std::invalid_argument("run: snapshot batch exceeds component count");
  if (kind == Algo::ProxSvrg && B != n)
    throw std::invalid_argument("run: this baseline requires the full snapshot batch B = n");

  const std::size_t m =
      cfg.epoch_length == 0 ? default_epoch_length(kind, b, n) : cfg.epoch_length;
  const double eta = cfg.eta == 0.0 ? default_step_size(kind, problem.lipschitz(), b, n) : cfg.eta;
  if (!(eta > 0.0)) throw std::invalid_argument("run: step size must be positive");
  const double metric_eta = cfg.metric_eta > 0.0 ? cfg.metric_eta : eta;
  const std::size_t stride =
      cfg.trace_stride != 0 ? cfg.trace_stride : (m <= 32 ? 1 : (m + 31) / 32);

  const NonsmoothTerm& h = problem.h();
  MinibatchSampler root(cfg.seed, cfg.replacement);
  Reservoir reservoir(SplitMix64(cfg.seed).substream(stream_key(0x5e1ec7ull, 0)));
  Stopwatch clock;

  RunResult res;
  res.eta = eta;
  res.batch = mode.uses_snapshot ? B : 0;
  res.epoch_length = m;

  Vec x = x0, snapshot = x0;
  Vec g(d), gx(d), gs(d), v(d), next(d), metric_grad(d);
  std::vector<std::uint32_t> idx;

  auto metric_at = [&](const Vec& p) {
    problem.full_gradient(p, metric_grad);
    res.counters.record_diag(n);
    return guarded_mapping_sq(p, metric_grad, metric_eta, h);
  };

  auto push_row = [&](std::size_t epoch, std::size_t iter, double obj, double gmsq) {
    res.trace.push_back({epoch, iter, res.counters.sfo(), res.counters.po(),
                         res.counters.diag_sfo(), obj, gmsq, clock.ms()});
  };

  if (cfg.record_trace) push_row(0, 0, problem.objective(x), metric_at(x));

  for (std::size_t s = 1; s <= cfg.epochs; ++s) {
    if (mode.uses_snapshot) {
      if (B == n) {
        problem.full_gradient(snapshot, g);
      } else {
        MinibatchSampler bs = root.substream(stream_key(s, 0));
        bs.sample(B, n, idx);
        problem.sum_component_gradients(idx, snapshot, g);
        const double inv = 1.0 / static_cast<double>(B);
        for (double& val : g) val *= inv;
      }
      res.counters.record(B, 0);
      x = snapshot;
    }

    for (std::size_t t = 1; t <= m; ++t) {
      reservoir.consider(x);
      if (cfg.keep_history) res.history.push_back(x);

      if (mode.full_gradient) {
        problem.full_gradient(x, v);
        res.counters.record(n, 1);
      } else {
        MinibatchSampler bs = root.substream(stream_key(s, t));
        bs.sample(b, n, idx);
        if (mode.uses_snapshot) {
          problem.sum_component_gradients(idx, x, gx);
          problem.sum_component_gradients(idx, snapshot, gs);
          const double inv = 1.0 / static_cast<double>(b);
          for (std::size_t j = 0; j < d; ++j) v[j] = (gx[j] - gs[j]) * inv + g[j];
        } else {
          problem.sum_component_gradients(idx, x, v);
          const double inv = 1.0 / static_cast<double>(b);
          for (double& val : v) val *= inv;
        }
        res.counters.record(b, 1);
      }

      const bool step_ok = guarded_prox_step(x, v, eta, h, next);
      if (step_ok) x = next;

      if (!step_ok) {
        res.aborted = true;
        res.abort_epoch = s;
        const double inf = std::numeric_limits<double>::infinity();
        push_row(s, t, inf, inf);
        res.last_iterate = snapshot;
        res.output = cfg.output_mode == OutputMode::LastIterate || reservoir.empty()
                         ? snapshot
                         : reservoir.pick();
        return res;
      }

      const bool epoch_end = t == m;
      if (cfg.record_trace && (t % stride == 0 || epoch_end) && !(epoch_end && cfg.eps_target)) {
        push_row(s, t, problem.objective(x), metric_at(x));
      }
    }

    snapshot = x;

    if (cfg.eps_target) {
      const double gmsq = metric_at(snapshot);
      if (cfg.record_trace) push_row(s, m, problem.objective(snapshot), gmsq);
      if (gmsq <= *cfg.eps_target) {
        res.reached_target = true;
        break;
      }
    }
  }

  res.last_iterate = snapshot;
  res.output = cfg.output_mode == OutputMode::LastIterate || reservoir.empty()
                   ? snapshot
                   : reservoir.pick();
  return res;
}

}  // namespace

RunResult prox_svrg_plus(const FiniteSumProblem& problem, const Vec& x0,
                         const OptimizerConfig& cfg) {
  OptimizerConfig c = cfg;
  if (c.epoch_length == 0)
    c.epoch_length = default_epoch_length(Algo::ProxSvrgPlus, std::max<std::size_t>(1, c.minibatch),
                                          problem.num_components());
  return run_engine(Algo::ProxSvrgPlus, problem, x0, c);
}

RunResult run_baseline(Algo kind, const FiniteSumProblem& problem, const Vec& x0,
                       const OptimizerConfig& cfg) {
  if (kind == Algo::ProxSvrgPlus)
    throw std::invalid_argument("run_baseline: not a baseline algorithm");
  OptimizerConfig c = cfg;
  if (kind == Algo::ProxGd) c.epoch_length = 1;
  if (kind == Algo::ProxSvrg) c.batch = problem.num_components();
  return run_engine(kind, problem, x0, c);
}

RunResult run_algorithm(Algo kind, const FiniteSumProblem& problem, const Vec& x0,
                        const OptimizerConfig& cfg) {
  return kind == Algo::ProxSvrgPlus ? prox_svrg_plus(problem, x0, cfg)
                                    : run_baseline(kind, problem, x0, cfg);
}

OptimizerConfig configure_recommended(std::size_t n, double L, double delta_phi, double eps,
                                      std::size_t b, std::optional<double> sigma) {
  if (!(eps > 0.0)) throw std::invalid_argument("configure: eps must be positive");
  if (!(L > 0.0)) throw std::invalid_argument("configure: L must be positive");
  if (!(delta_phi > 0.0)) throw std::invalid_argument("configure: delta_phi must be positive");
  if (b == 0 || b > n) throw std::invalid_argument("configure: need 1 <= b <= n");

  OptimizerConfig cfg;
  cfg.minibatch = b;
  cfg.eta = 1.0 / (6.0 * L);
  cfg.epoch_length = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(b))));
  if (sigma) {
    const double want = std::ceil(6.0 * (*sigma) * (*sigma) / eps);
    cfg.batch = static_cast<std::size_t>(std::min(want, static_cast<double>(n)));
    cfg.batch = std::max<std::size_t>(1, cfg.batch);
  } else {
    cfg.batch = n;
  }
  const double total_iters = std::ceil(36.0 * L * delta_phi / eps);
  cfg.epochs = static_cast<std::size_t>(
      std::ceil(total_iters / static_cast<double>(cfg.epoch_length)));
  cfg.eps_target = eps;
  return cfg;
}

OptimizerConfig configure_for_epoch_length(std::size_t m, std::size_t b, std::size_t n, double L,
                                           double delta_phi, double eps,
                                           std::optional<double> sigma) {
  if (m == 0) throw std::invalid_argument("configure: epoch length must be >= 1");
  OptimizerConfig cfg = configure_recommended(n, L, delta_phi, eps, b, sigma);
  cfg.epoch_length = m;
  cfg.eta = std::min(1.0 / (6.0 * L),
                     std::sqrt(static_cast<double>(b)) / (6.0 * static_cast<double>(m) * L));
  const double total_iters = std::ceil(6.0 * delta_phi / (eps * cfg.eta));
  cfg.epochs =
      static_cast<std::size_t>(std::ceil(total_iters / static_cast<double>(m)));
  return cfg;
}

}  // namespace proxvr
