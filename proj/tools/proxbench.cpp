#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "proxvr/complexity.hpp"
#include "proxvr/dataset.hpp"
#include "proxvr/diagnostics.hpp"
#include "proxvr/optimizer.hpp"
#include "proxvr/problem.hpp"
#include "proxvr/trace.hpp"

namespace {

using namespace proxvr;

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;  // asserted inequality violated
constexpr int kExitFailure = 2;    // divergence, usage, or I/O error

// "n=2000,d=50" with an optional "seed=..." key.
struct SyntheticSpec {
  std::size_t n = 0;
  std::size_t d = 0;
  std::uint64_t seed = 42;
};

SyntheticSpec parse_synthetic(const std::string& text) {
  SyntheticSpec spec;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw CLI::ValidationError("--synthetic", "expected key=value, got '" + item + "'");
    const std::string key = item.substr(0, eq);
    const std::string val = item.substr(eq + 1);
    std::size_t used = 0;
    unsigned long long parsed = 0;
    try {
      parsed = std::stoull(val, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != val.size())
      throw CLI::ValidationError("--synthetic", "key '" + key + "' needs an integer value");
    if (key == "n")
      spec.n = parsed;
    else if (key == "d")
      spec.d = parsed;
    else if (key == "seed")
      spec.seed = parsed;
    else
      throw CLI::ValidationError("--synthetic", "unknown key '" + key + "'");
  }
  if (spec.n == 0 || spec.d == 0)
    throw CLI::ValidationError("--synthetic", "needs n=<count>,d=<dim>");
  return spec;
}

// Literal batch sizes: "n", "n/5", or a plain integer. 0 keeps the
// resolve-to-n default.
std::size_t parse_batch(const std::string& text, std::size_t n) {
  if (text.empty() || text == "n") return n;
  if (text.rfind("n/", 0) == 0) {
    const std::string denom = text.substr(2);
    std::size_t used = 0;
    unsigned long long k = 0;
    try {
      k = std::stoull(denom, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != denom.size() || k == 0)
      throw CLI::ValidationError("--B", "expected n/<positive integer>, got '" + text + "'");
    return std::max<std::size_t>(1, n / k);
  }
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size())
    throw CLI::ValidationError("--B", "expected an integer, 'n', or 'n/<k>', got '" + text + "'");
  return static_cast<std::size_t>(v);
}

// Flags shared by run and compare that pick the objective.
struct ProblemFlags {
  std::string kind = "nnpca";
  std::string synthetic;
  std::string data_path;
  double lambda = 0.0;
  bool normalize = true;
};

void add_problem_flags(CLI::App& cmd, ProblemFlags& pf) {
  cmd.add_option("--problem", pf.kind, "Objective: nnpca or pl_quadratic")
      ->check(CLI::IsMember({"nnpca", "pl_quadratic"}))
      ->capture_default_str();
  cmd.add_option("--synthetic", pf.synthetic,
                 "Generate data as n=<count>,d=<dim>[,seed=<s>] instead of loading a file");
  cmd.add_option("--data", pf.data_path, "libsvm-format dataset path (nnpca only)");
  cmd.add_option("--lambda", pf.lambda, "l1 weight for pl_quadratic")->capture_default_str();
  cmd.add_flag("--normalize,!--no-normalize", pf.normalize,
               "Scale loaded samples to unit norm (zero rows dropped)")
      ->capture_default_str();
}

std::unique_ptr<FiniteSumProblem> build_problem(const ProblemFlags& pf) {
  if (pf.kind == "pl_quadratic") {
    if (!pf.data_path.empty())
      throw CLI::ValidationError("--data", "pl_quadratic instances are synthetic only");
    PlQuadraticConfig cfg;
    if (!pf.synthetic.empty()) {
      const SyntheticSpec spec = parse_synthetic(pf.synthetic);
      cfg.n = spec.n;
      cfg.d = spec.d;
      cfg.seed = spec.seed;
    }
    cfg.lambda = pf.lambda;
    return std::make_unique<QuadraticProblem>(synthetic_pl_quadratic(cfg));
  }
  if (!pf.synthetic.empty() && !pf.data_path.empty())
    throw CLI::ValidationError("--synthetic", "give either --synthetic or --data, not both");
  SampleSet samples;
  if (!pf.data_path.empty()) {
    samples = read_libsvm(pf.data_path);
    if (pf.normalize) {
      std::size_t dropped = 0;
      samples = normalize_rows(samples, &dropped);
      if (dropped > 0)
        std::cerr << "note: dropped " << dropped << " zero rows during normalization\n";
    }
  } else if (!pf.synthetic.empty()) {
    const SyntheticSpec spec = parse_synthetic(pf.synthetic);
    samples = synthetic_samples(spec.n, spec.d, spec.seed);
  } else {
    throw CLI::ValidationError("--synthetic", "nnpca needs --synthetic or --data");
  }
  return std::make_unique<NnPcaProblem>(build_nnpca(samples));
}

// Opens --out; "-" means stdout.
class OutputSink {
 public:
  explicit OutputSink(const std::string& path) {
    if (path != "-") {
      file_.open(path, std::ios::binary);
      if (!file_) throw std::runtime_error("cannot open output file: " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
  bool flush_ok() {
    stream().flush();
    return stream().good();
  }

 private:
  std::ofstream file_;
};

// One long-option key per line ("epochs=40"), '#' or ';' comments, optional
// quotes around the value.
std::vector<std::pair<std::string, std::string>> read_flat_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::vector<std::pair<std::string, std::string>> items;
  std::set<std::string> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string s = CLI::detail::trim_copy(line);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    const std::string at = path + ":" + std::to_string(lineno);
    if (s[0] == '[')
      throw std::runtime_error(at + ": sections are not supported, use flat key=value lines");
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw std::runtime_error(at + ": expected key=value");
    const std::string key = CLI::detail::trim_copy(s.substr(0, eq));
    if (!seen.insert(key).second) throw std::runtime_error(at + ": duplicate key '" + key + "'");
    std::string val = CLI::detail::trim_copy(s.substr(eq + 1));
    if (val.size() >= 2 && (val.front() == '"' || val.front() == '\'') && val.back() == val.front())
      val = val.substr(1, val.size() - 2);
    items.emplace_back(key, val);
  }
  return items;
}

bool option_on_command_line(const CLI::Option& opt, const std::vector<std::string>& args) {
  for (const std::string& tok : args) {
    if (tok.rfind("--", 0) == 0) {
      for (const std::string& name : opt.get_lnames())
        if (tok.compare(2, name.size(), name) == 0 &&
            (tok.size() == name.size() + 2 || tok[name.size() + 2] == '='))
          return true;
    } else if (tok.size() >= 2 && tok[0] == '-') {
      for (const std::string& name : opt.get_snames())
        if (tok.compare(1, name.size(), name) == 0) return true;
    }
  }
  return false;
}

// CLI11 applies registered config files only on the top-level app, so each
// subcommand's --config is expanded into ordinary long-option tokens before
// parsing. Explicit command-line flags win over file keys.
void expand_config_flag(CLI::App& app, std::vector<std::string>& args) {
  bool found = false;
  std::size_t at = 0;
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw std::runtime_error("--config needs a file path");
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                 args.begin() + static_cast<std::ptrdiff_t>(i + 2));
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
    } else {
      continue;
    }
    found = true;
    at = i;
    break;
  }
  if (!found) return;
  for (const std::string& tok : args)
    if (tok == "--config" || tok.rfind("--config=", 0) == 0)
      throw std::runtime_error("--config given twice");
  const CLI::App* sub = args.empty() ? nullptr : app.get_subcommand_no_throw(args[0]);
  if (sub == nullptr) throw std::runtime_error("--config follows a subcommand");

  std::vector<std::string> injected;
  for (const auto& [key, val] : read_flat_config(path)) {
    if (key == "config") throw std::runtime_error(path + ": config files cannot nest");
    const CLI::Option* opt = sub->get_option_no_throw("--" + key);
    if (opt == nullptr)
      throw std::runtime_error(path + ": unknown key '" + key + "' for subcommand '" + args[0] +
                               "'");
    if (option_on_command_line(*opt, args)) continue;
    injected.push_back("--" + key + "=" + val);
  }
  at = std::min(std::max<std::size_t>(at, 1), args.size());
  args.insert(args.begin() + static_cast<std::ptrdiff_t>(at), injected.begin(), injected.end());
}

struct RunFlags {
  std::string algo = "proxsvrg+";
  ProblemFlags problem;
  std::size_t b = 1;
  std::string batch = "n";
  std::size_t m = 0;
  double eta = 0.0;
  std::size_t epochs = 10;
  std::uint64_t seed = 0;
  double eps_target = 0.0;
  std::size_t stride = 0;
  double metric_eta = 0.0;
  std::string replacement = "with";
  bool last_iterate = false;
  std::string out = "-";
};

void add_run_flags(CLI::App& cmd, RunFlags& rf, bool with_algo) {
  if (with_algo)
    cmd.add_option("--algo", rf.algo, "proxsvrg+, proxsvrg, proxsgd, or proxgd")
        ->capture_default_str();
  add_problem_flags(cmd, rf.problem);
  cmd.add_option("--b", rf.b, "Minibatch size")->capture_default_str();
  cmd.add_option("--B", rf.batch, "Snapshot batch: integer, 'n', or 'n/<k>'")
      ->capture_default_str();
  cmd.add_option("--m", rf.m, "Epoch length; 0 = per-algorithm default")->capture_default_str();
  cmd.add_option("--eta", rf.eta, "Step size; 0 = per-algorithm default")->capture_default_str();
  cmd.add_option("--epochs", rf.epochs, "Number of epochs")->capture_default_str();
  cmd.add_option("--eps-target", rf.eps_target,
                 "Stop when the squared gradient mapping at the epoch point drops below this");
  cmd.add_option("--stride", rf.stride, "Trace rows every this many inner iterations; 0 = auto")
      ->capture_default_str();
  cmd.add_option("--metric-eta", rf.metric_eta,
                 "Step size inside the reported gradient mapping; 0 = the run's own step");
  cmd.add_option("--replacement", rf.replacement, "Index sampling: with or without replacement")
      ->check(CLI::IsMember({"with", "without"}))
      ->capture_default_str();
  cmd.add_flag("--last-iterate", rf.last_iterate,
               "Output the final epoch point instead of a uniform draw");
  cmd.add_option("--out,-o", rf.out, "Output CSV path; - for stdout")->capture_default_str();
}

OptimizerConfig config_from(const RunFlags& rf, std::size_t n, std::uint64_t seed) {
  OptimizerConfig cfg;
  cfg.batch = parse_batch(rf.batch, n);
  cfg.minibatch = rf.b;
  cfg.epoch_length = rf.m;
  cfg.eta = rf.eta;
  cfg.epochs = rf.epochs;
  cfg.output_mode = rf.last_iterate ? OutputMode::LastIterate : OutputMode::UniformIterate;
  cfg.seed = seed;
  if (rf.eps_target > 0.0) cfg.eps_target = rf.eps_target;
  cfg.replacement =
      rf.replacement == "without" ? Replacement::WithoutReplacement : Replacement::WithReplacement;
  cfg.trace_stride = rf.stride;
  cfg.metric_eta = rf.metric_eta;
  return cfg;
}

RunMeta meta_from(Algo kind, const FiniteSumProblem& p, const OptimizerConfig& cfg,
                  const RunResult& res) {
  RunMeta meta;
  meta.algo = algo_name(kind);
  meta.seed = cfg.seed;
  meta.n = p.num_components();
  meta.d = p.dim();
  meta.batch = res.batch;
  meta.minibatch = cfg.minibatch;
  meta.epoch_length = res.epoch_length;
  meta.eta = res.eta;
  return meta;
}

// The method's formal return value is the selected output point, which the
// trace rows do not contain; report its metrics beside the CSV.
void report_output_point(const FiniteSumProblem& p, const RunResult& res, const RunFlags& rf,
                         const std::string& label) {
  const double metric_eta = rf.metric_eta > 0.0 ? rf.metric_eta : res.eta;
  Vec grad(p.dim());
  p.full_gradient(res.output, grad);
  const Vec mapped = gradient_mapping(res.output, grad, metric_eta, p.h());
  std::cerr << "note: " << label << "output point ("
            << (rf.last_iterate ? "last iterate" : "uniform draw")
            << "): objective=" << format_double(p.objective(res.output))
            << " grad_map_sq=" << format_double(norm_sq(mapped)) << '\n';
}

int cmd_run(const RunFlags& rf) {
  const auto kind = parse_algo(rf.algo);
  if (!kind) {
    std::cerr << "error: unknown algorithm '" << rf.algo << "'\n";
    return kExitFailure;
  }
  const auto problem = build_problem(rf.problem);
  const OptimizerConfig cfg = config_from(rf, problem->num_components(), rf.seed);
  const Vec x0 = default_start(*problem);
  const RunResult res = run_algorithm(*kind, *problem, x0, cfg);

  OutputSink sink(rf.out);
  write_trace_csv(sink.stream(), meta_from(*kind, *problem, cfg, res), res.trace);
  if (!sink.flush_ok()) {
    std::cerr << "error: write failed\n";
    return kExitFailure;
  }
  if (res.aborted) {
    std::cerr << "error: run diverged in epoch " << res.abort_epoch << '\n';
    return kExitFailure;
  }
  report_output_point(*problem, res, rf, "");
  return kExitOk;
}

struct CompareFlags {
  RunFlags base;
  std::vector<std::string> algos = {"proxgd", "proxsgd", "proxsvrg", "proxsvrg+"};
  std::vector<std::uint64_t> seeds = {0, 1, 2};
  std::uint64_t sfo_budget = 0;
};

// Epochs that spend roughly the given SFO budget under each algorithm's
// accounting: snapshot cost plus m inner steps of b (or n for full-gradient
// steps).
std::size_t epochs_for_budget(Algo kind, std::uint64_t budget, std::size_t n, std::size_t b,
                              std::size_t m, std::size_t batch) {
  std::uint64_t per_epoch = 0;
  switch (kind) {
    case Algo::ProxGd:
      per_epoch = n;
      break;
    case Algo::ProxSgd:
      per_epoch = static_cast<std::uint64_t>(m) * b;
      break;
    case Algo::ProxSvrg:
      per_epoch = n + static_cast<std::uint64_t>(m) * b;
      break;
    case Algo::ProxSvrgPlus:
      per_epoch = batch + static_cast<std::uint64_t>(m) * b;
      break;
  }
  if (per_epoch == 0) per_epoch = 1;
  return std::max<std::uint64_t>(1, budget / per_epoch);
}

int cmd_compare(const CompareFlags& cf) {
  if (cf.algos.size() < 2) {
    std::cerr << "error: compare needs at least two algorithms\n";
    return kExitFailure;
  }
  std::vector<Algo> kinds;
  for (const std::string& name : cf.algos) {
    const auto kind = parse_algo(name);
    if (!kind) {
      std::cerr << "error: unknown algorithm '" << name << "'\n";
      return kExitFailure;
    }
    kinds.push_back(*kind);
  }
  const auto problem = build_problem(cf.base.problem);
  const std::size_t n = problem->num_components();
  const Vec x0 = default_start(*problem);

  OutputSink sink(cf.base.out);
  sink.stream() << kTraceHeader << '\n';
  bool diverged = false;
  for (const Algo kind : kinds) {
    for (const std::uint64_t seed : cf.seeds) {
      OptimizerConfig cfg = config_from(cf.base, n, seed);
      if (cf.sfo_budget > 0) {
        const std::size_t b = std::max<std::size_t>(1, cfg.minibatch);
        const std::size_t m =
            cfg.epoch_length == 0 ? default_epoch_length(kind, b, n) : cfg.epoch_length;
        cfg.epochs = epochs_for_budget(kind, cf.sfo_budget, n, b, m, cfg.batch);
      }
      const RunResult res = run_algorithm(kind, *problem, x0, cfg);
      diverged = diverged || res.aborted;
      std::ostringstream block;
      write_trace_csv(block, meta_from(kind, *problem, cfg, res), res.trace);
      const std::string text = block.str();
      sink.stream() << text.substr(text.find('\n') + 1);
      if (!res.aborted)
        report_output_point(*problem, res, cf.base,
                            std::string(algo_name(kind)) + " seed " + std::to_string(seed) + " ");
    }
  }
  if (!sink.flush_ok()) {
    std::cerr << "error: write failed\n";
    return kExitFailure;
  }
  if (diverged) {
    std::cerr << "error: at least one run diverged\n";
    return kExitFailure;
  }
  return kExitOk;
}

struct ComplexityFlags {
  std::size_t n = 10000;
  double eps = 0.01;
  double L = 1.0;
  double delta = 1.0;
  double sigma = 0.0;
  double mu = 0.0;
  bool pl = false;
  bool online = false;
  std::size_t b_min = 1;
  std::size_t b_max = 0;
  std::size_t points = 25;
  std::string out = "-";
};

int cmd_complexity(const ComplexityFlags& xf) {
  BoundQuery q;
  q.n = xf.n;
  q.eps = xf.eps;
  q.L = xf.L;
  q.delta_phi = xf.delta;
  if (xf.sigma > 0.0) q.sigma = xf.sigma;
  if (xf.mu > 0.0) q.mu = xf.mu;
  const Regime regime = xf.online ? Regime::Online : Regime::FiniteSum;

  const std::size_t b_max = xf.b_max == 0 ? xf.n : xf.b_max;
  if (xf.b_min == 0 || xf.b_min > b_max) {
    std::cerr << "error: empty minibatch sweep range\n";
    return kExitFailure;
  }

  // Log-spaced integer grid plus the scanned optimum so its marker always
  // appears in the sweep.
  std::set<std::size_t> grid;
  const double lo = std::log(static_cast<double>(xf.b_min));
  const double hi = std::log(static_cast<double>(b_max));
  const std::size_t pts = std::max<std::size_t>(2, xf.points);
  for (std::size_t i = 0; i < pts; ++i) {
    const double f = static_cast<double>(i) / static_cast<double>(pts - 1);
    const auto bval = static_cast<std::size_t>(std::llround(std::exp(lo + f * (hi - lo))));
    grid.insert(std::clamp<std::size_t>(bval, xf.b_min, b_max));
  }
  q.b = 1;
  const MinibatchChoice choice = optimal_minibatch(q, regime);
  if (choice.b_star >= xf.b_min && choice.b_star <= b_max) grid.insert(choice.b_star);

  OutputSink sink(xf.out);
  sink.stream() << "b,algo,sfo,po,condition,asymptotic,optimal\n";
  for (const std::size_t b : grid) {
    q.b = b;
    for (const ComparisonRow& row : comparison_rows(q, xf.pl)) {
      const bool star = row.algo.rfind("proxsvrg+", 0) == 0 && b == choice.b_star;
      sink.stream() << b << ',' << row.algo << ',' << format_double(row.sfo) << ','
                    << (row.po_defined ? format_double(row.po) : std::string("na")) << ','
                    << (row.condition.empty() ? "-" : row.condition) << ','
                    << (row.asymptotic ? 1 : 0) << ',' << (star ? 1 : 0) << '\n';
    }
  }
  if (!sink.flush_ok()) {
    std::cerr << "error: write failed\n";
    return kExitFailure;
  }
  return kExitOk;
}

struct ValidateFlags {
  std::string suite = "all";
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  std::string out = "-";
};

int cmd_validate(const ValidateFlags& vf) {
  std::vector<InequalityReport> rows;
  if (vf.suite == "prox")
    rows = run_prox_suite(vf.trials, vf.seed);
  else if (vf.suite == "lemmas")
    rows = run_lemma_suite(vf.trials, vf.seed);
  else if (vf.suite == "variance")
    rows = run_variance_suite(vf.trials, vf.seed);
  else if (vf.suite == "pl")
    rows = run_pl_suite(vf.trials, vf.seed);
  else
    rows = run_all_suites(vf.trials, vf.seed);

  OutputSink sink(vf.out);
  write_report_csv(sink.stream(), rows);
  if (!sink.flush_ok()) {
    std::cerr << "error: write failed\n";
    return kExitFailure;
  }
  std::size_t bad = 0;
  for (const InequalityReport& r : rows)
    if (r.asserted) bad += r.violations;
  if (bad > 0) {
    std::cerr << "error: " << bad << " asserted inequality violations\n";
    return kExitViolation;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variance-reduced proximal optimization benchmark harness"};
  if (argc > 0) app.name(argv[0]);
  app.require_subcommand(1);

  RunFlags rf;
  CLI::App* run = app.add_subcommand("run", "One optimization run, trace CSV out");
  add_run_flags(*run, rf, true);
  run->add_option("--seed", rf.seed, "Run seed")->capture_default_str();
  run->add_option("--config", "Apply options from a key=value file; explicit flags win");

  CompareFlags cf;
  CLI::App* compare =
      app.add_subcommand("compare", "Several algorithms on one problem, shared start");
  add_run_flags(*compare, cf.base, false);
  compare->add_option("--algos", cf.algos, "Comma-separated algorithm list")
      ->delimiter(',')
      ->capture_default_str();
  compare->add_option("--seeds", cf.seeds, "Comma-separated seed list")
      ->delimiter(',')
      ->capture_default_str();
  compare->add_option("--sfo-budget", cf.sfo_budget,
                      "Derive per-algorithm epoch counts from this shared SFO budget");
  compare->add_option("--config", "Apply options from a key=value file; explicit flags win");

  ComplexityFlags xf;
  CLI::App* complexity = app.add_subcommand("complexity", "Oracle bound sweep over minibatch sizes");
  complexity->add_option("--n", xf.n, "Component count")->capture_default_str();
  complexity->add_option("--eps", xf.eps, "Accuracy target")->capture_default_str();
  complexity->add_option("--L", xf.L, "Smoothness constant")->capture_default_str();
  complexity->add_option("--delta", xf.delta, "Initial objective gap")->capture_default_str();
  complexity->add_option("--sigma", xf.sigma, "Component gradient variance bound (enables online rows)");
  complexity->add_option("--mu", xf.mu, "Curvature constant for the linear-rate rows");
  complexity->add_flag("--pl", xf.pl, "Emit linear-rate rows (requires --mu)");
  complexity->add_flag("--online", xf.online, "Subsampled snapshot regime (requires --sigma)");
  complexity->add_option("--b-min", xf.b_min, "Sweep start")->capture_default_str();
  complexity->add_option("--b-max", xf.b_max, "Sweep end; 0 = n")->capture_default_str();
  complexity->add_option("--points", xf.points, "Grid size")->capture_default_str();
  complexity->add_option("--out,-o", xf.out, "Output CSV path; - for stdout")
      ->capture_default_str();
  complexity->add_option("--config", "Apply options from a key=value file; explicit flags win");

  ValidateFlags vf;
  CLI::App* validate = app.add_subcommand("validate", "Inequality property suites, report CSV out");
  validate->add_option("--suite", vf.suite, "prox, lemmas, variance, pl, or all")
      ->check(CLI::IsMember({"prox", "lemmas", "variance", "pl", "all"}))
      ->capture_default_str();
  validate->add_option("--trials", vf.trials,
                       "Instances per check (Monte Carlo draws for the variance suite)")
      ->capture_default_str();
  validate->add_option("--seed", vf.seed, "Suite seed")->capture_default_str();
  validate->add_option("--out,-o", vf.out, "Output CSV path; - for stdout")
      ->capture_default_str();
  validate->add_option("--config", "Apply options from a key=value file; explicit flags win");

  std::vector<std::string> args(argv + (argc > 0 ? 1 : 0), argv + argc);
  try {
    expand_config_flag(app, args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  std::reverse(args.begin(), args.end());
  try {
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitFailure;
  }

  try {
    if (run->parsed()) return cmd_run(rf);
    if (compare->parsed()) return cmd_compare(cf);
    if (complexity->parsed()) return cmd_complexity(xf);
    if (validate->parsed()) return cmd_validate(vf);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}
