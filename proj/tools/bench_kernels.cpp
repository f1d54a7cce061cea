#include <chrono>
#include <cstdio>
#include <vector>

#include "CLI11.hpp"
#include "proxvr/dataset.hpp"
#include "proxvr/parallel.hpp"
#include "proxvr/problem.hpp"
#include "proxvr/rng.hpp"
#include "proxvr/vec.hpp"

namespace {

using namespace proxvr;

double now_ms() {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

template <typename Fn>
double time_ms(std::size_t reps, Fn&& fn) {
  fn();  // warm up
  const double t0 = now_ms();
  for (std::size_t r = 0; r < reps; ++r) fn();
  return (now_ms() - t0) / static_cast<double>(reps);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Serial vs OpenMP gradient kernel comparison"};
  std::size_t n = 20000, d = 200, reps = 20, b = 4096;
  app.add_option("--n", n, "Components")->capture_default_str();
  app.add_option("--d", d, "Dimension")->capture_default_str();
  app.add_option("--b", b, "Index subset size")->capture_default_str();
  app.add_option("--reps", reps, "Repetitions per timing")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  const NnPcaProblem p(synthetic_samples(n, d, 7));
  SplitMix64 rng(11);
  Vec x(d);
  for (double& c : x) c = rng.next_gaussian();
  std::vector<std::uint32_t> idx(b);
  for (auto& i : idx) i = static_cast<std::uint32_t>(rng.next_below(n));

  Vec g_serial(d), g_parallel(d), s_serial(d), s_parallel(d);
  double f_serial = 0.0, f_parallel = 0.0;

  set_exec_mode(ExecMode::Serial);
  const double grad_s = time_ms(reps, [&] { p.full_gradient(x, g_serial); });
  const double fval_s = time_ms(reps, [&] { f_serial = p.f_value(x); });
  const double subset_s = time_ms(reps, [&] { p.sum_component_gradients(idx, x, s_serial); });

  set_exec_mode(ExecMode::Parallel);
  const double grad_p = time_ms(reps, [&] { p.full_gradient(x, g_parallel); });
  const double fval_p = time_ms(reps, [&] { f_parallel = p.f_value(x); });
  const double subset_p = time_ms(reps, [&] { p.sum_component_gradients(idx, x, s_parallel); });

  std::printf("kernel comparison on nnpca n=%zu d=%zu (mean of %zu reps)\n", n, d, reps);
  std::printf("%-24s %12s %12s %9s %12s\n", "kernel", "serial ms", "parallel ms", "speedup",
              "max |diff|");
  std::printf("%-24s %12.4f %12.4f %9.2f %12.3e\n", "full_gradient", grad_s, grad_p,
              grad_s / grad_p, max_abs(sub(g_serial, g_parallel)));
  std::printf("%-24s %12.4f %12.4f %9.2f %12.3e\n", "f_value", fval_s, fval_p, fval_s / fval_p,
              std::abs(f_serial - f_parallel));
  std::printf("%-24s %12.4f %12.4f %9.2f %12.3e\n", "sum_component_gradients", subset_s, subset_p,
              subset_s / subset_p, max_abs(sub(s_serial, s_parallel)));
  return 0;
}
