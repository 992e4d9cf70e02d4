// Micro-benchmark comparing the pseudo-spectral kernels against the serial
// reference implementations, and a parallel ensemble against the same
// ensemble on one worker (outputs must agree bitwise).

#include <chrono>
#include <cstdio>

#include "scns/ensemble.hpp"
#include "scns/operators.hpp"

using namespace scns;
using clock_type = std::chrono::steady_clock;

namespace {

template <typename F>
double time_us(F&& f, int reps) {
  const auto t0 = clock_type::now();
  for (int i = 0; i < reps; ++i) f();
  const auto t1 = clock_type::now();
  return std::chrono::duration<double, std::micro>(t1 - t0).count() / reps;
}

double rel_dist(const SpectralVelocity& a, const SpectralVelocity& b) {
  return norms(sub(a, b)).h / norms(b).h;
}

}  // namespace

int main() {
  std::printf("nonlinear term: FFT pipeline vs direct convolution sum\n");
  std::printf("%6s %10s %14s %16s %12s\n", "n_max", "modes", "fft (us)",
              "direct (us)", "rel diff");
  for (int n : {4, 6, 8, 12}) {
    auto space = build_space(n);
    auto u = random_field(7, space, 3.0);
    volatile double sink = 0.0;
    const int reps = n <= 6 ? 200 : 50;
    const double t_fft = time_us([&] { sink += norms(nonlinear(u)).h; }, reps);
    const double t_dir =
        time_us([&] { sink += norms(nonlinear_direct(u)).h; }, n <= 6 ? 50 : 5);
    std::printf("%6d %10zu %14.1f %16.1f %12.2e\n", n, space->size(), t_fft,
                t_dir, rel_dist(nonlinear(u), nonlinear_direct(u)));
  }

  std::printf("\nensemble: 1 worker vs maximum workers (bitwise-compared)\n");
  SimConfig cfg;
  cfg.n_max = 8;
  cfg.dt = 1e-3;
  cfg.t_end = 0.05;
  cfg.seed = 5;
  cfg.noise = NoiseModel({{0.6, 0.0}, {0.0, 0.6}});
  auto u0 = random_field(9, build_space(cfg.n_max), 3.0);
  const double p_list[] = {1.0, 2.0};
  const int n_paths = 16;

  EnsembleStats serial, parallel;
  const double t_serial =
      time_us([&] { serial = run_ensemble(cfg, u0, n_paths, p_list, 1); }, 1);
  const double t_parallel =
      time_us([&] { parallel = run_ensemble(cfg, u0, n_paths, p_list, 0); }, 1);
  const bool identical = serial.mean_v_sq == parallel.mean_v_sq &&
                         serial.se_v_sq == parallel.se_v_sq &&
                         serial.mean_int_da == parallel.mean_int_da;
  std::printf("%d paths: serial %.0f us, parallel %.0f us, speedup %.2fx, "
              "aggregates %s\n",
              n_paths, t_serial, t_parallel, t_serial / t_parallel,
              identical ? "identical" : "DIFFER");
  return identical ? 0 : 1;
}
