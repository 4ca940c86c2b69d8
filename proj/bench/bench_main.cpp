// Times the OpenMP kernels against their serial reference twins and checks
// the results agree bit for bit while doing so.

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "sentsim/dynamics.hpp"
#include "sentsim/kernel.hpp"
#include "sentsim/matrix.hpp"

using namespace sentsim;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void bench_size(int n, int steps) {
  RngStream rng(2024);
  const ExtendedKernel kernel = gen_kernel(n, n - 1, 1.0, 1.7, rng);
  const OffsetWeights w = kernel_offsets(kernel, false);
  const Matrix g0 = gen_initial_grid(n, rng);
  const double dt = stable_dt(w);

  Matrix cur = g0;
  Matrix next(n, n);
  auto t0 = std::chrono::steady_clock::now();
  for (int s = 0; s < steps; ++s) {
    step_once_serial(cur, w, dt, SignConvention::Diffusive, next);
    std::swap(cur, next);
  }
  const double serial_s = seconds_since(t0);
  const Matrix serial_result = cur;

  cur = g0;
  t0 = std::chrono::steady_clock::now();
  for (int s = 0; s < steps; ++s) {
    step_once(cur, w, dt, SignConvention::Diffusive, next);
    std::swap(cur, next);
  }
  const double parallel_s = seconds_since(t0);

  if (!bitwise_equal(serial_result, cur)) {
    std::fprintf(stderr, "n=%d: serial and parallel results differ!\n", n);
    std::exit(1);
  }

  std::printf("%6d  %8d  %10.1f  %10.1f  %7.2fx\n", n, steps,
              1e6 * serial_s / steps, 1e6 * parallel_s / steps,
              serial_s / parallel_s);
}

}  // namespace

int main(int argc, char** argv) {
  int threads = 0;
  if (argc > 1) threads = std::atoi(argv[1]);
  set_thread_count(threads);
  std::printf("euler step, serial vs OpenMP (%d threads)\n", max_thread_count());
  std::printf("%6s  %8s  %10s  %10s  %8s\n", "n", "steps", "serial us", "omp us", "speedup");
  bench_size(16, 20000);
  bench_size(64, 2000);
  bench_size(256, 100);
  bench_size(512, 25);
  return 0;
}
