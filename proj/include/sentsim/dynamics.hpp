#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "sentsim/config.hpp"
#include "sentsim/kernel.hpp"
#include "sentsim/matrix.hpp"

namespace sentsim {

// An iterate left the physically meaningful band (|p| > 10) or went
// non-finite; the time step is too large for the kernel.
struct DivergenceError : std::runtime_error {
  explicit DivergenceError(const std::string& what) : std::runtime_error(what) {}
};

// Derivative of the double-well potential.
inline double reaction(double p) { return p * p * p - p; }

// The double-well itself, minima at +-1.
inline double potential(double p) {
  const double q = p * p - 1.0;
  return 0.25 * q * q;
}

// Stability-bounded explicit step: 0.9 / (S + 2), S = sum of all offset
// weights. S bounds the diagonal dominance of the nonlocal operator and 2
// bounds |f'(p)| on [-1, 1].
double stable_dt(const OffsetWeights& w);

// out[i][x] = sum_y w(x - y) * (g[i][y] - g[i][x]), y ascending. Rows are
// independent; the parallel kernel splits work by row and is bitwise equal
// to the serial reference for any thread count.
void nonlocal_term(const Matrix& g, const OffsetWeights& w, Matrix& out);
void nonlocal_term_serial(const Matrix& g, const OffsetWeights& w, Matrix& out);
Matrix nonlocal_term(const Matrix& g, const OffsetWeights& w);

struct StepStats {
  double max_abs = 0.0;   // largest |entry| of the new state
  double max_diff = 0.0;  // largest |update| against the previous state
  bool finite = true;
};

// One forward-Euler update into next:
//   next[i][x] = g[i][x] + dt * (sgn * L[i][x] - f(g[i][x]))
// with sgn = +1 (Diffusive) or -1 (PaperLiteral). Does not throw; callers
// check the stats. step_once is the OpenMP kernel, step_once_serial the
// reference twin.
StepStats step_once(const Matrix& g, const OffsetWeights& w, double dt,
                    SignConvention sign, Matrix& next);
StepStats step_once_serial(const Matrix& g, const OffsetWeights& w, double dt,
                           SignConvention sign, Matrix& next);

// Single update with the divergence guard applied.
Matrix euler_step(const Matrix& g, const OffsetWeights& w, double dt, SignConvention sign);

struct Snapshot {
  long iteration = 0;
  Matrix grid;
};

struct RunResult {
  Matrix final_grid;
  long iterations = 0;
  bool converged = false;
  std::vector<Snapshot> snapshots;  // strictly increasing iterations; last is the final state
  double initial_sum = 0.0;
  double final_sum = 0.0;
};

// Iterates euler steps until the max-abs update drops below cfg.eps
// (converged) or cfg.max_iters is reached (not converged). Divergence
// throws. dt comes from cfg.dt, or stable_dt(w) when unset. Snapshots are
// recorded every cfg.snapshot_every iterations (0 disables) and the final
// state is always appended.
RunResult run_to_equilibrium(const Matrix& grid0, const OffsetWeights& w, const SimConfig& cfg);

// Elementwise sign map {-1, 0, +1}: the analytic end state of the
// interaction-free flow p' = p - p^3.
Matrix baseline_no_interaction(const Matrix& grid0);

// Caps the OpenMP thread pool; ignored when built without OpenMP. Never
// changes results, only wall time.
void set_thread_count(int threads);
int max_thread_count();

}  // namespace sentsim
