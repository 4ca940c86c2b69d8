#include "sentsim/dynamics.hpp"

#include <cmath>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sentsim {

namespace {

// Per-row routines shared by the OpenMP kernels and their serial twins, so
// both compile to the same floating-point operation sequence per element.

void nonlocal_row(const double* g, int n, const OffsetWeights& w, double* out) {
  for (int x = 0; x < n; ++x) {
    const double gx = g[x];
    double acc = 0.0;
    for (int y = 0; y < n; ++y) {
      acc += w.at(x - y) * (g[y] - gx);
    }
    out[x] = acc;
  }
}

struct RowStats {
  double max_abs = 0.0;
  double max_diff = 0.0;
  int finite = 1;
};

RowStats step_row(const double* g, int n, const OffsetWeights& w, double dt,
                  double sgn, double* next) {
  RowStats st;
  for (int x = 0; x < n; ++x) {
    const double gx = g[x];
    double acc = 0.0;
    for (int y = 0; y < n; ++y) {
      acc += w.at(x - y) * (g[y] - gx);
    }
    const double v = gx + dt * (sgn * acc - reaction(gx));
    next[x] = v;
    const double av = std::fabs(v);
    const double ad = std::fabs(v - gx);
    if (av > st.max_abs) st.max_abs = av;    // NaN compares false, caught below
    if (ad > st.max_diff) st.max_diff = ad;
    if (!std::isfinite(v)) st.finite = 0;
  }
  return st;
}

void check_shapes(const Matrix& g, const OffsetWeights& w) {
  if (g.cols() != w.n()) {
    throw std::invalid_argument("grid has " + std::to_string(g.cols()) +
                                " columns but offset weights cover n = " +
                                std::to_string(w.n()));
  }
}

// Below this many elements the per-step parallel region costs more than the
// row work, so small grids take the serial path. Either path computes
// identical bits; this is a speed knob only.
constexpr long kParallelGrainSize = 4096;

bool worth_parallelizing(const Matrix& g) {
  return static_cast<long>(g.rows()) * g.cols() >= kParallelGrainSize;
}

}  // namespace

double stable_dt(const OffsetWeights& w) { return 0.9 / (w.sum() + 2.0); }

void nonlocal_term(const Matrix& g, const OffsetWeights& w, Matrix& out) {
  check_shapes(g, w);
  if (!g.same_shape(out)) out = Matrix(g.rows(), g.cols());
  if (!worth_parallelizing(g)) {
    nonlocal_term_serial(g, w, out);
    return;
  }
  const int rows = g.rows();
  const int n = g.cols();
#pragma omp parallel for schedule(static)
  for (int i = 0; i < rows; ++i) {
    nonlocal_row(g.row(i), n, w, out.row(i));
  }
}

void nonlocal_term_serial(const Matrix& g, const OffsetWeights& w, Matrix& out) {
  check_shapes(g, w);
  if (!g.same_shape(out)) out = Matrix(g.rows(), g.cols());
  for (int i = 0; i < g.rows(); ++i) {
    nonlocal_row(g.row(i), g.cols(), w, out.row(i));
  }
}

Matrix nonlocal_term(const Matrix& g, const OffsetWeights& w) {
  Matrix out(g.rows(), g.cols());
  nonlocal_term(g, w, out);
  return out;
}

StepStats step_once(const Matrix& g, const OffsetWeights& w, double dt,
                    SignConvention sign, Matrix& next) {
  check_shapes(g, w);
  if (!g.same_shape(next)) next = Matrix(g.rows(), g.cols());
  if (!worth_parallelizing(g)) {
    return step_once_serial(g, w, dt, sign, next);
  }
  const double sgn = sign == SignConvention::Diffusive ? 1.0 : -1.0;
  const int rows = g.rows();
  const int n = g.cols();
  double max_abs = 0.0;
  double max_diff = 0.0;
  int finite = 1;
#pragma omp parallel for schedule(static) reduction(max : max_abs, max_diff) \
    reduction(&& : finite)
  for (int i = 0; i < rows; ++i) {
    const RowStats st = step_row(g.row(i), n, w, dt, sgn, next.row(i));
    if (st.max_abs > max_abs) max_abs = st.max_abs;
    if (st.max_diff > max_diff) max_diff = st.max_diff;
    finite = finite && st.finite;
  }
  return StepStats{max_abs, max_diff, finite != 0};
}

StepStats step_once_serial(const Matrix& g, const OffsetWeights& w, double dt,
                           SignConvention sign, Matrix& next) {
  check_shapes(g, w);
  if (!g.same_shape(next)) next = Matrix(g.rows(), g.cols());
  const double sgn = sign == SignConvention::Diffusive ? 1.0 : -1.0;
  double max_abs = 0.0;
  double max_diff = 0.0;
  int finite = 1;
  for (int i = 0; i < g.rows(); ++i) {
    const RowStats st = step_row(g.row(i), g.cols(), w, dt, sgn, next.row(i));
    if (st.max_abs > max_abs) max_abs = st.max_abs;
    if (st.max_diff > max_diff) max_diff = st.max_diff;
    finite = finite && st.finite;
  }
  return StepStats{max_abs, max_diff, finite != 0};
}

Matrix euler_step(const Matrix& g, const OffsetWeights& w, double dt, SignConvention sign) {
  if (!(dt > 0.0)) throw std::invalid_argument("euler_step: dt must be > 0");
  Matrix next(g.rows(), g.cols());
  const StepStats st = step_once(g, w, dt, sign, next);
  if (!st.finite || st.max_abs > 10.0) {
    throw DivergenceError("euler step produced |p| > 10 or a non-finite value; "
                          "use a smaller dt");
  }
  return next;
}

RunResult run_to_equilibrium(const Matrix& grid0, const OffsetWeights& w, const SimConfig& cfg) {
  cfg.validate();
  check_shapes(grid0, w);
  const double dt = cfg.dt ? *cfg.dt : stable_dt(w);
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw std::invalid_argument("run_to_equilibrium: resolved dt is not positive");
  }

  RunResult rr;
  rr.initial_sum = grid_sum(grid0);

  Matrix cur = grid0;
  Matrix next(grid0.rows(), grid0.cols());
  long k = 0;
  for (; k < cfg.max_iters;) {
    const StepStats st = step_once(cur, w, dt, cfg.sign, next);
    ++k;
    if (!st.finite || st.max_abs > 10.0) {
      throw DivergenceError("diverged at iteration " + std::to_string(k) +
                            " (|p| > 10 or non-finite); use a smaller dt");
    }
    std::swap(cur, next);
    if (cfg.snapshot_every > 0 && k % cfg.snapshot_every == 0) {
      rr.snapshots.push_back({k, cur});
    }
    if (st.max_diff < cfg.eps) {
      rr.converged = true;
      break;
    }
  }
  rr.iterations = k;
  rr.final_grid = std::move(cur);
  rr.final_sum = grid_sum(rr.final_grid);
  if (rr.snapshots.empty() || rr.snapshots.back().iteration != rr.iterations) {
    rr.snapshots.push_back({rr.iterations, rr.final_grid});
  }
  return rr;
}

Matrix baseline_no_interaction(const Matrix& grid0) {
  Matrix out(grid0.rows(), grid0.cols());
  for (int i = 0; i < grid0.rows(); ++i) {
    for (int x = 0; x < grid0.cols(); ++x) {
      const double v = grid0(i, x);
      out(i, x) = v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0);
    }
  }
  return out;
}

void set_thread_count(int threads) {
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

int max_thread_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace sentsim
