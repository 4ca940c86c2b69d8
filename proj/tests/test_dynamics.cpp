#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "sentsim/analysis.hpp"
#include "sentsim/dynamics.hpp"

using namespace sentsim;

namespace {

Matrix seeded_grid(int n, std::uint64_t seed) {
  RngStream rng(seed);
  return gen_initial_grid(n, rng);
}

OffsetWeights seeded_offsets(int n, std::uint64_t seed, bool symmetrize = false) {
  RngStream rng(seed);
  const ExtendedKernel k = gen_kernel(n, n - 1, 1.0, 1.7, rng);
  return kernel_offsets(k, symmetrize);
}

}  // namespace

TEST_CASE("reaction values") {
  CHECK(reaction(0.0) == 0.0);
  CHECK(reaction(1.0) == 0.0);
  CHECK(reaction(-1.0) == 0.0);
  CHECK(reaction(0.5) == doctest::Approx(-0.375).epsilon(1e-15));
}

TEST_CASE("potential values") {
  CHECK(potential(1.0) == 0.0);
  CHECK(potential(-1.0) == 0.0);
  CHECK(potential(0.0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(potential(2.0) == doctest::Approx(2.25).epsilon(1e-15));
}

TEST_CASE("nonlocal term vanishes on constant grids") {
  const OffsetWeights w = seeded_offsets(6, 5);
  for (double c : {0.0, 0.7, -1.0}) {
    const Matrix g(6, 6, c);
    const Matrix out = nonlocal_term(g, w);
    for (int i = 0; i < 6; ++i) {
      for (int x = 0; x < 6; ++x) CHECK(out(i, x) == 0.0);
    }
  }
}

TEST_CASE("nonlocal term on a two-point row") {
  OffsetWeights w(2);
  w.at(1) = 1.0;
  w.at(-1) = 1.0;
  Matrix g(1, 2);
  g(0, 0) = 0.25;  // a
  g(0, 1) = -0.5;  // b
  const Matrix out = nonlocal_term(g, w);
  CHECK(out(0, 0) == doctest::Approx(-0.75).epsilon(1e-15));  // b - a
  CHECK(out(0, 1) == doctest::Approx(0.75).epsilon(1e-15));   // a - b
}

TEST_CASE("nonlocal term matches the quadruple-loop oracle") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const int n = 4;
    RngStream rng(seed);
    const ExtendedKernel k = gen_kernel(n, n - 1, 0.0, 1.0, rng);
    const Matrix g = gen_initial_grid(n, rng);
    const OffsetWeights w = kernel_offsets(k, false);
    const Matrix got = nonlocal_term(g, w);
    const Matrix expect = test::nonlocal_oracle(g, k);
    for (int i = 0; i < n; ++i) {
      for (int x = 0; x < n; ++x) {
        CHECK(std::fabs(got(i, x) - expect(i, x)) <= 1e-12);
      }
    }
  }
}

TEST_CASE("stable_dt") {
  CHECK(stable_dt(OffsetWeights::zero(4)) == 0.45);

  OffsetWeights w(2);
  w.at(1) = 3.0;
  w.at(-1) = 4.0;
  CHECK(w.sum() == 7.0);
  CHECK(stable_dt(w) == 0.9 / 9.0);
  CHECK(stable_dt(w) == doctest::Approx(0.1).epsilon(1e-15));

  const OffsetWeights gen = seeded_offsets(16, 21);
  CHECK(stable_dt(gen) > 0.0);
  CHECK(stable_dt(gen) < 0.45);
}

TEST_CASE("euler step: scalar example") {
  Matrix g(1, 1, 0.5);
  const Matrix out = euler_step(g, OffsetWeights::zero(1), 0.1, SignConvention::Diffusive);
  CHECK(out(0, 0) == doctest::Approx(0.5375).epsilon(1e-15));
}

TEST_CASE("euler step: constant +-1 grids are exact fixed points") {
  const OffsetWeights w = seeded_offsets(8, 2);
  for (double c : {1.0, -1.0}) {
    const Matrix g(8, 8, c);
    for (SignConvention sign : {SignConvention::Diffusive, SignConvention::PaperLiteral}) {
      for (double dt : {0.001, 0.1, 0.45}) {
        const Matrix out = euler_step(g, w, dt, sign);
        CHECK(bitwise_equal(out, g));
      }
    }
  }
}

TEST_CASE("euler step: symmetric zero row is unchanged") {
  OffsetWeights w(2);
  w.at(1) = 1.0;
  w.at(-1) = 1.0;
  const Matrix g(1, 2, 0.0);
  const Matrix out = euler_step(g, w, 0.1, SignConvention::Diffusive);
  CHECK(bitwise_equal(out, g));
}

TEST_CASE("euler step: divergence guard") {
  Matrix g(1, 1, 3.0);
  // 3 + 1 * (0 - f(3)) = 3 - 24 = -21, outside the +-10 band.
  CHECK_THROWS_AS(euler_step(g, OffsetWeights::zero(1), 1.0, SignConvention::Diffusive),
                  DivergenceError);
}

TEST_CASE("row equivariance: permuting rows commutes with stepping") {
  const OffsetWeights w = seeded_offsets(6, 31);
  const Matrix g = seeded_grid(6, 77);
  const double dt = stable_dt(w);
  const std::vector<int> perm = {4, 2, 0, 5, 1, 3};

  Matrix permuted(6, 6);
  for (int i = 0; i < 6; ++i) {
    for (int x = 0; x < 6; ++x) permuted(i, x) = g(perm[i], x);
  }

  const Matrix step_then_permute = [&] {
    const Matrix s = euler_step(g, w, dt, SignConvention::Diffusive);
    Matrix r(6, 6);
    for (int i = 0; i < 6; ++i) {
      for (int x = 0; x < 6; ++x) r(i, x) = s(perm[i], x);
    }
    return r;
  }();
  const Matrix permute_then_step = euler_step(permuted, w, dt, SignConvention::Diffusive);
  CHECK(bitwise_equal(step_then_permute, permute_then_step));
}

TEST_CASE("reaction-only flow never climbs the potential") {
  const OffsetWeights w = OffsetWeights::zero(1);
  for (int k = 0; k <= 400; ++k) {
    const double p = -2.0 + 4.0 * k / 400.0;
    Matrix g(1, 1, p);
    const Matrix out = euler_step(g, w, 0.01, SignConvention::Diffusive);
    CHECK(potential(out(0, 0)) <= potential(p));
  }
}

TEST_CASE("energy descends along the symmetrized diffusive flow") {
  const OffsetWeights w = seeded_offsets(16, 4, /*symmetrize=*/true);
  Matrix g = seeded_grid(16, 5);
  const double dt = stable_dt(w);
  Matrix next(16, 16);
  double prev = energy(g, w);
  for (int s = 0; s < 1000; ++s) {
    step_once(g, w, dt, SignConvention::Diffusive, next);
    std::swap(g, next);
    const double e = energy(g, w);
    CHECK(e <= prev + 1e-12);
    prev = e;
  }
}

TEST_CASE("iterates stay bounded at the stability step") {
  const OffsetWeights w = seeded_offsets(16, 6);
  Matrix g = seeded_grid(16, 7);
  const double dt = stable_dt(w);
  Matrix next(16, 16);
  double max_abs = 0.0;
  for (int s = 0; s < 10000; ++s) {
    const StepStats st = step_once(g, w, dt, SignConvention::Diffusive, next);
    std::swap(g, next);
    max_abs = std::max(max_abs, st.max_abs);
    REQUIRE(st.finite);
  }
  CHECK(max_abs <= 1.5);
}

TEST_CASE("run_to_equilibrium: fixed point converges at iteration 1") {
  const OffsetWeights w = seeded_offsets(8, 13);
  const Matrix g(8, 8, 1.0);
  SimConfig cfg;
  cfg.n = 8;
  const RunResult rr = run_to_equilibrium(g, w, cfg);
  CHECK(rr.converged);
  CHECK(rr.iterations == 1);
  CHECK(bitwise_equal(rr.final_grid, g));
  CHECK(rr.initial_sum == 64.0);
  CHECK(rr.final_sum == 64.0);
}

TEST_CASE("run_to_equilibrium: scalar well against the ODE oracle") {
  Matrix g(1, 1, 0.5);
  SimConfig cfg;
  cfg.n = 1;
  cfg.dt = 0.1;
  cfg.eps = 1e-3;
  cfg.snapshot_every = 0;
  const RunResult rr = run_to_equilibrium(g, OffsetWeights::zero(1), cfg);
  CHECK(rr.converged);
  CHECK(std::fabs(rr.final_grid(0, 0) - 1.0) < 1e-2);

  long oracle_iters = 0;
  const double oracle = test::scalar_ode_limit(0.5, 0.1, 1e-3, 100000, &oracle_iters);
  CHECK(rr.final_grid(0, 0) == oracle);
  CHECK(rr.iterations == oracle_iters);
}

TEST_CASE("run_to_equilibrium: seeded 16x16 golden regression") {
  // Golden run, frozen: kernel seed 100, init seed 200, eps 1e-6.
  const OffsetWeights w = seeded_offsets(16, 100);
  const Matrix g = seeded_grid(16, 200);
  SimConfig cfg;
  cfg.eps = 1e-6;
  cfg.snapshot_every = 0;
  const RunResult rr = run_to_equilibrium(g, w, cfg);
  CHECK(rr.converged);
  CHECK(rr.iterations == 37859);
  CHECK(rr.final_sum == doctest::Approx(63.94).epsilon(1e-3));
}

TEST_CASE("run_to_equilibrium: non-convergence is reported, not thrown") {
  const OffsetWeights w = seeded_offsets(8, 3);
  const Matrix g = seeded_grid(8, 9);
  SimConfig cfg;
  cfg.n = 8;
  cfg.max_iters = 3;
  cfg.eps = 1e-12;
  cfg.snapshot_every = 0;
  const RunResult rr = run_to_equilibrium(g, w, cfg);
  CHECK_FALSE(rr.converged);
  CHECK(rr.iterations == 3);
}

TEST_CASE("run_to_equilibrium: divergence throws") {
  const OffsetWeights w = seeded_offsets(16, 100);
  const Matrix g = seeded_grid(16, 200);
  SimConfig cfg;
  cfg.sign = SignConvention::PaperLiteral;  // anti-diffusive, blows up at this scale
  cfg.snapshot_every = 0;
  CHECK_THROWS_AS(run_to_equilibrium(g, w, cfg), DivergenceError);
}

TEST_CASE("run_to_equilibrium: snapshot cadence") {
  Matrix g(1, 1, 0.5);
  SimConfig cfg;
  cfg.n = 1;
  cfg.dt = 0.1;
  cfg.eps = 1e-3;
  cfg.snapshot_every = 10;
  const RunResult rr = run_to_equilibrium(g, OffsetWeights::zero(1), cfg);
  REQUIRE(rr.converged);
  REQUIRE(!rr.snapshots.empty());
  for (std::size_t s = 0; s + 1 < rr.snapshots.size(); ++s) {
    CHECK(rr.snapshots[s].iteration == 10 * static_cast<long>(s + 1));
    CHECK(rr.snapshots[s].iteration < rr.snapshots[s + 1].iteration);
  }
  CHECK(rr.snapshots.back().iteration == rr.iterations);
  CHECK(bitwise_equal(rr.snapshots.back().grid, rr.final_grid));

  SimConfig no_snaps = cfg;
  no_snaps.snapshot_every = 0;
  const RunResult rr2 = run_to_equilibrium(g, OffsetWeights::zero(1), no_snaps);
  REQUIRE(rr2.snapshots.size() == 1);
  CHECK(rr2.snapshots.back().iteration == rr2.iterations);
}

TEST_CASE("baseline_no_interaction is the sign map") {
  Matrix g(1, 3);
  g(0, 0) = 0.3;
  g(0, 1) = -0.7;
  g(0, 2) = 0.0;
  const Matrix b = baseline_no_interaction(g);
  CHECK(b(0, 0) == 1.0);
  CHECK(b(0, 1) == -1.0);
  CHECK(b(0, 2) == 0.0);
}

TEST_CASE("baseline agrees with the zero-kernel integration") {
  for (std::uint64_t seed : {14ULL, 15ULL, 16ULL}) {
    RngStream rng(seed);
    Matrix g(8, 8);
    for (int i = 0; i < 8; ++i) {
      for (int x = 0; x < 8; ++x) {
        // keep |entries| in [0.05, 1] so every pixel has a definite basin
        const double u = 2.0 * rng.next_uniform() - 1.0;
        g(i, x) = (u >= 0.0 ? 1.0 : -1.0) * (0.05 + 0.95 * std::fabs(u));
      }
    }
    SimConfig cfg;
    cfg.n = 8;
    cfg.dt = 0.01;
    cfg.snapshot_every = 0;
    const RunResult rr = run_to_equilibrium(g, OffsetWeights::zero(8), cfg);
    REQUIRE(rr.converged);
    const Matrix expected = baseline_no_interaction(g);
    for (int i = 0; i < 8; ++i) {
      for (int x = 0; x < 8; ++x) {
        CHECK(static_cast<double>(sign_of(rr.final_grid(i, x))) == expected(i, x));
      }
    }
  }
}
