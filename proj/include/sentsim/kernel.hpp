#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sentsim/matrix.hpp"
#include "sentsim/rng.hpp"

namespace sentsim {

// t x t symmetric nonnegative interaction array with zero diagonal. The
// n x n surveyed block sits at [block_start, block_start + n) on both axes;
// the remaining rows/columns are the outside individuals that make offset
// lookups up to +-(n-1) possible.
struct ExtendedKernel {
  int t = 0;
  int n = 0;
  int block_start = 0;
  Matrix values;
};

// Effective kernel W(d) over offsets d in {-(n-1), ..., n-1}: the extended
// kernel reduced by summing, for every surveyed column, the entry d steps
// from that column's diagonal anchor (wrapping modulo t). W(0) = 0 because
// it sums diagonal entries.
class OffsetWeights {
 public:
  OffsetWeights() = default;

  explicit OffsetWeights(int n) : n_(n) {
    if (n < 1) throw std::invalid_argument("OffsetWeights: n must be >= 1");
    w_.assign(2 * static_cast<std::size_t>(n) - 1, 0.0);
  }

  static OffsetWeights zero(int n) { return OffsetWeights(n); }

  int n() const { return n_; }

  double at(int d) const { return w_[static_cast<std::size_t>(d + n_ - 1)]; }
  double& at(int d) { return w_[static_cast<std::size_t>(d + n_ - 1)]; }

  // Sum over all offsets, ascending d.
  double sum() const {
    double s = 0.0;
    for (double v : w_) s += v;
    return s;
  }

 private:
  int n_ = 0;
  std::vector<double> w_;
};

// n x n grid of independent uniforms on [-1, 1], filled row-major.
Matrix gen_initial_grid(int n, RngStream& rng);

// Extended kernel of size t = n + extra: lognormal draws exp(mu + sigma * Z)
// for the strictly-upper triangle in row-major order, mirrored below, zero
// diagonal. The surveyed block is centered: block_start = (t - n) / 2.
ExtendedKernel gen_kernel(int n, int extra, double mu, double sigma, RngStream& rng);

// Reduces the extended kernel to offset weights. With symmetrize, returns
// (W(d) + W(-d)) / 2 instead of the raw anchored sums.
OffsetWeights kernel_offsets(const ExtendedKernel& kernel, bool symmetrize);

// Checks symmetry, zero diagonal, nonnegativity and finiteness; returns a
// description of the first offending entry (row-major scan) or nullopt.
std::optional<std::string> kernel_problem(const Matrix& values);

// Wraps a raw t x t array loaded from disk into an ExtendedKernel for a
// surveyed block of size n (centered placement). Throws on t < n or when
// kernel_problem reports a violation.
ExtendedKernel wrap_kernel(Matrix values, int n);

}  // namespace sentsim
