#include "sentsim/kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace sentsim {

namespace {

// Mathematical modulus: result in [0, m) for any sign of a.
int wrap_index(int a, int m) {
  int r = a % m;
  return r < 0 ? r + m : r;
}

}  // namespace

Matrix gen_initial_grid(int n, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("gen_initial_grid: n must be >= 1");
  Matrix g(n, n);
  for (int i = 0; i < n; ++i) {
    for (int x = 0; x < n; ++x) {
      g(i, x) = 2.0 * rng.next_uniform() - 1.0;
    }
  }
  return g;
}

ExtendedKernel gen_kernel(int n, int extra, double mu, double sigma, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("gen_kernel: n must be >= 1");
  if (extra < 0) throw std::invalid_argument("gen_kernel: extra must be >= 0");
  if (!(sigma > 0.0)) throw std::invalid_argument("gen_kernel: sigma must be > 0");

  const int t = n + extra;
  ExtendedKernel k;
  k.t = t;
  k.n = n;
  k.block_start = (t - n) / 2;
  k.values = Matrix(t, t, 0.0);
  for (int a = 0; a < t; ++a) {
    for (int b = a + 1; b < t; ++b) {
      const double v = std::exp(mu + sigma * rng.next_normal());
      k.values(a, b) = v;
      k.values(b, a) = v;
    }
  }
  return k;
}

OffsetWeights kernel_offsets(const ExtendedKernel& kernel, bool symmetrize) {
  const int n = kernel.n;
  const int t = kernel.t;
  OffsetWeights w(n);
  for (int d = -(n - 1); d <= n - 1; ++d) {
    double s = 0.0;
    for (int m = 0; m < n; ++m) {
      const int anchor = kernel.block_start + m;
      s += kernel.values(wrap_index(anchor + d, t), anchor);
    }
    w.at(d) = s;
  }
  if (symmetrize) {
    OffsetWeights ws(n);
    for (int d = -(n - 1); d <= n - 1; ++d) {
      ws.at(d) = 0.5 * (w.at(d) + w.at(-d));
    }
    return ws;
  }
  return w;
}

std::optional<std::string> kernel_problem(const Matrix& values) {
  const int t = values.rows();
  if (t != values.cols()) {
    return "kernel is not square: " + std::to_string(values.rows()) + "x" +
           std::to_string(values.cols());
  }
  for (int a = 0; a < t; ++a) {
    for (int b = 0; b < t; ++b) {
      const double v = values(a, b);
      if (!std::isfinite(v)) {
        return "non-finite entry at (" + std::to_string(a) + ", " + std::to_string(b) + ")";
      }
      if (a == b && v != 0.0) {
        return "nonzero diagonal entry at (" + std::to_string(a) + ", " + std::to_string(a) + ")";
      }
      if (v < 0.0) {
        return "negative entry at (" + std::to_string(a) + ", " + std::to_string(b) + ")";
      }
      if (b > a && v != values(b, a)) {
        return "asymmetric entry pair (" + std::to_string(a) + ", " + std::to_string(b) + ")";
      }
    }
  }
  return std::nullopt;
}

ExtendedKernel wrap_kernel(Matrix values, int n) {
  if (n < 1) throw std::invalid_argument("wrap_kernel: n must be >= 1");
  if (auto problem = kernel_problem(values)) {
    throw std::invalid_argument("kernel validation failed: " + *problem);
  }
  const int t = values.rows();
  if (t < n) {
    throw std::invalid_argument("kernel of size " + std::to_string(t) +
                                " cannot hold a surveyed block of size " + std::to_string(n));
  }
  ExtendedKernel k;
  k.t = t;
  k.n = n;
  k.block_start = (t - n) / 2;
  k.values = std::move(values);
  return k;
}

}  // namespace sentsim
