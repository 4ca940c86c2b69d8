#pragma once

#include <string>
#include <vector>

#include "sentsim/dynamics.hpp"
#include "sentsim/matrix.hpp"

namespace sentsim {

inline int sign_of(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

// Per-pixel sign(final) - sign(initial): +-2 marks polarity flips, 0 marks
// unchanged polarity, +-1 only when one operand was exactly zero.
struct DiffGrid {
  int rows = 0;
  int cols = 0;
  std::vector<int> values;

  int at(int i, int x) const {
    return values[static_cast<std::size_t>(i) * static_cast<std::size_t>(cols) +
                  static_cast<std::size_t>(x)];
  }

  Matrix as_matrix() const;
};

DiffGrid difference_map(const Matrix& initial, const Matrix& final_grid);

// Entrywise sum, row-major order.
double sentiment_sum(const Matrix& g);

enum class Polarity { Unchanged, DominantPositive, DominantNegative, Mixed };

std::string to_string(Polarity p);

struct PolarityReport {
  double initial_sum = 0.0;
  double final_sum = 0.0;
  long count_pos_flip = 0;   // diff = +2
  long count_neg_flip = 0;   // diff = -2
  long count_unchanged = 0;  // everything else, so the three counts total n^2
  Polarity classification = Polarity::Unchanged;
};

// Flip counts plus a label: unchanged when nothing flipped, mixed when both
// directions exceed 5% of the pixels, otherwise dominant toward whichever
// way the total sentiment moved.
PolarityReport polarity_report(const Matrix& initial, const Matrix& final_grid);

// Lyapunov diagnostic for the diffusive flow with symmetrized weights:
//   sum_i [ 1/4 sum_{x,y} w(x-y) (g[i][y] - g[i][x])^2 ] + sum_{i,x} F(g[i][x])
// Zero exactly on the constant +-1 grids.
double energy(const Matrix& g, const OffsetWeights& w);

struct SensitivityResult {
  int row = 0;
  int col = 0;
  double deviation = 0.0;
  Matrix table;  // L1 deviation per flipped pixel; NaN where the run failed
};

// Brute-force scan: rerun to equilibrium with each single entry sign-flipped
// and record the L1 distance to the unperturbed equilibrium. Perturbed runs
// execute concurrently; entries whose run diverges or fails to converge are
// NaN and excluded from the argmax (ties: smallest row, then column).
// Throws if the reference run itself does not converge.
SensitivityResult sensitivity_scan(const Matrix& grid0, const OffsetWeights& w,
                                   const SimConfig& cfg);

}  // namespace sentsim
