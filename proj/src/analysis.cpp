#include "sentsim/analysis.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace sentsim {

namespace {

void check_same_shape(const Matrix& a, const Matrix& b, const char* what) {
  if (!a.same_shape(b)) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                                " vs " + std::to_string(b.rows()) + "x" +
                                std::to_string(b.cols()) + ")");
  }
}

double l1_distance(const Matrix& a, const Matrix& b) {
  double s = 0.0;
  const double* pa = a.data();
  const double* pb = b.data();
  for (std::size_t i = 0; i < a.size(); ++i) s += std::fabs(pa[i] - pb[i]);
  return s;
}

}  // namespace

Matrix DiffGrid::as_matrix() const {
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int x = 0; x < cols; ++x) {
      m(i, x) = static_cast<double>(at(i, x));
    }
  }
  return m;
}

DiffGrid difference_map(const Matrix& initial, const Matrix& final_grid) {
  check_same_shape(initial, final_grid, "difference_map");
  DiffGrid d;
  d.rows = initial.rows();
  d.cols = initial.cols();
  d.values.reserve(initial.size());
  for (int i = 0; i < d.rows; ++i) {
    for (int x = 0; x < d.cols; ++x) {
      d.values.push_back(sign_of(final_grid(i, x)) - sign_of(initial(i, x)));
    }
  }
  return d;
}

double sentiment_sum(const Matrix& g) { return grid_sum(g); }

std::string to_string(Polarity p) {
  switch (p) {
    case Polarity::Unchanged: return "unchanged";
    case Polarity::DominantPositive: return "dominant_positive";
    case Polarity::DominantNegative: return "dominant_negative";
    case Polarity::Mixed: return "mixed";
  }
  return "unknown";
}

PolarityReport polarity_report(const Matrix& initial, const Matrix& final_grid) {
  check_same_shape(initial, final_grid, "polarity_report");
  const DiffGrid d = difference_map(initial, final_grid);
  PolarityReport r;
  r.initial_sum = sentiment_sum(initial);
  r.final_sum = sentiment_sum(final_grid);
  for (int v : d.values) {
    if (v == 2) ++r.count_pos_flip;
    else if (v == -2) ++r.count_neg_flip;
    else ++r.count_unchanged;
  }
  const double threshold = 0.05 * static_cast<double>(d.values.size());
  if (r.count_pos_flip == 0 && r.count_neg_flip == 0) {
    r.classification = Polarity::Unchanged;
  } else if (static_cast<double>(r.count_pos_flip) > threshold &&
             static_cast<double>(r.count_neg_flip) > threshold) {
    r.classification = Polarity::Mixed;
  } else {
    r.classification = r.final_sum > r.initial_sum ? Polarity::DominantPositive
                                                   : Polarity::DominantNegative;
  }
  return r;
}

double energy(const Matrix& g, const OffsetWeights& w) {
  if (g.cols() != w.n()) {
    throw std::invalid_argument("energy: grid columns must match offset weights");
  }
  const int n = g.cols();
  double e = 0.0;
  for (int i = 0; i < g.rows(); ++i) {
    const double* row = g.row(i);
    double quad = 0.0;
    for (int x = 0; x < n; ++x) {
      for (int y = 0; y < n; ++y) {
        const double diff = row[y] - row[x];
        quad += w.at(x - y) * diff * diff;
      }
    }
    e += 0.25 * quad;
    for (int x = 0; x < n; ++x) e += potential(row[x]);
  }
  return e;
}

SensitivityResult sensitivity_scan(const Matrix& grid0, const OffsetWeights& w,
                                   const SimConfig& cfg) {
  const RunResult reference = run_to_equilibrium(grid0, w, cfg);
  if (!reference.converged) {
    throw std::runtime_error("sensitivity_scan: reference run did not converge within " +
                             std::to_string(cfg.max_iters) + " iterations");
  }

  const int rows = grid0.rows();
  const int cols = grid0.cols();
  const long pixels = static_cast<long>(rows) * cols;
  SensitivityResult res;
  res.table = Matrix(rows, cols, std::numeric_limits<double>::quiet_NaN());

  // Snapshots are not needed for the perturbed runs.
  SimConfig run_cfg = cfg;
  run_cfg.snapshot_every = 0;

#pragma omp parallel for schedule(dynamic)
  for (long px = 0; px < pixels; ++px) {
    const int i = static_cast<int>(px / cols);
    const int x = static_cast<int>(px % cols);
    Matrix perturbed = grid0;
    perturbed(i, x) = -perturbed(i, x);
    try {
      const RunResult rr = run_to_equilibrium(perturbed, w, run_cfg);
      if (rr.converged) {
        res.table(i, x) = l1_distance(rr.final_grid, reference.final_grid);
      }
    } catch (const DivergenceError&) {
      // entry stays NaN
    }
  }

  bool found = false;
  double best = -1.0;
  for (int i = 0; i < rows; ++i) {
    for (int x = 0; x < cols; ++x) {
      const double v = res.table(i, x);
      if (std::isnan(v)) continue;
      if (!found || v > best) {
        found = true;
        best = v;
        res.row = i;
        res.col = x;
      }
    }
  }
  if (!found) {
    throw std::runtime_error("sensitivity_scan: every perturbed run failed");
  }
  res.deviation = best;
  return res;
}

}  // namespace sentsim
