#pragma once

#include <cstddef>
#include <cstring>
#include <stdexcept>
#include <vector>

namespace sentsim {

// Dense row-major array of doubles. Sentiment grids are square (rows =
// individuals, columns = questions); kernels and report tables reuse the
// same storage.
class Matrix {
 public:
  Matrix() = default;

  Matrix(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols) {
    if (rows <= 0 || cols <= 0) {
      throw std::invalid_argument("Matrix: dimensions must be positive");
    }
    data_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), fill);
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(int r, int c) { return data_[idx(r, c)]; }
  double operator()(int r, int c) const { return data_[idx(r, c)]; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  double* row(int r) { return data_.data() + idx(r, 0); }
  const double* row(int r) const { return data_.data() + idx(r, 0); }

  bool same_shape(const Matrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t idx(int r, int c) const {
    return static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) +
           static_cast<std::size_t>(c);
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

// Bit-level equality (distinguishes -0.0 from 0.0, never equates NaNs away).
inline bool bitwise_equal(const Matrix& a, const Matrix& b) {
  if (!a.same_shape(b)) return false;
  if (a.size() == 0) return true;
  return std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

// Entrywise sum, fixed row-major accumulation order.
inline double grid_sum(const Matrix& g) {
  double s = 0.0;
  const double* p = g.data();
  for (std::size_t i = 0; i < g.size(); ++i) s += p[i];
  return s;
}

}  // namespace sentsim
