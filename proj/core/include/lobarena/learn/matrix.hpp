#pragma once

#include <cstddef>
#include <vector>

namespace lobarena::learn {

// Dense row-major double matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), v_(rows * cols, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return v_.size(); }

  double* data() { return v_.data(); }
  const double* data() const { return v_.data(); }
  double* row(std::size_t r) { return v_.data() + r * cols_; }
  const double* row(std::size_t r) const { return v_.data() + r * cols_; }

  double& operator()(std::size_t r, std::size_t c) { return v_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return v_[r * cols_ + c]; }

  void fill(double v) { v_.assign(v_.size(), v); }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> v_;
};

// C = A * B (+ C when accumulate). Shapes checked, throws on mismatch.
void gemm_nn(const Matrix& a, const Matrix& b, Matrix& c, bool accumulate = false);
// C = A * B^T.
void gemm_nt(const Matrix& a, const Matrix& b, Matrix& c, bool accumulate = false);
// C = A^T * B.
void gemm_tn(const Matrix& a, const Matrix& b, Matrix& c, bool accumulate = false);

}  // namespace lobarena::learn
