#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "isconv/tensor.hpp"

namespace isconv {

/// Row-major single-precision matrix: (i, j) -> i*cols + j.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols);
  Matrix(int rows, int cols, std::vector<float> data);

  static Matrix identity(int n);

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }

  float operator()(int i, int j) const noexcept { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  float& operator()(int i, int j) noexcept { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

  std::span<const float> data() const noexcept { return data_; }
  std::span<float> data() noexcept { return data_; }
  /// Moves the storage out, leaving an empty matrix.
  std::vector<float> release() && noexcept { return std::move(data_); }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<float> data_;
};

/// Unrolls every receptive field into a column: the result is (R*S*C) x (H_out*W_out)
/// with row (c*R + r)*S + s, column oi*W_out + oj, and zeros where the field
/// hangs over the padding.
Matrix im2col(const Tensor3& input, const ConvParams& p);

/// c[i][j] = sum_t a[i][t] * b[t][j], each sum taken with t ascending.
/// `threads` > 1 splits rows of the product.
Matrix matmul(const Matrix& a, const Matrix& b, int threads = 1);

/// Kernel matrix K x (C*R*S) with columns in (c, r, s) order, matching im2col rows.
Matrix kernel_matrix(const Kernel4& kernel);

/// Convolution as kernel_matrix(kernel) x im2col(input), reshaped to K x H_out x W_out.
Tensor3 gemm_conv(const Tensor3& input, const Kernel4& kernel, const ConvParams& p,
                  int threads = 1);

}  // namespace isconv
