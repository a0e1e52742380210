#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace isconv {

/// Hyperparameters of one convolution layer.
///
/// Padding is symmetric and virtual: no kernel in this library ever
/// materializes a padded copy of the input.
struct ConvParams {
  int C = 1;      // input feature maps
  int H_in = 1;   // input height
  int W_in = 1;   // input width
  int K = 1;      // output feature maps
  int R = 1;      // kernel height
  int S = 1;      // kernel width
  int P = 0;      // zero padding on every border
  int T = 1;      // stride

  /// Throws ValidationError unless every extent is >= 1, P >= 0, the kernel
  /// fits in the padded input and the output extents are >= 1.
  void validate() const;

  std::string to_string() const;

  friend bool operator==(const ConvParams&, const ConvParams&) = default;
};

struct OutputDims {
  int H_out;
  int W_out;

  friend bool operator==(const OutputDims&, const OutputDims&) = default;
};

/// floor((H_in + 2P - R) / T) + 1, and the same for the width.
OutputDims output_dims(const ConvParams& p);

/// Dense C x H x W single-precision tensor, row-major: (c, i, j) -> (c*H + i)*W + j.
class Tensor3 {
 public:
  Tensor3() = default;
  /// Zero-filled.
  Tensor3(int C, int H, int W);
  /// Takes ownership of `data`; throws ShapeError on a length mismatch and
  /// ValidationError on a non-finite value.
  Tensor3(int C, int H, int W, std::vector<float> data);

  int C() const noexcept { return C_; }
  int H() const noexcept { return H_; }
  int W() const noexcept { return W_; }
  std::size_t size() const noexcept { return data_.size(); }

  std::size_t index(int c, int i, int j) const noexcept {
    return (static_cast<std::size_t>(c) * H_ + i) * W_ + j;
  }
  float operator()(int c, int i, int j) const noexcept { return data_[index(c, i, j)]; }
  float& operator()(int c, int i, int j) noexcept { return data_[index(c, i, j)]; }

  std::span<const float> data() const noexcept { return data_; }
  std::span<float> data() noexcept { return data_; }

  friend bool operator==(const Tensor3&, const Tensor3&) = default;

 private:
  int C_ = 0;
  int H_ = 0;
  int W_ = 0;
  std::vector<float> data_;
};

/// Dense K x C x R x S weight tensor: (k, c, r, s) -> ((k*C + c)*R + r)*S + s.
///
/// Read as a row-major K x (C*R*S) matrix this is already the kernel matrix of
/// the im2col lowering, with columns in (c, r, s) order.
class Kernel4 {
 public:
  Kernel4() = default;
  Kernel4(int K, int C, int R, int S);
  Kernel4(int K, int C, int R, int S, std::vector<float> data);

  int K() const noexcept { return K_; }
  int C() const noexcept { return C_; }
  int R() const noexcept { return R_; }
  int S() const noexcept { return S_; }
  std::size_t size() const noexcept { return data_.size(); }

  std::size_t index(int k, int c, int r, int s) const noexcept {
    return ((static_cast<std::size_t>(k) * C_ + c) * R_ + r) * S_ + s;
  }
  float operator()(int k, int c, int r, int s) const noexcept { return data_[index(k, c, r, s)]; }
  float& operator()(int k, int c, int r, int s) noexcept { return data_[index(k, c, r, s)]; }

  std::span<const float> data() const noexcept { return data_; }
  std::span<float> data() noexcept { return data_; }

  friend bool operator==(const Kernel4&, const Kernel4&) = default;

 private:
  int K_ = 0;
  int C_ = 0;
  int R_ = 0;
  int S_ = 0;
  std::vector<float> data_;
};

/// Throws ShapeError unless `input` is C x H_in x W_in and `kernel` is K x C x R x S.
void check_shapes(const Tensor3& input, const Kernel4& kernel, const ConvParams& p);
void check_input_shape(const Tensor3& input, const ConvParams& p);

}  // namespace isconv
