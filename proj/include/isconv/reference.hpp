#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "isconv/tensor.hpp"

namespace isconv {

/// Gather-form convolution, the ground truth for every other kernel:
///
///   O[k,i,j] = sum_c sum_r sum_s W[k,c,r,s] * I[c, i*T + r - P, j*T + s - P]
///
/// with I read as zero outside its extents. Each output element is summed in
/// (c, r, s) ascending order so results are bit-reproducible. `threads` > 1
/// splits output channels across threads without changing any sum.
Tensor3 direct_conv(const Tensor3& input, const Kernel4& kernel, const ConvParams& p,
                    int threads = 1);

/// Element-wise max(0, x).
Tensor3 relu(const Tensor3& t);

/// Fraction of elements exactly equal to 0.0.
double measure_sparsity(const Tensor3& t);

struct Tolerance {
  double rel = 1e-4;
  double abs = 1e-6;
};

struct Mismatch {
  std::size_t flat_index;
  float expected;
  float actual;

  std::string to_string() const;
};

/// First element where |actual - expected| > abs + rel * |expected|, if any.
/// Extent disagreement is reported as a ShapeError.
std::optional<Mismatch> first_mismatch(const Tensor3& expected, const Tensor3& actual,
                                       Tolerance tol = {});

}  // namespace isconv
