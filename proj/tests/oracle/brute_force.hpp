#pragma once

// Test-only reference implementations written straight from the convolution
// sum, with loop nestings that differ from the library kernels. Nothing here
// may call into the library's compute paths.

#include <cstdint>
#include <random>
#include <vector>

#include "isconv/gemm_conv.hpp"
#include "isconv/tensor.hpp"

namespace isconv::oracle {

// Input value with virtual zero padding.
inline float padded(const Tensor3& in, int c, int i, int j) {
  if (i < 0 || i >= in.H() || j < 0 || j >= in.W()) return 0.0f;
  return in(c, i, j);
}

inline int out_extent(int in, int pad, int kernel, int stride) {
  int n = 0;
  // Count output positions whose window starts inside the padded input and
  // ends inside it, without using the closed-form floor formula.
  for (int start = 0; start + kernel <= in + 2 * pad; start += stride) ++n;
  return n;
}

// (c, r, s) outermost, output coordinates innermost: every output element
// still receives its terms in (c, r, s) ascending order, so this must match
// direct_conv bit for bit.
inline Tensor3 conv(const Tensor3& in, const Kernel4& w, const ConvParams& p) {
  const int Ho = out_extent(p.H_in, p.P, p.R, p.T);
  const int Wo = out_extent(p.W_in, p.P, p.S, p.T);
  std::vector<float> out(static_cast<std::size_t>(p.K) * Ho * Wo, 0.0f);
  for (int c = 0; c < p.C; ++c)
    for (int r = 0; r < p.R; ++r)
      for (int s = 0; s < p.S; ++s)
        for (int k = 0; k < p.K; ++k)
          for (int i = 0; i < Ho; ++i)
            for (int j = 0; j < Wo; ++j) {
              const float x = padded(in, c, i * p.T + r - p.P, j * p.T + s - p.P);
              if (x == 0.0f) continue;  // padded and zero taps add nothing
              float& o = out[(static_cast<std::size_t>(k) * Ho + i) * Wo + j];
              o += w(k, c, r, s) * x;
            }
  return Tensor3(p.K, Ho, Wo, std::move(out));
}

// Column-outer triple loop.
inline Matrix matmul(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows(), b.cols());
  for (int j = 0; j < b.cols(); ++j)
    for (int i = 0; i < a.rows(); ++i) {
      double sum = 0.0;
      for (int t = 0; t < a.cols(); ++t) sum += static_cast<double>(a(i, t)) * b(t, j);
      c(i, j) = static_cast<float>(sum);
    }
  return c;
}

// Counts every (k, oi, oj, c, r, s) tuple of the dense sum whose input operand
// is a nonzero element (padding excluded).
inline std::uint64_t touching_macs(const Tensor3& in, const ConvParams& p) {
  const int Ho = out_extent(p.H_in, p.P, p.R, p.T);
  const int Wo = out_extent(p.W_in, p.P, p.S, p.T);
  std::uint64_t n = 0;
  for (int i = 0; i < Ho; ++i)
    for (int j = 0; j < Wo; ++j)
      for (int c = 0; c < p.C; ++c)
        for (int r = 0; r < p.R; ++r)
          for (int s = 0; s < p.S; ++s)
            if (padded(in, c, i * p.T + r - p.P, j * p.T + s - p.P) != 0.0f) n += p.K;
  return n;
}

inline Tensor3 random_tensor(std::mt19937& rng, int C, int H, int W, float lo = -1.0f,
                             float hi = 1.0f) {
  std::uniform_real_distribution<float> dist(lo, hi);
  std::vector<float> v(static_cast<std::size_t>(C) * H * W);
  for (auto& x : v) x = dist(rng);
  return Tensor3(C, H, W, std::move(v));
}

inline Kernel4 random_kernel(std::mt19937& rng, int K, int C, int R, int S) {
  std::uniform_real_distribution<float> dist(-1.0f, 1.0f);
  std::vector<float> v(static_cast<std::size_t>(K) * C * R * S);
  for (auto& x : v) x = dist(rng);
  return Kernel4(K, C, R, S, std::move(v));
}

inline Matrix random_matrix(std::mt19937& rng, int rows, int cols) {
  std::uniform_real_distribution<float> dist(-1.0f, 1.0f);
  std::vector<float> v(static_cast<std::size_t>(rows) * cols);
  for (auto& x : v) x = dist(rng);
  return Matrix(rows, cols, std::move(v));
}

// Zeroes each element independently with probability `sparsity`.
inline Tensor3 sparsify(std::mt19937& rng, Tensor3 t, double sparsity) {
  std::bernoulli_distribution drop(sparsity);
  for (float& x : t.data())
    if (drop(rng)) x = 0.0f;
  return t;
}

}  // namespace isconv::oracle
