#include "isconv/gemm_conv.hpp"

#include <algorithm>
#include <string>

#include "isconv/errors.hpp"
#include "parallel.hpp"

namespace isconv {

namespace {

// Register block of the product and depth of one packed panel of B.
constexpr int kMR = 4;
constexpr int kNR = 32;
constexpr int kKC = 256;

// C[0..MR, 0..nr) += A[0..MR, 0..kc) * Bp[0..kc, 0..NR). Bp is one packed
// strip of B, kNR floats per row, zero-padded past nr. The accumulators start
// from C so each element keeps a single running sum over ascending t.
template <int MR>
void micro_kernel(int kc, int nr, const float* a, std::size_t lda, const float* bp, float* c,
                  std::size_t ldc) {
  float acc[MR][kNR];
  for (int m = 0; m < MR; ++m) {
    for (int n = 0; n < kNR; ++n) acc[m][n] = n < nr ? c[m * ldc + n] : 0.0f;
  }
  for (int t = 0; t < kc; ++t) {
    const float* b = bp + static_cast<std::size_t>(t) * kNR;
    for (int m = 0; m < MR; ++m) {
      const float av = a[m * lda + t];
      for (int n = 0; n < kNR; ++n) acc[m][n] += av * b[n];
    }
  }
  for (int m = 0; m < MR; ++m) {
    for (int n = 0; n < nr; ++n) c[m * ldc + n] = acc[m][n];
  }
}

void micro_kernel_tail(int mr, int kc, int nr, const float* a, std::size_t lda, const float* bp,
                       float* c, std::size_t ldc) {
  switch (mr) {
    case 1: micro_kernel<1>(kc, nr, a, lda, bp, c, ldc); break;
    case 2: micro_kernel<2>(kc, nr, a, lda, bp, c, ldc); break;
    case 3: micro_kernel<3>(kc, nr, a, lda, bp, c, ldc); break;
    default: micro_kernel<kMR>(kc, nr, a, lda, bp, c, ldc); break;
  }
}

// C (M x N, zeroed by the caller) = A (M x depth) * B (depth x N), all row-major
// and densely strided.
void gemm(int M, int N, int depth, const float* A, const float* B, float* C, int threads) {
  const int strips = (N + kNR - 1) / kNR;
  const int row_blocks = (M + kMR - 1) / kMR;
  std::vector<float> packed(static_cast<std::size_t>(strips) * kKC * kNR);

  for (int t0 = 0; t0 < depth; t0 += kKC) {
    const int kc = std::min(kKC, depth - t0);

    for (int strip = 0; strip < strips; ++strip) {
      const int j0 = strip * kNR;
      const int nr = std::min(kNR, N - j0);
      float* dst = packed.data() + static_cast<std::size_t>(strip) * kKC * kNR;
      for (int t = 0; t < kc; ++t) {
        const float* src = B + static_cast<std::size_t>(t0 + t) * N + j0;
        float* row = dst + static_cast<std::size_t>(t) * kNR;
        std::copy(src, src + nr, row);
        std::fill(row + nr, row + kNR, 0.0f);
      }
    }

    detail::parallel_ranges(row_blocks, threads, [&](int block_lo, int block_hi) {
      for (int strip = 0; strip < strips; ++strip) {
        const int j0 = strip * kNR;
        const int nr = std::min(kNR, N - j0);
        const float* bp = packed.data() + static_cast<std::size_t>(strip) * kKC * kNR;
        for (int block = block_lo; block < block_hi; ++block) {
          const int i0 = block * kMR;
          const int mr = std::min(kMR, M - i0);
          const float* a = A + static_cast<std::size_t>(i0) * depth + t0;
          float* c = C + static_cast<std::size_t>(i0) * N + j0;
          if (mr == kMR) {
            micro_kernel<kMR>(kc, nr, a, depth, bp, c, N);
          } else {
            micro_kernel_tail(mr, kc, nr, a, depth, bp, c, N);
          }
        }
      }
    });
  }
}

}  // namespace

Matrix::Matrix(int rows, int cols) : rows_(rows), cols_(cols) {
  if (rows < 1 || cols < 1) throw ValidationError("Matrix extents must be >= 1");
  data_.assign(static_cast<std::size_t>(rows) * cols, 0.0f);
}

Matrix::Matrix(int rows, int cols, std::vector<float> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (rows < 1 || cols < 1) throw ValidationError("Matrix extents must be >= 1");
  if (data_.size() != static_cast<std::size_t>(rows) * cols) {
    throw ShapeError("Matrix data length " + std::to_string(data_.size()) + " != rows*cols");
  }
}

Matrix Matrix::identity(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0f;
  return m;
}

Matrix im2col(const Tensor3& input, const ConvParams& p) {
  check_input_shape(input, p);
  const auto [H_out, W_out] = output_dims(p);
  Matrix cols(p.C * p.R * p.S, H_out * W_out);
  float* out = cols.data().data();

  for (int c = 0; c < p.C; ++c) {
    for (int r = 0; r < p.R; ++r) {
      for (int s = 0; s < p.S; ++s) {
        float* row = out + static_cast<std::size_t>((c * p.R + r) * p.S + s) * H_out * W_out;
        for (int oi = 0; oi < H_out; ++oi) {
          const int ii = oi * p.T + r - p.P;
          float* dst = row + static_cast<std::size_t>(oi) * W_out;
          if (ii < 0 || ii >= p.H_in) continue;  // row stays zero
          for (int oj = 0; oj < W_out; ++oj) {
            const int jj = oj * p.T + s - p.P;
            dst[oj] = (jj >= 0 && jj < p.W_in) ? input(c, ii, jj) : 0.0f;
          }
        }
      }
    }
  }
  return cols;
}

Matrix matmul(const Matrix& a, const Matrix& b, int threads) {
  if (a.cols() != b.rows()) {
    throw ShapeError("matmul: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                     " times " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
  Matrix c(a.rows(), b.cols());
  gemm(a.rows(), b.cols(), a.cols(), a.data().data(), b.data().data(), c.data().data(), threads);
  return c;
}

Matrix kernel_matrix(const Kernel4& kernel) {
  // Kernel4's (k, c, r, s) layout already is the row-major kernel matrix.
  return Matrix(kernel.K(), kernel.C() * kernel.R() * kernel.S(),
                std::vector<float>(kernel.data().begin(), kernel.data().end()));
}

Tensor3 gemm_conv(const Tensor3& input, const Kernel4& kernel, const ConvParams& p, int threads) {
  check_shapes(input, kernel, p);
  const auto [H_out, W_out] = output_dims(p);
  const Matrix cols = im2col(input, p);

  std::vector<float> out(static_cast<std::size_t>(p.K) * H_out * W_out, 0.0f);
  gemm(p.K, H_out * W_out, p.C * p.R * p.S, kernel.data().data(), cols.data().data(), out.data(),
       threads);
  return Tensor3(p.K, H_out, W_out, std::move(out));
}

}  // namespace isconv
