#include <gtest/gtest.h>

#include <random>

#include "isconv/bench.hpp"
#include "isconv/errors.hpp"
#include "isconv/gemm_conv.hpp"
#include "isconv/macs.hpp"
#include "isconv/reference.hpp"
#include "oracle/brute_force.hpp"

using namespace isconv;

namespace {

void expect_close(const Matrix& expected, const Matrix& actual, double rel) {
  ASSERT_EQ(expected.rows(), actual.rows());
  ASSERT_EQ(expected.cols(), actual.cols());
  for (int i = 0; i < expected.rows(); ++i)
    for (int j = 0; j < expected.cols(); ++j)
      EXPECT_NEAR(actual(i, j), expected(i, j), rel * std::abs(expected(i, j)) + 1e-6)
          << "(" << i << ", " << j << ")";
}

}  // namespace

TEST(Im2col, AlexNetConv4Extents) {
  const ConvParams p{384, 5, 5, 384, 3, 3, 1, 1};
  const Matrix m = im2col(bench::gen_sparse_input(1, p, 0.9), p);
  EXPECT_EQ(m.rows(), 3456);
  EXPECT_EQ(m.cols(), 25);
}

TEST(Im2col, PointwiseIsAReshape) {
  std::mt19937 rng(6);
  const Tensor3 in = oracle::random_tensor(rng, 3, 4, 5);
  const Matrix m = im2col(in, {3, 4, 5, 2, 1, 1, 0, 1});
  ASSERT_EQ(m.rows(), 3);
  ASSERT_EQ(m.cols(), 20);
  EXPECT_TRUE(std::equal(m.data().begin(), m.data().end(), in.data().begin()));
}

TEST(Im2col, ZeroInput) {
  const Matrix m = im2col(Tensor3(2, 5, 5), {2, 5, 5, 1, 3, 3, 1, 2});
  for (float x : m.data()) EXPECT_EQ(x, 0.0f);
}

TEST(Im2col, EntryFormulaWithPaddingAndStride) {
  std::mt19937 rng(9);
  const ConvParams p{2, 5, 6, 1, 3, 2, 1, 2};
  const Tensor3 in = oracle::random_tensor(rng, 2, 5, 6);
  const auto [Ho, Wo] = output_dims(p);
  const Matrix m = im2col(in, p);
  for (int c = 0; c < p.C; ++c)
    for (int r = 0; r < p.R; ++r)
      for (int s = 0; s < p.S; ++s)
        for (int oi = 0; oi < Ho; ++oi)
          for (int oj = 0; oj < Wo; ++oj)
            EXPECT_EQ(m((c * p.R + r) * p.S + s, oi * Wo + oj),
                      oracle::padded(in, c, oi * p.T + r - p.P, oj * p.T + s - p.P));
}

TEST(Im2col, ShapeMismatch) {
  EXPECT_THROW(im2col(Tensor3(2, 5, 5), {3, 5, 5, 1, 3, 3, 0, 1}), ShapeError);
}

TEST(Matmul, HandComputed) {
  const Matrix a(2, 2, {1, 2, 3, 4});
  const Matrix b(2, 2, {5, 6, 7, 8});
  EXPECT_EQ(matmul(a, b), Matrix(2, 2, {19, 22, 43, 50}));
}

TEST(Matmul, IdentityIsNeutral) {
  std::mt19937 rng(12);
  const Matrix b = oracle::random_matrix(rng, 3, 11);
  EXPECT_EQ(matmul(Matrix::identity(3), b), b);
}

TEST(Matmul, MatchesPermutedLoopOracle) {
  std::mt19937 rng(13);
  const Matrix a = oracle::random_matrix(rng, 7, 5);
  const Matrix b = oracle::random_matrix(rng, 5, 9);
  expect_close(oracle::matmul(a, b), matmul(a, b), 1e-5);
}

TEST(Matmul, RaggedBlockEdges) {
  std::mt19937 rng(14);
  // Rows not a multiple of the row block, columns spanning several strips with
  // a tail, and a depth spanning several packed panels. Long random sums
  // cancel, so the bound is relative to sum |a||b| rather than |result|.
  for (auto [m, k, n] : {std::tuple{5, 300, 33}, std::tuple{1, 1, 1}, std::tuple{9, 513, 70},
                         std::tuple{4, 256, 32}}) {
    const Matrix a = oracle::random_matrix(rng, m, k);
    const Matrix b = oracle::random_matrix(rng, k, n);
    const Matrix expected = oracle::matmul(a, b);
    const Matrix actual = matmul(a, b);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) {
        double magnitude = 0.0;
        for (int t = 0; t < k; ++t) magnitude += std::abs(a(i, t) * b(t, j));
        EXPECT_NEAR(actual(i, j), expected(i, j), 1e-5 * magnitude) << m << "x" << k << "x" << n;
      }
  }
}

TEST(Matmul, ThreadedIsBitIdentical) {
  std::mt19937 rng(15);
  const Matrix a = oracle::random_matrix(rng, 37, 290);
  const Matrix b = oracle::random_matrix(rng, 290, 45);
  EXPECT_EQ(matmul(a, b, 1), matmul(a, b, 3));
}

TEST(Matmul, DimensionMismatch) {
  EXPECT_THROW(matmul(Matrix(2, 3), Matrix(2, 3)), ShapeError);
}

TEST(GemmConv, KernelColumnsFollowIm2colRows) {
  // One-hot kernel at (0, c, r, s) must select exactly im2col row (c*R + r)*S + s.
  std::mt19937 rng(16);
  const ConvParams p{3, 5, 6, 1, 2, 3, 1, 1};
  const Tensor3 in = oracle::random_tensor(rng, 3, 5, 6);
  const Matrix cols = im2col(in, p);
  const auto [Ho, Wo] = output_dims(p);
  for (int c = 0; c < p.C; ++c)
    for (int r = 0; r < p.R; ++r)
      for (int s = 0; s < p.S; ++s) {
        Kernel4 w(1, p.C, p.R, p.S);
        w(0, c, r, s) = 1.0f;
        const int row = (c * p.R + r) * p.S + s;
        const Matrix km = kernel_matrix(w);
        EXPECT_EQ(km(0, row), 1.0f);
        const Tensor3 out = gemm_conv(in, w, p);
        for (int q = 0; q < Ho * Wo; ++q) EXPECT_EQ(out.data()[q], cols(row, q));
      }
}

TEST(GemmConv, SingleElement) {
  const Tensor3 out = gemm_conv(Tensor3(1, 1, 1, {1.5f}), Kernel4(1, 1, 1, 1, {4.0f}),
                                {1, 1, 1, 1, 1, 1, 0, 1});
  EXPECT_EQ(out.data()[0], 6.0f);
}

TEST(GemmConv, ZeroInput) {
  std::mt19937 rng(17);
  const ConvParams p{4, 6, 6, 5, 3, 3, 1, 1};
  const Tensor3 out = gemm_conv(Tensor3(4, 6, 6), oracle::random_kernel(rng, 5, 4, 3, 3), p);
  for (float x : out.data()) EXPECT_EQ(x, 0.0f);
}

TEST(GemmConv, MatchesDirectOnBundledLayers) {
  for (const auto& spec : bench::default_layer_specs()) {
    const Kernel4 w = bench::gen_kernel(3, spec.params);
    for (double sparsity : {0.0, 0.5, 0.9, 0.95}) {
      const Tensor3 in = bench::gen_sparse_input(3, spec.params, sparsity);
      const auto bad = first_mismatch(direct_conv(in, w, spec.params), gemm_conv(in, w, spec.params),
                                      {1e-5, 1e-6});
      EXPECT_FALSE(bad.has_value()) << spec.name << " @" << sparsity << ": " << bad->to_string();
    }
  }
}

TEST(GemmConv, ProductWorkEqualsDenseMacs) {
  for (const auto& spec : bench::default_layer_specs()) {
    const auto& p = spec.params;
    const auto [Ho, Wo] = output_dims(p);
    const std::uint64_t product = static_cast<std::uint64_t>(p.K) * (p.C * p.R * p.S) * (Ho * Wo);
    EXPECT_EQ(product, dense_macs(p)) << spec.name;
  }
}

TEST(GemmConv, ShapeMismatch) {
  EXPECT_THROW(gemm_conv(Tensor3(2, 4, 4), Kernel4(1, 3, 3, 3), {2, 4, 4, 1, 3, 3, 0, 1}),
               ShapeError);
}
