#include "isconv/macs.hpp"

#include "isconv/errors.hpp"

namespace isconv {

std::uint64_t dense_macs(const ConvParams& p) {
  const auto [H_out, W_out] = output_dims(p);
  return static_cast<std::uint64_t>(H_out) * W_out * p.R * p.S * p.K * p.C;
}

EffectiveMacs effective_macs(const SparseInput& sparse, const ConvParams& p) {
  const auto [H_out, W_out] = output_dims(p);
  if (sparse.C() != p.C || sparse.H() != p.H_in || sparse.W() != p.W_in) {
    throw ShapeError("sparse input extents do not match " + p.to_string());
  }

  // Enumerate every tap and test it, independently of the stepped tap ranges
  // the scatter kernel computes.
  const auto reaches = [&](int coord, int offset, int extent) {
    const int n = coord + p.P - offset;
    return n >= 0 && n % p.T == 0 && n / p.T < extent;
  };

  std::uint64_t exact = 0;
  for (const SparseEntry& e : sparse.entries()) {
    std::uint64_t rows = 0;
    std::uint64_t cols = 0;
    for (int r = 0; r < p.R; ++r) rows += reaches(e.i, r, H_out) ? 1 : 0;
    for (int s = 0; s < p.S; ++s) cols += reaches(e.j, s, W_out) ? 1 : 0;
    exact += static_cast<std::uint64_t>(p.K) * rows * cols;
  }

  // round(nnz * dense / volume) in integers, half up. Splitting dense into
  // quotient and remainder keeps the products below volume^2.
  const std::uint64_t volume = static_cast<std::uint64_t>(p.C) * p.H_in * p.W_in;
  const std::uint64_t nnz = sparse.nnz();
  const std::uint64_t dense = dense_macs(p);
  const std::uint64_t whole = nnz * (dense / volume);
  const std::uint64_t frac = (2 * nnz * (dense % volume) + volume) / (2 * volume);
  return {exact, whole + frac};
}

}  // namespace isconv
