#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "isconv/bench.hpp"
#include "isconv/errors.hpp"

namespace isconv::bench {

namespace {

// mt19937_64's output sequence is fixed by the standard; the std
// distributions are not, so draws are mapped to values by hand.

constexpr std::uint64_t kKernelStream = 0x9E3779B97F4A7C15ULL;

// Uniform in [0, bound) by rejection.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

// 24 random mantissa bits: (m + 1) / 2^24 in (0, 1].
float unit_open_closed(std::mt19937_64& rng) {
  return static_cast<float>((rng() >> 40) + 1) * 0x1.0p-24f;
}

// m / 2^23 - 1 in [-1, 1).
float symmetric_unit(std::mt19937_64& rng) {
  return static_cast<float>(rng() >> 40) * 0x1.0p-23f - 1.0f;
}

}  // namespace

Tensor3 gen_sparse_input(std::uint64_t seed, const ConvParams& p, double sparsity) {
  p.validate();
  if (!(sparsity >= 0.0 && sparsity <= 1.0)) {
    throw ValidationError("sparsity must be in [0, 1], got " + std::to_string(sparsity));
  }
  Tensor3 t(p.C, p.H_in, p.W_in);
  const std::size_t volume = t.size();
  const auto nnz = static_cast<std::size_t>(std::llround((1.0 - sparsity) * static_cast<double>(volume)));

  std::mt19937_64 rng(seed);
  std::vector<std::size_t> order(volume);
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Partial Fisher-Yates: the first nnz slots become a uniform sample.
  for (std::size_t n = 0; n < nnz; ++n) {
    const std::size_t pick = n + uniform_below(rng, volume - n);
    std::swap(order[n], order[pick]);
  }
  auto data = t.data();
  for (std::size_t n = 0; n < nnz; ++n) data[order[n]] = unit_open_closed(rng);
  return t;
}

Kernel4 gen_kernel(std::uint64_t seed, const ConvParams& p) {
  p.validate();
  Kernel4 kernel(p.K, p.C, p.R, p.S);
  std::mt19937_64 rng(seed ^ kKernelStream);
  for (float& w : kernel.data()) w = symmetric_unit(rng);
  return kernel;
}

}  // namespace isconv::bench
