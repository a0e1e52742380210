#pragma once

#include <cstdint>

#include "isconv/isc.hpp"
#include "isconv/tensor.hpp"

namespace isconv {

/// H_out * W_out * R * S * K * C: the multiply-accumulates of a dense
/// convolution, whether computed directly or through im2col + GEMM.
std::uint64_t dense_macs(const ConvParams& p);

struct EffectiveMacs {
  /// Sum over nonzero inputs of K times the number of kernel taps that map
  /// the input onto an in-range output position.
  std::uint64_t exact = 0;
  /// round(rho * dense_macs) with rho = nnz / (C * H_in * W_in). Ignores
  /// borders and stride, so it only equals `exact` when every input reaches
  /// R * S outputs.
  std::uint64_t estimated = 0;

  friend bool operator==(const EffectiveMacs&, const EffectiveMacs&) = default;
};

EffectiveMacs effective_macs(const SparseInput& sparse, const ConvParams& p);

}  // namespace isconv
