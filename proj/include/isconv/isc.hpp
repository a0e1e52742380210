#pragma once

// Inverse sparse convolution.
//
// Instead of gathering a receptive field for every output element, walk the
// nonzero inputs once and scatter each one into every output it influences:
//
//   1. compress:     nonzero activations -> coordinate list (c, i, j, v)
//   2. pack_kernel:  W[k,c,r,s] -> packed[c,r,s,k], output channels contiguous
//      isc_scatter:  acc[oi,oj,:] += v * packed[c,r,s,:] for every (r, s)
//                    with oi = (i + P - r) / T, oj = (j + P - s) / T integral
//                    and in range
//   3. transpose_acc: acc[oi,oj,k] -> O[k,oi,oj]
//
// The work done is proportional to the number of nonzero inputs, so the
// kernel pays off on post-ReLU activations with high sparsity.

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "isconv/tensor.hpp"

namespace isconv {

struct SparseEntry {
  int c;
  int i;
  int j;
  float value;

  friend bool operator==(const SparseEntry&, const SparseEntry&) = default;
};

/// Coordinate list of the nonzero elements of a C x H x W tensor, sorted
/// ascending by (c, i, j) with no duplicates and no zero values.
class SparseInput {
 public:
  SparseInput() = default;
  /// Validates every invariant; throws ValidationError on violation.
  SparseInput(int C, int H, int W, std::vector<SparseEntry> entries);

  int C() const noexcept { return C_; }
  int H() const noexcept { return H_; }
  int W() const noexcept { return W_; }
  std::span<const SparseEntry> entries() const noexcept { return entries_; }
  std::size_t nnz() const noexcept { return entries_.size(); }

  friend bool operator==(const SparseInput&, const SparseInput&) = default;

 private:
  friend SparseInput compress(const Tensor3& input);

  struct Unchecked {};
  SparseInput(Unchecked, int C, int H, int W, std::vector<SparseEntry> entries)
      : C_(C), H_(H), W_(W), entries_(std::move(entries)) {}

  int C_ = 0;
  int H_ = 0;
  int W_ = 0;
  std::vector<SparseEntry> entries_;
};

/// Weights with the output-channel axis innermost: (c, r, s, k) -> ((c*R + r)*S + s)*K + k.
class PackedKernel {
 public:
  PackedKernel() = default;
  PackedKernel(int K, int C, int R, int S, std::vector<float> data);

  int K() const noexcept { return K_; }
  int C() const noexcept { return C_; }
  int R() const noexcept { return R_; }
  int S() const noexcept { return S_; }

  std::size_t index(int c, int r, int s, int k) const noexcept {
    return ((static_cast<std::size_t>(c) * R_ + r) * S_ + s) * K_ + k;
  }
  /// The K contiguous weights W[0..K, c, r, s].
  std::span<const float> column(int c, int r, int s) const noexcept {
    return std::span<const float>(data_).subspan(index(c, r, s, 0), static_cast<std::size_t>(K_));
  }
  std::span<const float> data() const noexcept { return data_; }

  friend bool operator==(const PackedKernel&, const PackedKernel&) = default;

 private:
  int K_ = 0;
  int C_ = 0;
  int R_ = 0;
  int S_ = 0;
  std::vector<float> data_;
};

/// Pre-transpose output, (oi, oj, k) -> (oi*W_out + oj)*K + k. Zero on construction.
class Accumulator {
 public:
  Accumulator() = default;
  Accumulator(int H_out, int W_out, int K);
  Accumulator(int H_out, int W_out, int K, std::vector<float> data);

  int H_out() const noexcept { return H_out_; }
  int W_out() const noexcept { return W_out_; }
  int K() const noexcept { return K_; }

  std::size_t index(int oi, int oj, int k) const noexcept {
    return (static_cast<std::size_t>(oi) * W_out_ + oj) * K_ + k;
  }
  std::span<const float> data() const noexcept { return data_; }
  std::span<float> data() noexcept { return data_; }

  friend bool operator==(const Accumulator&, const Accumulator&) = default;

 private:
  int H_out_ = 0;
  int W_out_ = 0;
  int K_ = 0;
  std::vector<float> data_;
};

/// Instrumentation filled in by isc_conv.
struct IscCounters {
  std::uint64_t macs = 0;             // multiply-accumulates executed
  std::uint64_t zero_init_writes = 0; // accumulator zero-fill
  std::uint64_t output_writes = 0;    // transpose into the output tensor
};

SparseInput compress(const Tensor3& input);
Tensor3 decompress(const SparseInput& sparse);

PackedKernel pack_kernel(const Kernel4& kernel);
Kernel4 unpack_kernel(const PackedKernel& packed);

/// Scatters every entry of `sparse` into `acc`. Returns the number of
/// multiply-accumulates performed. `threads` > 1 partitions output rows, so
/// every accumulator element sees the same sequence of additions.
std::uint64_t isc_scatter(const SparseInput& sparse, const PackedKernel& packed,
                          const ConvParams& p, Accumulator& acc, int threads = 1);

/// output[k, oi, oj] = acc[oi, oj, k].
Tensor3 transpose_acc(const Accumulator& acc);

/// Inverse of transpose_acc.
Accumulator to_accumulator(const Tensor3& t);

/// Full convolution: zero-initialized accumulator, scatter, transpose.
Tensor3 isc_conv(const SparseInput& sparse, const PackedKernel& packed, const ConvParams& p,
                 IscCounters* counters = nullptr, int threads = 1);

/// Throws ShapeError unless sparse and packed are consistent with p.
void check_isc_shapes(const SparseInput& sparse, const PackedKernel& packed, const ConvParams& p);

}  // namespace isconv
