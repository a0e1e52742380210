#include "isconv/isc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>
#include <tuple>

#include "isconv/errors.hpp"
#include "parallel.hpp"

namespace isconv {

namespace {

// a[0..n) += v * w[0..n). Each element receives exactly one add per call, so
// vectorizing across n does not change any per-element sum.
inline void axpy(int n, float v, const float* __restrict w, float* __restrict a) {
  for (int k = 0; k < n; ++k) a[k] += v * w[k];
}

// Kernel offsets r in [0, R) whose inverse map (n - r) / T lands on an output
// index in [lo, hi), where n = i + P. Returned as first/last with step T; empty
// when first > last.
struct TapRange {
  int first;
  int last;
};

inline TapRange taps(int n, int extent, int T, int lo, int hi) {
  int first = std::max(0, n - (hi - 1) * T);
  first += (n - first) % T;
  const int last = std::min(extent - 1, n - lo * T);
  return {first, last};
}

}  // namespace

SparseInput::SparseInput(int C, int H, int W, std::vector<SparseEntry> entries)
    : C_(C), H_(H), W_(W), entries_(std::move(entries)) {
  if (C < 1 || H < 1 || W < 1) throw ValidationError("SparseInput extents must be >= 1");
  for (std::size_t n = 0; n < entries_.size(); ++n) {
    const auto& e = entries_[n];
    if (e.c < 0 || e.c >= C || e.i < 0 || e.i >= H || e.j < 0 || e.j >= W) {
      throw ValidationError("SparseInput entry " + std::to_string(n) + " out of range");
    }
    if (e.value == 0.0f || !std::isfinite(e.value)) {
      throw ValidationError("SparseInput entry " + std::to_string(n) + " is zero or non-finite");
    }
    if (n > 0) {
      const auto& prev = entries_[n - 1];
      if (std::tie(prev.c, prev.i, prev.j) >= std::tie(e.c, e.i, e.j)) {
        throw ValidationError("SparseInput entries not strictly ascending at " +
                              std::to_string(n));
      }
    }
  }
}

PackedKernel::PackedKernel(int K, int C, int R, int S, std::vector<float> data)
    : K_(K), C_(C), R_(R), S_(S), data_(std::move(data)) {
  if (K < 1 || C < 1 || R < 1 || S < 1) throw ValidationError("PackedKernel extents must be >= 1");
  if (data_.size() != static_cast<std::size_t>(K) * C * R * S) {
    throw ShapeError("PackedKernel data length != K*C*R*S");
  }
}

Accumulator::Accumulator(int H_out, int W_out, int K)
    : H_out_(H_out), W_out_(W_out), K_(K) {
  if (H_out < 1 || W_out < 1 || K < 1) throw ValidationError("Accumulator extents must be >= 1");
  data_.assign(static_cast<std::size_t>(H_out) * W_out * K, 0.0f);
}

Accumulator::Accumulator(int H_out, int W_out, int K, std::vector<float> data)
    : H_out_(H_out), W_out_(W_out), K_(K), data_(std::move(data)) {
  if (H_out < 1 || W_out < 1 || K < 1) throw ValidationError("Accumulator extents must be >= 1");
  if (data_.size() != static_cast<std::size_t>(H_out) * W_out * K) {
    throw ShapeError("Accumulator data length != H_out*W_out*K");
  }
}

SparseInput compress(const Tensor3& input) {
  std::vector<SparseEntry> entries;
  const auto data = input.data();
  const auto nnz = std::count_if(data.begin(), data.end(), [](float x) { return x != 0.0f; });
  entries.reserve(static_cast<std::size_t>(nnz));
  for (int c = 0; c < input.C(); ++c) {
    for (int i = 0; i < input.H(); ++i) {
      for (int j = 0; j < input.W(); ++j) {
        const float v = input(c, i, j);
        if (v != 0.0f) entries.push_back({c, i, j, v});
      }
    }
  }
  return SparseInput(SparseInput::Unchecked{}, input.C(), input.H(), input.W(),
                     std::move(entries));
}

Tensor3 decompress(const SparseInput& sparse) {
  Tensor3 out(sparse.C(), sparse.H(), sparse.W());
  for (const auto& e : sparse.entries()) out(e.c, e.i, e.j) = e.value;
  return out;
}

PackedKernel pack_kernel(const Kernel4& kernel) {
  const int K = kernel.K(), C = kernel.C(), R = kernel.R(), S = kernel.S();
  std::vector<float> data(kernel.size());
  std::size_t n = 0;
  for (int c = 0; c < C; ++c)
    for (int r = 0; r < R; ++r)
      for (int s = 0; s < S; ++s)
        for (int k = 0; k < K; ++k) data[n++] = kernel(k, c, r, s);
  return PackedKernel(K, C, R, S, std::move(data));
}

Kernel4 unpack_kernel(const PackedKernel& packed) {
  Kernel4 kernel(packed.K(), packed.C(), packed.R(), packed.S());
  const auto data = packed.data();
  for (int k = 0; k < packed.K(); ++k)
    for (int c = 0; c < packed.C(); ++c)
      for (int r = 0; r < packed.R(); ++r)
        for (int s = 0; s < packed.S(); ++s) kernel(k, c, r, s) = data[packed.index(c, r, s, k)];
  return kernel;
}

void check_isc_shapes(const SparseInput& sparse, const PackedKernel& packed, const ConvParams& p) {
  p.validate();
  if (sparse.C() != p.C || sparse.H() != p.H_in || sparse.W() != p.W_in) {
    throw ShapeError("sparse input extents do not match " + p.to_string());
  }
  if (packed.K() != p.K || packed.C() != p.C || packed.R() != p.R || packed.S() != p.S) {
    throw ShapeError("packed kernel extents do not match " + p.to_string());
  }
}

std::uint64_t isc_scatter(const SparseInput& sparse, const PackedKernel& packed,
                          const ConvParams& p, Accumulator& acc, int threads) {
  check_isc_shapes(sparse, packed, p);
  const auto [H_out, W_out] = output_dims(p);
  if (acc.H_out() != H_out || acc.W_out() != W_out || acc.K() != p.K) {
    throw ShapeError("accumulator extents do not match " + p.to_string());
  }

  const int K = p.K, R = p.R, S = p.S, T = p.T;
  const float* w = packed.data().data();
  float* a = acc.data().data();
  const auto entries = sparse.entries();

  std::atomic<std::uint64_t> total{0};
  detail::parallel_ranges(H_out, threads, [&](int row_lo, int row_hi) {
    std::uint64_t count = 0;
    for (const SparseEntry& e : entries) {
      const int ni = e.i + p.P;
      const int nj = e.j + p.P;
      const TapRange rr = taps(ni, R, T, row_lo, row_hi);
      if (rr.first > rr.last) continue;
      const TapRange ss = taps(nj, S, T, 0, W_out);
      if (ss.first > ss.last) continue;
      const float* w_c = w + static_cast<std::size_t>(e.c) * R * S * K;
      for (int r = rr.first; r <= rr.last; r += T) {
        const int oi = (ni - r) / T;
        for (int s = ss.first; s <= ss.last; s += T) {
          const int oj = (nj - s) / T;
          axpy(K, e.value, w_c + (static_cast<std::size_t>(r) * S + s) * K,
               a + (static_cast<std::size_t>(oi) * W_out + oj) * K);
          count += static_cast<std::uint64_t>(K);
        }
      }
    }
    total.fetch_add(count, std::memory_order_relaxed);
  });
  return total.load();
}

Tensor3 transpose_acc(const Accumulator& acc) {
  const int H = acc.H_out(), W = acc.W_out(), K = acc.K();
  Tensor3 out(K, H, W);
  const float* a = acc.data().data();
  float* o = out.data().data();
  const std::size_t plane = static_cast<std::size_t>(H) * W;
  for (std::size_t q = 0; q < plane; ++q) {
    const float* src = a + q * K;
    for (int k = 0; k < K; ++k) o[k * plane + q] = src[k];
  }
  return out;
}

Accumulator to_accumulator(const Tensor3& t) {
  const int K = t.C(), H = t.H(), W = t.W();
  Accumulator acc(H, W, K);
  const float* src = t.data().data();
  float* a = acc.data().data();
  const std::size_t plane = static_cast<std::size_t>(H) * W;
  for (int k = 0; k < K; ++k)
    for (std::size_t q = 0; q < plane; ++q) a[q * K + k] = src[k * plane + q];
  return acc;
}

Tensor3 isc_conv(const SparseInput& sparse, const PackedKernel& packed, const ConvParams& p,
                 IscCounters* counters, int threads) {
  check_isc_shapes(sparse, packed, p);
  const auto [H_out, W_out] = output_dims(p);
  Accumulator acc(H_out, W_out, p.K);
  const std::uint64_t macs = isc_scatter(sparse, packed, p, acc, threads);
  Tensor3 out = transpose_acc(acc);
  if (counters != nullptr) {
    const auto volume = static_cast<std::uint64_t>(acc.data().size());
    counters->macs = macs;
    counters->zero_init_writes = volume;
    counters->output_writes = volume;
  }
  return out;
}

}  // namespace isconv
