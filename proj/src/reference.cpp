#include "isconv/reference.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "isconv/errors.hpp"
#include "parallel.hpp"

namespace isconv {

Tensor3 direct_conv(const Tensor3& input, const Kernel4& kernel, const ConvParams& p,
                    int threads) {
  check_shapes(input, kernel, p);
  const auto [H_out, W_out] = output_dims(p);
  Tensor3 out(p.K, H_out, W_out);

  const float* in = input.data().data();
  const float* w = kernel.data().data();
  float* o = out.data().data();

  detail::parallel_ranges(p.K, threads, [&](int k_begin, int k_end) {
    for (int k = k_begin; k < k_end; ++k) {
      for (int oi = 0; oi < H_out; ++oi) {
        for (int oj = 0; oj < W_out; ++oj) {
          float acc = 0.0f;
          for (int c = 0; c < p.C; ++c) {
            for (int r = 0; r < p.R; ++r) {
              const int ii = oi * p.T + r - p.P;
              if (ii < 0 || ii >= p.H_in) continue;
              const float* in_row = in + (static_cast<std::size_t>(c) * p.H_in + ii) * p.W_in;
              const float* w_row = w + ((static_cast<std::size_t>(k) * p.C + c) * p.R + r) * p.S;
              for (int s = 0; s < p.S; ++s) {
                const int jj = oj * p.T + s - p.P;
                if (jj < 0 || jj >= p.W_in) continue;
                acc += w_row[s] * in_row[jj];
              }
            }
          }
          o[(static_cast<std::size_t>(k) * H_out + oi) * W_out + oj] = acc;
        }
      }
    }
  });
  return out;
}

Tensor3 relu(const Tensor3& t) {
  Tensor3 out = t;
  for (float& x : out.data()) x = std::max(0.0f, x);
  return out;
}

double measure_sparsity(const Tensor3& t) {
  if (t.size() == 0) return 1.0;
  const auto nonzeros = std::count_if(t.data().begin(), t.data().end(),
                                      [](float x) { return x != 0.0f; });
  return 1.0 - static_cast<double>(nonzeros) / static_cast<double>(t.size());
}

std::string Mismatch::to_string() const {
  std::ostringstream os;
  os.precision(9);
  os << "flat index " << flat_index << ": expected " << expected << ", got " << actual;
  return os.str();
}

std::optional<Mismatch> first_mismatch(const Tensor3& expected, const Tensor3& actual,
                                       Tolerance tol) {
  if (expected.C() != actual.C() || expected.H() != actual.H() || expected.W() != actual.W()) {
    throw ShapeError("cannot compare tensors of different extents");
  }
  const auto e = expected.data();
  const auto a = actual.data();
  for (std::size_t n = 0; n < e.size(); ++n) {
    const double diff = std::abs(static_cast<double>(a[n]) - e[n]);
    if (!(diff <= tol.abs + tol.rel * std::abs(static_cast<double>(e[n])))) {
      return Mismatch{n, e[n], a[n]};
    }
  }
  return std::nullopt;
}

}  // namespace isconv
