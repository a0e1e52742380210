#include "isconv/tensor.hpp"

#include <cmath>
#include <sstream>

#include "isconv/errors.hpp"

namespace isconv {

namespace {

std::size_t checked_volume(std::initializer_list<int> extents) {
  std::size_t n = 1;
  for (int e : extents) {
    if (e < 1) throw ValidationError("tensor extents must be >= 1");
    n *= static_cast<std::size_t>(e);
  }
  return n;
}

void check_finite(std::span<const float> data) {
  for (std::size_t n = 0; n < data.size(); ++n) {
    if (!std::isfinite(data[n])) {
      throw ValidationError("non-finite value at flat index " + std::to_string(n));
    }
  }
}

}  // namespace

void ConvParams::validate() const {
  if (C < 1 || H_in < 1 || W_in < 1 || K < 1 || R < 1 || S < 1 || T < 1) {
    throw ValidationError("C, H_in, W_in, K, R, S, T must be >= 1: " + to_string());
  }
  if (P < 0) throw ValidationError("P must be >= 0: " + to_string());
  if (R > H_in + 2 * P || S > W_in + 2 * P) {
    throw ValidationError("kernel does not fit in padded input: " + to_string());
  }
}

std::string ConvParams::to_string() const {
  std::ostringstream os;
  os << "{C=" << C << ", H_in=" << H_in << ", W_in=" << W_in << ", K=" << K << ", R=" << R
     << ", S=" << S << ", P=" << P << ", T=" << T << "}";
  return os.str();
}

OutputDims output_dims(const ConvParams& p) {
  p.validate();
  // validate() guarantees non-negative numerators, so integer division is floor.
  OutputDims d{(p.H_in + 2 * p.P - p.R) / p.T + 1, (p.W_in + 2 * p.P - p.S) / p.T + 1};
  if (d.H_out < 1 || d.W_out < 1) throw ValidationError("empty output: " + p.to_string());
  return d;
}

Tensor3::Tensor3(int C, int H, int W)
    : C_(C), H_(H), W_(W), data_(checked_volume({C, H, W}), 0.0f) {}

Tensor3::Tensor3(int C, int H, int W, std::vector<float> data)
    : C_(C), H_(H), W_(W), data_(std::move(data)) {
  if (data_.size() != checked_volume({C, H, W})) {
    throw ShapeError("Tensor3 data length " + std::to_string(data_.size()) + " != C*H*W");
  }
  check_finite(data_);
}

Kernel4::Kernel4(int K, int C, int R, int S)
    : K_(K), C_(C), R_(R), S_(S), data_(checked_volume({K, C, R, S}), 0.0f) {}

Kernel4::Kernel4(int K, int C, int R, int S, std::vector<float> data)
    : K_(K), C_(C), R_(R), S_(S), data_(std::move(data)) {
  if (data_.size() != checked_volume({K, C, R, S})) {
    throw ShapeError("Kernel4 data length " + std::to_string(data_.size()) + " != K*C*R*S");
  }
  check_finite(data_);
}

void check_input_shape(const Tensor3& input, const ConvParams& p) {
  p.validate();
  if (input.C() != p.C || input.H() != p.H_in || input.W() != p.W_in) {
    throw ShapeError("input is " + std::to_string(input.C()) + "x" + std::to_string(input.H()) +
                     "x" + std::to_string(input.W()) + ", params expect " + p.to_string());
  }
}

void check_shapes(const Tensor3& input, const Kernel4& kernel, const ConvParams& p) {
  check_input_shape(input, p);
  if (kernel.K() != p.K || kernel.C() != p.C || kernel.R() != p.R || kernel.S() != p.S) {
    throw ShapeError("kernel is " + std::to_string(kernel.K()) + "x" + std::to_string(kernel.C()) +
                     "x" + std::to_string(kernel.R()) + "x" + std::to_string(kernel.S()) +
                     ", params expect " + p.to_string());
  }
}

}  // namespace isconv
