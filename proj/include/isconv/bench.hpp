#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "isconv/tensor.hpp"

namespace isconv::bench {

enum class Algo { direct, gemm, isc };

std::string_view to_string(Algo algo);
/// Throws ValidationError on an unknown name.
Algo parse_algo(std::string_view name);
/// Comma-separated list, e.g. "direct,gemm,isc".
std::vector<Algo> parse_algo_list(std::string_view list);

/// One row of a layer-spec file.
struct LayerSpec {
  std::string name;
  ConvParams params;
  double sparsity = 0.0;  // target fraction of zero inputs

  void validate() const;
};

/// Header line of the layer-spec CSV format.
inline constexpr std::string_view kLayerSpecHeader = "name,C,H,W,K,R,S,P,T,sparsity";

/// Parses the layer-spec CSV format. Throws ParseError (with line number and
/// field name) on malformed text and ValidationError on out-of-range values.
std::vector<LayerSpec> parse_layer_specs(std::istream& in);
std::vector<LayerSpec> parse_layer_specs(std::string_view text);

/// The ten bundled network layers (LeNet, AlexNet on CIFAR-10 and ImageNet, GoogLeNet).
std::string_view default_layer_specs_csv();
std::vector<LayerSpec> default_layer_specs();

/// C x H_in x W_in tensor with exactly round((1 - sparsity) * C*H_in*W_in)
/// nonzeros at seeded uniformly shuffled positions. Nonzero values are
/// uniform in (0, 1], like post-ReLU activations.
Tensor3 gen_sparse_input(std::uint64_t seed, const ConvParams& p, double sparsity);

/// K x C x R x S weights uniform in [-1, 1), seeded.
Kernel4 gen_kernel(std::uint64_t seed, const ConvParams& p);

struct BenchRecord {
  std::string layer;
  Algo algo = Algo::direct;
  double sparsity_target = 0.0;
  double sparsity_measured = 0.0;
  int reps = 0;     // 0 for verification-only rows
  int warmups = 0;
  int threads = 1;
  double time_min_ms = 0.0;
  double time_median_ms = 0.0;
  double time_mean_ms = 0.0;
  std::optional<double> compress_ms;      // isc only
  std::uint64_t dense_macs = 0;
  std::uint64_t effective_macs = 0;       // exact count over the generated input
  std::optional<double> speedup_vs_gemm;  // gemm median / this median
  std::optional<std::string> error;       // set when the row failed

  bool timed() const noexcept { return reps > 0; }
};

struct RunOptions {
  int reps = 30;
  int warmups = 3;
  std::uint64_t seed = 42;
  int threads = 1;
};

/// Generates the input and kernel, checks `algo` against direct_conv once
/// (rel 1e-4, abs 1e-6), then times `opts.reps` runs after `opts.warmups`
/// untimed ones. For isc, compress and pack_kernel happen outside the timed
/// region; compress is timed separately. Throws CorrectnessError on a
/// mismatch and MeasurementError on a non-positive clock reading.
BenchRecord time_layer(const LayerSpec& spec, Algo algo, const RunOptions& opts);

/// The correctness half of time_layer without any timing: reps = 0 and all
/// time fields zero.
BenchRecord verify_layer(const LayerSpec& spec, Algo algo, std::uint64_t seed, int threads = 1);

/// One record per (spec, algo) in input order. The gemm record of a spec is
/// produced before the others so speedup_vs_gemm can be filled in. A failing
/// row carries `error` and the suite moves on.
std::vector<BenchRecord> run_suite(std::span<const LayerSpec> specs, std::span<const Algo> algos,
                                   const RunOptions& opts, bool verify_only = false);

inline constexpr std::string_view kReportHeader =
    "layer,algo,sparsity_target,sparsity_measured,reps,threads,time_min_ms,time_median_ms,"
    "time_mean_ms,compress_ms,dense_macs,effective_macs,speedup_vs_gemm";

/// Header plus one line per record.
void write_csv(std::ostream& out, std::span<const BenchRecord> records);
std::string to_csv(std::span<const BenchRecord> records);

}  // namespace isconv::bench
