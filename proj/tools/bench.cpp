// Benchmark driver: times direct, im2col+GEMM and inverse sparse convolution
// on a set of layer shapes and writes one CSV row per (layer, algorithm).
//
//   bench --layers layers.csv --algos gemm,isc --reps 30 --warmups 3 --seed 42 --out report.csv
//   bench --verify-only
//
// Exit codes: 0 success, 1 correctness failure, 2 usage or parse error.

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>

#include "isconv/bench.hpp"
#include "isconv/errors.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCorrectness = 1;
constexpr int kExitUsage = 2;

}  // namespace

int main(int argc, char** argv) {
  using namespace isconv;

  CLI::App app{"Sparse convolution benchmark"};
  std::string layers_path;
  std::string algos_arg = "direct,gemm,isc";
  std::string out_path = "-";
  bench::RunOptions opts;
  bool verify_only = false;

  app.add_option("--layers", layers_path, "Layer-spec CSV (default: bundled network layers)")
      ->check(CLI::ExistingFile);
  app.add_option("--algos", algos_arg, "Comma-separated subset of direct,gemm,isc")
      ->capture_default_str();
  app.add_option("--reps", opts.reps, "Timed repetitions per layer")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--warmups", opts.warmups, "Untimed warmup runs per layer")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  app.add_option("--seed", opts.seed, "Seed for inputs and kernels")->capture_default_str();
  app.add_option("--threads", opts.threads, "Worker threads per kernel")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--out", out_path, "Output CSV path, '-' for stdout")->capture_default_str();
  app.add_flag("--verify-only", verify_only,
               "Check every algorithm against direct convolution without timing");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  std::vector<bench::LayerSpec> specs;
  std::vector<bench::Algo> algos;
  try {
    algos = bench::parse_algo_list(algos_arg);
    if (layers_path.empty()) {
      specs = bench::default_layer_specs();
    } else {
      std::ifstream in(layers_path);
      if (!in) throw ValidationError("cannot open " + layers_path);
      specs = bench::parse_layer_specs(in);
    }
    if (specs.empty()) throw ValidationError("no layers to run");
  } catch (const std::exception& e) {
    std::cerr << "bench: " << e.what() << '\n';
    return kExitUsage;
  }

  const auto records = bench::run_suite(specs, algos, opts, verify_only);

  int status = kExitOk;
  for (const auto& r : records) {
    if (r.error) {
      std::cerr << "bench: " << r.layer << " / " << bench::to_string(r.algo) << ": " << *r.error
                << '\n';
      status = kExitCorrectness;
    }
  }

  if (out_path == "-") {
    bench::write_csv(std::cout, records);
  } else {
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "bench: cannot write " << out_path << '\n';
      return kExitUsage;
    }
    bench::write_csv(out, records);
  }
  return status;
}
