#include <algorithm>
#include <chrono>
#include <functional>
#include <map>
#include <numeric>

#include "isconv/bench.hpp"
#include "isconv/errors.hpp"
#include "isconv/gemm_conv.hpp"
#include "isconv/isc.hpp"
#include "isconv/macs.hpp"
#include "isconv/reference.hpp"

namespace isconv::bench {

namespace {

constexpr Tolerance kGate{1e-4, 1e-6};

struct Sample {
  double min_ms;
  double median_ms;
  double mean_ms;
};

// Volatile sink so the optimizer cannot drop a timed call whose result is unused.
volatile float g_sink = 0.0f;

void consume(const Tensor3& t) {
  if (t.size() > 0) g_sink = t.data()[0];
}

Sample measure(int reps, int warmups, const std::function<void()>& body) {
  using clock = std::chrono::steady_clock;
  for (int w = 0; w < warmups; ++w) body();
  std::vector<double> ms(static_cast<std::size_t>(reps));
  for (auto& m : ms) {
    const auto start = clock::now();
    body();
    const auto stop = clock::now();
    m = std::chrono::duration<double, std::milli>(stop - start).count();
    if (!(m > 0.0)) throw MeasurementError("non-positive elapsed time from steady_clock");
  }
  std::sort(ms.begin(), ms.end());
  const std::size_t mid = ms.size() / 2;
  const double median = ms.size() % 2 == 1 ? ms[mid] : 0.5 * (ms[mid - 1] + ms[mid]);
  const double mean = std::accumulate(ms.begin(), ms.end(), 0.0) / static_cast<double>(ms.size());
  return {ms.front(), median, mean};
}

struct Instance {
  Tensor3 input;
  Kernel4 kernel;
  SparseInput sparse;
  Tensor3 reference;
};

Instance make_instance(const LayerSpec& spec, std::uint64_t seed, int threads) {
  spec.validate();
  Tensor3 input = gen_sparse_input(seed, spec.params, spec.sparsity);
  Kernel4 kernel = gen_kernel(seed, spec.params);
  SparseInput sparse = compress(input);
  Tensor3 reference = direct_conv(input, kernel, spec.params, threads);
  return {std::move(input), std::move(kernel), std::move(sparse), std::move(reference)};
}

BenchRecord base_record(const LayerSpec& spec, Algo algo, const Instance& inst, int threads) {
  BenchRecord rec;
  rec.layer = spec.name;
  rec.algo = algo;
  rec.sparsity_target = spec.sparsity;
  rec.sparsity_measured = measure_sparsity(inst.input);
  rec.threads = threads;
  rec.dense_macs = dense_macs(spec.params);
  rec.effective_macs = effective_macs(inst.sparse, spec.params).exact;
  return rec;
}

void gate(const LayerSpec& spec, Algo algo, const Tensor3& reference, const Tensor3& actual) {
  if (const auto bad = first_mismatch(reference, actual, kGate)) {
    throw CorrectnessError(std::string(to_string(algo)) + " disagrees with direct_conv on " +
                           spec.name + " at " + bad->to_string());
  }
}

// Runs `algo` once, checks it against the reference and, for isc, checks the
// instrumented MAC count against the independent tally.
void verify_once(const LayerSpec& spec, Algo algo, const Instance& inst, const PackedKernel& packed,
                 std::uint64_t expected_macs, int threads) {
  switch (algo) {
    case Algo::direct:
      gate(spec, algo, inst.reference, direct_conv(inst.input, inst.kernel, spec.params, threads));
      break;
    case Algo::gemm:
      gate(spec, algo, inst.reference, gemm_conv(inst.input, inst.kernel, spec.params, threads));
      break;
    case Algo::isc: {
      IscCounters counters;
      const Tensor3 out = isc_conv(inst.sparse, packed, spec.params, &counters, threads);
      gate(spec, algo, inst.reference, out);
      if (counters.macs != expected_macs) {
        throw CorrectnessError("isc executed " + std::to_string(counters.macs) +
                               " multiply-accumulates on " + spec.name + ", expected " +
                               std::to_string(expected_macs));
      }
      break;
    }
  }
}

}  // namespace

std::string_view to_string(Algo algo) {
  switch (algo) {
    case Algo::direct: return "direct";
    case Algo::gemm: return "gemm";
    case Algo::isc: return "isc";
  }
  return "unknown";
}

Algo parse_algo(std::string_view name) {
  if (name == "direct") return Algo::direct;
  if (name == "gemm") return Algo::gemm;
  if (name == "isc") return Algo::isc;
  throw ValidationError("unknown algorithm '" + std::string(name) + "' (expected direct, gemm or isc)");
}

std::vector<Algo> parse_algo_list(std::string_view list) {
  std::vector<Algo> algos;
  std::size_t start = 0;
  while (start <= list.size()) {
    const auto comma = list.find(',', start);
    const auto item = list.substr(start, comma == std::string_view::npos ? list.npos : comma - start);
    const Algo algo = parse_algo(item);
    if (std::find(algos.begin(), algos.end(), algo) != algos.end()) {
      throw ValidationError("algorithm '" + std::string(item) + "' listed twice");
    }
    algos.push_back(algo);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return algos;
}

BenchRecord verify_layer(const LayerSpec& spec, Algo algo, std::uint64_t seed, int threads) {
  const Instance inst = make_instance(spec, seed, threads);
  BenchRecord rec = base_record(spec, algo, inst, threads);
  const PackedKernel packed = algo == Algo::isc ? pack_kernel(inst.kernel) : PackedKernel{};
  verify_once(spec, algo, inst, packed, rec.effective_macs, threads);
  return rec;
}

BenchRecord time_layer(const LayerSpec& spec, Algo algo, const RunOptions& opts) {
  if (opts.reps < 1) throw ValidationError("reps must be >= 1");
  if (opts.warmups < 0) throw ValidationError("warmups must be >= 0");
  const int threads = std::max(1, opts.threads);

  const Instance inst = make_instance(spec, opts.seed, threads);
  BenchRecord rec = base_record(spec, algo, inst, threads);
  rec.reps = opts.reps;
  rec.warmups = opts.warmups;

  const ConvParams& p = spec.params;
  Sample sample{};
  switch (algo) {
    case Algo::direct:
      verify_once(spec, algo, inst, {}, rec.effective_macs, threads);
      sample = measure(opts.reps, opts.warmups,
                       [&] { consume(direct_conv(inst.input, inst.kernel, p, threads)); });
      break;
    case Algo::gemm:
      verify_once(spec, algo, inst, {}, rec.effective_macs, threads);
      sample = measure(opts.reps, opts.warmups,
                       [&] { consume(gemm_conv(inst.input, inst.kernel, p, threads)); });
      break;
    case Algo::isc: {
      const PackedKernel packed = pack_kernel(inst.kernel);
      verify_once(spec, algo, inst, packed, rec.effective_macs, threads);
      const Sample compress_time = measure(opts.reps, opts.warmups, [&] {
        const SparseInput s = compress(inst.input);
        g_sink = static_cast<float>(s.nnz());
      });
      rec.compress_ms = compress_time.median_ms;
      sample = measure(opts.reps, opts.warmups,
                       [&] { consume(isc_conv(inst.sparse, packed, p, nullptr, threads)); });
      break;
    }
  }
  rec.time_min_ms = sample.min_ms;
  rec.time_median_ms = sample.median_ms;
  rec.time_mean_ms = sample.mean_ms;
  return rec;
}

std::vector<BenchRecord> run_suite(std::span<const LayerSpec> specs, std::span<const Algo> algos,
                                   const RunOptions& opts, bool verify_only) {
  if (specs.empty()) throw ValidationError("run_suite needs at least one layer spec");
  if (algos.empty()) throw ValidationError("run_suite needs at least one algorithm");

  std::vector<BenchRecord> out;
  out.reserve(specs.size() * algos.size());

  for (const LayerSpec& spec : specs) {
    std::vector<Algo> order(algos.begin(), algos.end());
    std::stable_partition(order.begin(), order.end(), [](Algo a) { return a == Algo::gemm; });

    std::map<Algo, BenchRecord> done;
    for (Algo algo : order) {
      try {
        done[algo] = verify_only ? verify_layer(spec, algo, opts.seed, opts.threads)
                                 : time_layer(spec, algo, opts);
      } catch (const std::exception& e) {
        BenchRecord failed;
        failed.layer = spec.name;
        failed.algo = algo;
        failed.sparsity_target = spec.sparsity;
        failed.threads = opts.threads;
        failed.error = e.what();
        done[algo] = std::move(failed);
      }
    }

    const auto gemm = done.find(Algo::gemm);
    if (!verify_only && gemm != done.end() && !gemm->second.error) {
      const double baseline = gemm->second.time_median_ms;
      for (auto& [algo, rec] : done) {
        if (!rec.error) rec.speedup_vs_gemm = baseline / rec.time_median_ms;
      }
    }
    for (Algo algo : algos) out.push_back(std::move(done[algo]));
  }
  return out;
}

}  // namespace isconv::bench
