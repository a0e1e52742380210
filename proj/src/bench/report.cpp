#include <cstdio>
#include <ostream>
#include <sstream>

#include "isconv/bench.hpp"

namespace isconv::bench {

namespace {

std::string fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

}  // namespace

void write_csv(std::ostream& out, std::span<const BenchRecord> records) {
  out << kReportHeader << '\n';
  for (const BenchRecord& r : records) {
    out << r.layer << ',' << to_string(r.algo) << ',' << fixed(r.sparsity_target, 4) << ',';
    if (r.error) {
      // Failed rows keep their identity columns; every measured column reads "error".
      for (int col = 0; col < 10; ++col) out << "error" << (col < 9 ? "," : "\n");
      continue;
    }
    out << fixed(r.sparsity_measured, 6) << ',' << r.reps << ',' << r.threads << ',';
    if (r.timed()) {
      out << fixed(r.time_min_ms, 3) << ',' << fixed(r.time_median_ms, 3) << ','
          << fixed(r.time_mean_ms, 3) << ',';
    } else {
      out << ",,,";
    }
    out << (r.compress_ms ? fixed(*r.compress_ms, 3) : "") << ',' << r.dense_macs << ','
        << r.effective_macs << ',' << (r.speedup_vs_gemm ? fixed(*r.speedup_vs_gemm, 3) : "")
        << '\n';
  }
}

std::string to_csv(std::span<const BenchRecord> records) {
  std::ostringstream os;
  write_csv(os, records);
  return os.str();
}

}  // namespace isconv::bench
