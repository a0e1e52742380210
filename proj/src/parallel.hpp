#pragma once

#include <algorithm>
#include <thread>
#include <vector>

namespace isconv::detail {

// Runs fn(begin, end) over a static split of [0, n) into at most `threads`
// contiguous chunks. The split depends only on (n, threads).
template <typename Fn>
void parallel_ranges(int n, int threads, Fn&& fn) {
  threads = std::clamp(threads, 1, std::max(n, 1));
  if (threads == 1) {
    fn(0, n);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(threads - 1);
  const int chunk = n / threads;
  const int extra = n % threads;
  int begin = 0;
  for (int t = 0; t < threads; ++t) {
    const int end = begin + chunk + (t < extra ? 1 : 0);
    if (t + 1 == threads) {
      fn(begin, end);
    } else {
      pool.emplace_back([&fn, begin, end] { fn(begin, end); });
    }
    begin = end;
  }
}

}  // namespace isconv::detail
