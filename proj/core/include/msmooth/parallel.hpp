#pragma once

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace msmooth {

/// Worker cap: MSMOOTH_THREADS if set, else hardware concurrency.
inline int worker_count() {
  static const int n = [] {
    if (const char* env = std::getenv("MSMOOTH_THREADS")) {
      int v = std::atoi(env);
      if (v >= 1) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
  }();
  return n;
}

/// Runs fn(begin..end) split into contiguous index blocks, one per worker.
/// fn must write only to its own output range; results are independent of
/// the partitioning, so the thread count never changes the answer.
template <typename Fn>
void parallel_for(int begin, int end, Fn&& fn) {
  const int n = end - begin;
  const int workers = std::min(worker_count(), std::max(1, n));
  if (workers <= 1 || n < 64) {
    for (int i = begin; i < end; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const int chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const int lo = begin + w * chunk;
    const int hi = std::min(end, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (int i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace msmooth
