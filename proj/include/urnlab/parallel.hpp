#pragma once

#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace urnlab {

// --threads flag, URNLAB_THREADS env var, then 1.
inline int default_threads() {
  if (const char *env = std::getenv("URNLAB_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  return 1;
}

// Static block partition of [0, n).  Each index is processed exactly once
// and owns its RNG stream, so the result is independent of thread count.
template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn &&fn) {
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const std::size_t nt = std::min<std::size_t>(threads, n);
  std::vector<std::thread> pool;
  pool.reserve(nt);
  for (std::size_t w = 0; w < nt; ++w) {
    const std::size_t lo = n * w / nt;
    const std::size_t hi = n * (w + 1) / nt;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto &t : pool) t.join();
}

}  // namespace urnlab
