#pragma once

#include <cstddef>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace sfrec {

inline int worker_count() {
  if (const char* env = std::getenv("SFREC_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  unsigned n = std::thread::hardware_concurrency();
  return n > 0 ? int(n) : 1;
}

// Runs fn(begin, end) over [0, n) split into contiguous ranges.
inline void parallel_ranges(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn) {
  int workers = worker_count();
  if (n == 0) return;
  if (workers <= 1 || n < 256) {
    fn(0, n);
    return;
  }
  std::size_t per = (n + workers - 1) / workers;
  std::vector<std::thread> threads;
  for (int w = 0; w < workers; ++w) {
    std::size_t b = std::size_t(w) * per;
    if (b >= n) break;
    std::size_t e = std::min(n, b + per);
    threads.emplace_back([&fn, b, e] { fn(b, e); });
  }
  for (auto& t : threads) t.join();
}

inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  parallel_ranges(n, [&fn](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) fn(i);
  });
}

// Deterministic map-reduce: items are accumulated into fixed-size chunks that
// are combined sequentially, so the floating-point result is identical for
// any worker count.
template <class Acc>
Acc parallel_map_reduce(std::size_t n, std::size_t chunk_size, const Acc& zero,
                        const std::function<void(std::size_t, Acc&)>& accumulate,
                        const std::function<void(Acc&, const Acc&)>& combine) {
  if (n == 0) return zero;
  std::size_t chunks = (n + chunk_size - 1) / chunk_size;
  std::vector<Acc> partial(chunks, zero);
  parallel_for(chunks, [&](std::size_t c) {
    std::size_t b = c * chunk_size, e = std::min(n, b + chunk_size);
    for (std::size_t i = b; i < e; ++i) accumulate(i, partial[c]);
  });
  Acc total = zero;
  for (std::size_t c = 0; c < chunks; ++c) combine(total, partial[c]);
  return total;
}

}  // namespace sfrec
