#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace heis {

// Process-wide worker count for the helpers below.  Set once from the CLI;
// results never depend on it, only wall time does.
int worker_count();
void set_worker_count(int n);

namespace detail {

inline int& worker_count_storage() {
  static int n = []{
    unsigned hw = std::thread::hardware_concurrency();
    return static_cast<int>(hw == 0 ? 1 : std::min(hw, 4u));
  }();
  return n;
}

// Runs fn(chunk_id) for chunk_id in [0, nchunks) across workers.  Chunk
// boundaries are fixed by nchunks alone, so any per-chunk output is
// independent of scheduling.
inline void run_chunks(std::int64_t nchunks, const std::function<void(std::int64_t)>& fn) {
  const int workers = std::min<std::int64_t>(worker_count_storage(), std::max<std::int64_t>(nchunks, 1));
  if (workers <= 1 || nchunks <= 1) {
    for (std::int64_t c = 0; c < nchunks; ++c) fn(c);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::int64_t c = next.fetch_add(1);
        if (c >= nchunks) return;
        fn(c);
      }
    });
  }
  for (auto& th : pool) th.join();
}

} // namespace detail

inline int worker_count() { return detail::worker_count_storage(); }
inline void set_worker_count(int n) { detail::worker_count_storage() = std::max(1, n); }

// parallel_for over [0, n): body(i) must only write state owned by index i.
inline void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& body) {
  if (n <= 0) return;
  const std::int64_t nchunks = std::min<std::int64_t>(n, 1024);
  const std::int64_t step = (n + nchunks - 1) / nchunks;
  detail::run_chunks(nchunks, [&](std::int64_t c) {
    const std::int64_t b = c * step;
    const std::int64_t e = std::min(n, b + step);
    for (std::int64_t i = b; i < e; ++i) body(i);
  });
}

// Deterministic sum reduction: indices are split into a fixed number of
// chunks (independent of worker count); each chunk accumulates in index
// order and chunk sums are combined in chunk order.
inline double parallel_sum(std::int64_t n, const std::function<double(std::int64_t)>& term) {
  if (n <= 0) return 0.0;
  const std::int64_t nchunks = std::min<std::int64_t>(n, 1024);
  const std::int64_t step = (n + nchunks - 1) / nchunks;
  std::vector<double> partial(static_cast<std::size_t>(nchunks), 0.0);
  detail::run_chunks(nchunks, [&](std::int64_t c) {
    const std::int64_t b = c * step;
    const std::int64_t e = std::min(n, b + step);
    double acc = 0.0;
    for (std::int64_t i = b; i < e; ++i) acc += term(i);
    partial[static_cast<std::size_t>(c)] = acc;
  });
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

} // namespace heis
