#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace corpuskit {

// Applies fn(i) for i in [0, n) across up to `jobs` threads and returns the
// results indexed by i, so the output is identical for any thread count.
template <typename Fn>
auto parallel_map(std::size_t n, unsigned jobs, Fn&& fn)
    -> std::vector<decltype(fn(std::size_t{0}))> {
  using R = decltype(fn(std::size_t{0}));
  std::vector<R> results(n);
  if (n == 0) return results;
  unsigned workers = jobs == 0 ? std::thread::hardware_concurrency() : jobs;
  if (workers == 0) workers = 1;
  if (workers == 1 || n == 1) {
    for (std::size_t i = 0; i < n; ++i) results[i] = fn(i);
    return results;
  }
  if (workers > n) workers = static_cast<unsigned>(n);
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) results[i] = fn(i);
    });
  }
  for (auto& t : threads) t.join();
  return results;
}

}  // namespace corpuskit
