#pragma once

// Range-splitting helper. Work is cut into contiguous chunks; callers merge
// per-chunk results by chunk index, so output never depends on scheduling.

#include <algorithm>
#include <cstdint>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace cobase {

struct Options {
  std::uint64_t cap = 2'000'000;
  unsigned threads = 0;  // 0: hardware concurrency
  std::uint64_t seed = 1;
};

inline unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

inline std::size_t chunk_count(std::uint64_t count, unsigned threads) {
  const std::uint64_t min_chunk = 4096;
  return static_cast<std::size_t>(std::min<std::uint64_t>(
      resolve_threads(threads), std::max<std::uint64_t>(1, count / min_chunk)));
}

// Calls fn(chunk, begin, end) for chunk_count(count, threads) contiguous
// chunks covering [0, count).
inline void parallel_chunks(
    std::uint64_t count, unsigned threads,
    const std::function<void(std::size_t, std::uint64_t, std::uint64_t)>& fn) {
  const std::size_t chunks = chunk_count(count, threads);
  if (chunks <= 1) {
    fn(0, 0, count);
    return;
  }
  const std::uint64_t step = (count + chunks - 1) / chunks;
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(chunks);
  for (std::size_t c = 0; c < chunks; ++c) {
    pool.emplace_back([&, c] {
      try {
        const std::uint64_t b = c * step, e = std::min(count, b + step);
        if (b < e) fn(c, b, e);
      } catch (...) {
        errors[c] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace cobase
