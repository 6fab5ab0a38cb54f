#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace vlasov {

/// Splits [0, n) into `threads` contiguous chunks and calls f(chunk, begin, end)
/// for each one. Chunk boundaries depend only on (n, threads), so callers that
/// merge per-chunk results in chunk order stay deterministic.
template <class F>
void parallel_chunks(std::size_t n, std::size_t threads, F&& f) {
  threads = std::max<std::size_t>(1, std::min(threads, n == 0 ? 1 : n));
  if (threads == 1) {
    f(std::size_t{0}, std::size_t{0}, n);
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t c = 0; c < threads; ++c) {
      const std::size_t begin = n * c / threads;
      const std::size_t end = n * (c + 1) / threads;
      pool.emplace_back([&, c, begin, end] {
        try {
          f(c, begin, end);
        } catch (...) {
          errors[c] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace vlasov
