#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace digitsieve {

// Runs body(chunk) for chunk in [0, chunks) on up to `threads` workers.
// Callers keep one result slot per chunk and reduce them in chunk order, so
// results do not depend on the thread count.
template <class Body>
void parallel_chunks(std::size_t chunks, unsigned threads, Body&& body) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(chunks)));
  if (threads <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) body(c);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t c = next++; c < chunks; c = next++) body(c);
    });
  }
}

}  // namespace digitsieve
