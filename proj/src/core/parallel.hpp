#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace otoclab {

/// Runs fn(i) for i in [0, count) on up to `workers` threads. Callers write
/// results into pre-indexed slots, so output order is independent of the
/// worker count.
template <typename Fn>
void parallel_for(std::size_t count, int workers, Fn&& fn) {
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto body = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  int spawn = std::min<int>(workers, static_cast<int>(count));
  pool.reserve(spawn);
  for (int w = 0; w < spawn; ++w) pool.emplace_back(body);
  for (auto& th : pool) th.join();
}

}  // namespace otoclab
