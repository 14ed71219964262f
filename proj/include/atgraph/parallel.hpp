#pragma once

#include <cstdint>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace atgraph {

/// Runs fn(i) for i in [0, count) on a small worker pool. Each index writes
/// only to its own output slot and derives its own rng stream, so the result
/// does not depend on the number of workers.
inline void for_each_index(std::int64_t count,
                           const std::function<void(std::int64_t)>& fn,
                           unsigned max_workers = 0) {
  if (count <= 0) return;
  unsigned hw = max_workers ? max_workers : std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  const auto workers =
      static_cast<std::int64_t>(hw) < count ? static_cast<std::int64_t>(hw) : count;
  if (workers <= 1) {
    for (std::int64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  for (std::int64_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      try {
        for (std::int64_t i = w; i < count; i += workers) fn(i);
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace atgraph
