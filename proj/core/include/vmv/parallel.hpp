#pragma once

#include <cstddef>
#include <functional>

namespace vmv {

/// Caps worker concurrency for every parallel loop in the library.
/// 0 selects std::thread::hardware_concurrency().
void set_thread_count(std::size_t n);
std::size_t thread_count();

/// Runs body(i) for i in [0, n). Indices are handed out dynamically in blocks
/// of `grain`; callers must make body(i) independent of every other index so
/// results do not depend on scheduling. Calls made from inside a worker run
/// serially on that worker.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  std::size_t grain = 1);

/// RAII override of the thread count.
class ScopedThreadCount {
 public:
  explicit ScopedThreadCount(std::size_t n) : saved_(thread_count()) { set_thread_count(n); }
  ~ScopedThreadCount() { set_thread_count(saved_); }
  ScopedThreadCount(const ScopedThreadCount&) = delete;
  ScopedThreadCount& operator=(const ScopedThreadCount&) = delete;

 private:
  std::size_t saved_;
};

}  // namespace vmv
