#include "vmv/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <exception>
#include <memory>
#include <mutex>
#include <thread>
#include <vector>

namespace vmv {
namespace {

thread_local bool in_worker = false;

class Pool {
 public:
  explicit Pool(std::size_t workers) {
    for (std::size_t w = 0; w < workers; ++w) threads_.emplace_back([this] { loop(); });
  }

  ~Pool() {
    {
      std::lock_guard lock(mu_);
      stop_ = true;
    }
    cv_.notify_all();
    for (auto& t : threads_) t.join();
  }

  std::size_t workers() const { return threads_.size(); }

  void run(std::size_t n, const std::function<void(std::size_t)>& body, std::size_t grain) {
    std::unique_lock lock(mu_);
    body_ = &body;
    n_ = n;
    grain_ = std::max<std::size_t>(grain, 1);
    next_.store(0);
    error_ = nullptr;
    pending_ = threads_.size();
    ++generation_;
    lock.unlock();
    cv_.notify_all();

    drain();

    lock.lock();
    done_cv_.wait(lock, [this] { return pending_ == 0; });
    body_ = nullptr;
    if (error_) std::rethrow_exception(error_);
  }

 private:
  void drain() {
    const bool was_worker = in_worker;
    in_worker = true;
    try {
      for (;;) {
        const std::size_t begin = next_.fetch_add(grain_);
        if (begin >= n_) break;
        const std::size_t end = std::min(n_, begin + grain_);
        for (std::size_t i = begin; i < end; ++i) (*body_)(i);
      }
    } catch (...) {
      std::lock_guard lock(mu_);
      if (!error_) error_ = std::current_exception();
      next_.store(n_);
    }
    in_worker = was_worker;
  }

  void loop() {
    std::size_t seen = 0;
    for (;;) {
      {
        std::unique_lock lock(mu_);
        cv_.wait(lock, [&] { return stop_ || generation_ != seen; });
        if (stop_) return;
        seen = generation_;
      }
      drain();
      {
        std::lock_guard lock(mu_);
        --pending_;
      }
      done_cv_.notify_all();
    }
  }

  std::vector<std::thread> threads_;
  std::mutex mu_;
  std::condition_variable cv_;
  std::condition_variable done_cv_;
  bool stop_ = false;
  std::size_t generation_ = 0;
  std::size_t pending_ = 0;
  const std::function<void(std::size_t)>* body_ = nullptr;
  std::size_t n_ = 0;
  std::size_t grain_ = 1;
  std::atomic<std::size_t> next_{0};
  std::exception_ptr error_;
};

std::mutex run_mu;     // serializes top-level loops and pool replacement
std::mutex config_mu;  // guards `configured`
std::size_t configured = 0;
std::unique_ptr<Pool> pool;

std::size_t resolve(std::size_t n) {
  if (n != 0) return n;
  return std::max<unsigned>(1, std::thread::hardware_concurrency());
}

}  // namespace

void set_thread_count(std::size_t n) {
  std::lock_guard run_lock(run_mu);
  std::lock_guard lock(config_mu);
  configured = n;
  pool.reset();
}

std::size_t thread_count() {
  std::lock_guard lock(config_mu);
  return resolve(configured);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, std::size_t grain) {
  if (n == 0) return;
  const std::size_t threads = in_worker ? 1 : thread_count();
  if (threads <= 1 || n <= grain) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::lock_guard run_lock(run_mu);
  // the caller participates, so the pool holds threads - 1 workers
  if (!pool || pool->workers() != threads - 1) pool = std::make_unique<Pool>(threads - 1);
  pool->run(n, body, grain);
}

}  // namespace vmv
