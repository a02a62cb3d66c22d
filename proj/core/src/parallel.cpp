#include "inflap/parallel.hpp"

#include <algorithm>
#include <condition_variable>
#include <cstdlib>
#include <mutex>
#include <thread>
#include <vector>

namespace inflap {

int worker_count() {
  static const int count = [] {
    int n = 0;
    if (const char* env = std::getenv("INFLAP_THREADS")) {
      n = std::atoi(env);
    }
    if (n <= 0) {
      n = std::min(4u, std::max(1u, std::thread::hardware_concurrency()));
    }
    return std::min(n, 64);
  }();
  return count;
}

namespace {

class Pool {
 public:
  static Pool& instance() {
    static Pool pool(worker_count());
    return pool;
  }

  void run(std::size_t n,
           const std::function<void(std::size_t, std::size_t, int)>& fn) {
    const int workers = static_cast<int>(threads_.size()) + 1;
    const std::size_t chunk = (n + workers - 1) / workers;
    {
      std::unique_lock lock(mu_);
      task_ = &fn;
      task_n_ = n;
      chunk_ = chunk;
      ++generation_;
      pending_ = static_cast<int>(threads_.size());
    }
    cv_start_.notify_all();
    // chunk 0 runs on the calling thread
    const std::size_t end0 = std::min(chunk, n);
    if (end0 > 0) fn(0, end0, 0);
    std::unique_lock lock(mu_);
    cv_done_.wait(lock, [this] { return pending_ == 0; });
    task_ = nullptr;
  }

 private:
  explicit Pool(int workers) {
    for (int t = 1; t < workers; ++t) {
      threads_.emplace_back([this, t] { worker_loop(t); });
    }
  }

  ~Pool() {
    {
      std::unique_lock lock(mu_);
      stop_ = true;
      ++generation_;
    }
    cv_start_.notify_all();
    for (auto& th : threads_) th.join();
  }

  void worker_loop(int id) {
    std::size_t seen = 0;
    for (;;) {
      const std::function<void(std::size_t, std::size_t, int)>* task;
      std::size_t n, chunk;
      {
        std::unique_lock lock(mu_);
        cv_start_.wait(lock, [&] { return generation_ != seen; });
        seen = generation_;
        if (stop_) return;
        task = task_;
        n = task_n_;
        chunk = chunk_;
      }
      const std::size_t begin = std::min(chunk * id, n);
      const std::size_t end = std::min(begin + chunk, n);
      if (task && end > begin) (*task)(begin, end, id);
      {
        std::unique_lock lock(mu_);
        if (--pending_ == 0) cv_done_.notify_one();
      }
    }
  }

  std::vector<std::thread> threads_;
  std::mutex mu_;
  std::condition_variable cv_start_;
  std::condition_variable cv_done_;
  const std::function<void(std::size_t, std::size_t, int)>* task_ = nullptr;
  std::size_t task_n_ = 0;
  std::size_t chunk_ = 0;
  std::size_t generation_ = 0;
  int pending_ = 0;
  bool stop_ = false;
};

}  // namespace

void parallel_chunks(
    std::size_t n,
    const std::function<void(std::size_t, std::size_t, int)>& fn) {
  if (worker_count() == 1 || n < 1024) {
    if (n > 0) fn(0, n, 0);
    return;
  }
  Pool::instance().run(n, fn);
}

}  // namespace inflap
