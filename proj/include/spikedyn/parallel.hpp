// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <condition_variable>
#include <exception>
#include <cstddef>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace spikedyn {

// Fixed-size worker pool. parallel_for blocks until every index has run;
// work is split into contiguous chunks so results never depend on scheduling.
class ThreadPool {
public:
  explicit ThreadPool(unsigned threads = 0);
  ~ThreadPool();
  ThreadPool(const ThreadPool&) = delete;
  ThreadPool& operator=(const ThreadPool&) = delete;

  unsigned size() const noexcept { return nthreads_; }
  void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

private:
  void worker_loop();

  unsigned nthreads_;
  std::vector<std::thread> workers_;
  std::mutex mu_;
  std::condition_variable cv_;
  std::condition_variable done_cv_;
  const std::function<void(std::size_t)>* job_ = nullptr;
  std::size_t count_ = 0;
  std::size_t next_ = 0;
  std::size_t finished_ = 0;
  std::size_t generation_ = 0;
  bool stop_ = false;
  std::exception_ptr error_;
};

// Runs serially when pool is null.
void parallel_for(ThreadPool* pool, std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace spikedyn
