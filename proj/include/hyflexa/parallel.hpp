/*
 * Copyright 2026 the hyflexa authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <condition_variable>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

#include "hyflexa/errors.hpp"

namespace hyflexa {

/// Persistent pool running index-range jobs over static contiguous chunks.
///
/// Work item i is always executed exactly once and results are written to
/// caller-owned slots indexed by i, so the outcome is independent of the
/// worker count and of scheduling order. The calling thread processes chunk 0
/// itself; with one worker nothing is ever spawned.
class WorkerPool {
 public:
  explicit WorkerPool(int workers) : workers_(workers) {
    if (workers < 1) throw config_error("worker pool: need at least one worker");
    threads_.reserve(static_cast<std::size_t>(workers - 1));
    for (int w = 1; w < workers; ++w) {
      threads_.emplace_back([this, w] { worker_loop(w); });
    }
  }

  ~WorkerPool() {
    {
      std::unique_lock<std::mutex> lk(mu_);
      stop_ = true;
      ++generation_;
    }
    cv_start_.notify_all();
    for (auto& t : threads_) t.join();
  }

  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  int workers() const { return workers_; }

  /// Runs fn(i) for every i in [0, n). Blocks until all items finish.
  /// Exceptions from fn are collected and the first one is rethrown here.
  void for_range(int n, const std::function<void(int)>& fn) {
    if (n <= 0) return;
    if (workers_ == 1) {
      for (int i = 0; i < n; ++i) fn(i);
      return;
    }
    {
      std::unique_lock<std::mutex> lk(mu_);
      job_fn_ = &fn;
      job_n_ = n;
      pending_ = workers_ - 1;
      first_error_ = nullptr;
      ++generation_;
    }
    cv_start_.notify_all();
    run_chunk(0, n, 0, fn);  // caller takes chunk 0
    {
      std::unique_lock<std::mutex> lk(mu_);
      cv_done_.wait(lk, [this] { return pending_ == 0; });
      job_fn_ = nullptr;
      if (first_error_) std::rethrow_exception(first_error_);
    }
  }

 private:
  void run_chunk(int chunk, int n, int /*worker*/, const std::function<void(int)>& fn) {
    const long long lo = static_cast<long long>(n) * chunk / workers_;
    const long long hi = static_cast<long long>(n) * (chunk + 1) / workers_;
    for (long long i = lo; i < hi; ++i) fn(static_cast<int>(i));
  }

  void worker_loop(int w) {
    std::uint64_t seen = 0;
    for (;;) {
      const std::function<void(int)>* fn = nullptr;
      int n = 0;
      {
        std::unique_lock<std::mutex> lk(mu_);
        cv_start_.wait(lk, [&] { return generation_ != seen; });
        seen = generation_;
        if (stop_) return;
        fn = job_fn_;
        n = job_n_;
      }
      if (fn) {
        try {
          run_chunk(w, n, w, *fn);
        } catch (...) {
          std::unique_lock<std::mutex> lk(mu_);
          if (!first_error_) first_error_ = std::current_exception();
        }
      }
      {
        std::unique_lock<std::mutex> lk(mu_);
        if (--pending_ == 0) cv_done_.notify_all();
      }
    }
  }

  const int workers_;
  std::vector<std::thread> threads_;
  std::mutex mu_;
  std::condition_variable cv_start_;
  std::condition_variable cv_done_;
  const std::function<void(int)>* job_fn_ = nullptr;
  int job_n_ = 0;
  int pending_ = 0;
  std::uint64_t generation_ = 0;
  bool stop_ = false;
  std::exception_ptr first_error_;
};

}  // namespace hyflexa
