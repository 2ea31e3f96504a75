#include "graphmill/worker_pool.hpp"

#include <atomic>
#include <string>

#include "graphmill/errors.hpp"

namespace graphmill {

WorkerPool::WorkerPool(std::size_t num_workers) {
  if (num_workers == 0) throw ConfigError("worker pool needs at least 1 worker");
  threads_.reserve(num_workers);
  for (std::size_t i = 0; i < num_workers; ++i)
    threads_.emplace_back([this, i] { worker_loop(i); });
}

WorkerPool::~WorkerPool() {
  {
    std::lock_guard lock(mu_);
    stopping_ = true;
  }
  phase_start_.notify_all();
  for (auto& t : threads_) t.join();
}

std::uint64_t WorkerPool::generation() const {
  std::lock_guard lock(mu_);
  return generation_;
}

void WorkerPool::run_phase(std::size_t num_tasks, const PhaseFn& fn) {
  std::unique_lock lock(mu_);
  num_tasks_ = num_tasks;
  fn_ = &fn;
  failed_ = false;
  failed_flag_.store(false, std::memory_order_relaxed);
  error_ = nullptr;
  workers_remaining_ = threads_.size();
  ++phase_seq_;
  phase_start_.notify_all();
  phase_done_.wait(lock, [this] { return workers_remaining_ == 0; });
  ++generation_;
  fn_ = nullptr;
  if (failed_) {
    std::exception_ptr error = error_;
    std::size_t task = failed_task_;
    lock.unlock();
    try {
      std::rethrow_exception(error);
    } catch (const ConfigError&) {
      throw;
    } catch (const ParseError&) {
      throw;
    } catch (const CapacityError&) {
      throw;
    } catch (const EngineFault&) {
      throw;
    } catch (const DfsError&) {
      throw;
    } catch (const std::exception& e) {
      throw EngineFault("phase task " + std::to_string(task) + " failed: " + e.what());
    } catch (...) {
      throw EngineFault("phase task " + std::to_string(task) + " failed");
    }
  }
}

void WorkerPool::worker_loop(std::size_t index) {
  std::uint64_t seen_seq = 0;
  for (;;) {
    const PhaseFn* fn = nullptr;
    std::size_t num_tasks = 0;
    {
      std::unique_lock lock(mu_);
      phase_start_.wait(lock, [&] { return stopping_ || phase_seq_ != seen_seq; });
      if (stopping_) return;
      seen_seq = phase_seq_;
      fn = fn_;
      num_tasks = num_tasks_;
    }
    for (std::size_t task = index; task < num_tasks; task += threads_.size()) {
      if (failed_flag_.load(std::memory_order_relaxed)) break;
      try {
        (*fn)(task, index);
      } catch (...) {
        std::lock_guard lock(mu_);
        if (!failed_ || task < failed_task_) {
          failed_ = true;
          failed_task_ = task;
          error_ = std::current_exception();
        }
        failed_flag_.store(true, std::memory_order_relaxed);
      }
    }
    {
      std::lock_guard lock(mu_);
      if (--workers_remaining_ == 0) phase_done_.notify_all();
    }
  }
}

}  // namespace graphmill
