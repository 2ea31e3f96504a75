#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace graphmill {

// Fork-join worker pool with barrier semantics: every worker finishes phase k
// before run_phase returns and phase k+1 can start. Tasks are assigned
// round-robin (task i runs on worker i mod N), so the task-to-worker mapping
// is deterministic. Mutable state is confined per worker during a phase;
// callers merge per-worker results single-threaded after the barrier.
class WorkerPool {
 public:
  using PhaseFn = std::function<void(std::size_t task, std::size_t worker)>;

  explicit WorkerPool(std::size_t num_workers);
  ~WorkerPool();

  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  std::size_t num_workers() const { return threads_.size(); }

  // Completed phase barriers since construction.
  std::uint64_t generation() const;

  // Runs fn(task, worker) for every task in [0, num_tasks) and waits for the
  // barrier. If a task throws, remaining tasks are skipped, the barrier is
  // still reached, and the error of the lowest-numbered failing task is
  // rethrown (graphmill error types unwrapped, anything else wrapped in an
  // EngineFault naming the task).
  void run_phase(std::size_t num_tasks, const PhaseFn& fn);

 private:
  void worker_loop(std::size_t index);

  mutable std::mutex mu_;
  std::condition_variable phase_start_;
  std::condition_variable phase_done_;
  std::uint64_t phase_seq_ = 0;
  std::uint64_t generation_ = 0;
  std::size_t workers_remaining_ = 0;
  std::size_t num_tasks_ = 0;
  const PhaseFn* fn_ = nullptr;
  bool stopping_ = false;
  bool failed_ = false;  // also readable without the lock via failed_flag_
  std::atomic<bool> failed_flag_{false};
  std::size_t failed_task_ = 0;
  std::exception_ptr error_;
  std::vector<std::thread> threads_;
};

}  // namespace graphmill
