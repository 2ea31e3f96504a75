#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <mutex>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

namespace graphmill {

// Injected transfer delays, seconds per MiB moved. Defaults of zero measure
// real wall time only; nonzero rates change timing metrics, never results.
struct CostModel {
  double network_s_per_mib = 0.0;
  double disk_s_per_mib = 0.0;
};

// Sleeps in proportion to bytes at the given rate. No-op for rate 0.
void apply_transfer_cost(double s_per_mib, std::uint64_t bytes);

// Local-disk stand-in for a distributed file system: the engines' "global
// memory". Counts exact serialized byte lengths moved, applies the disk cost
// rate, and detects concurrent writes to one file (a programming error).
// Reads and writes of distinct files are safe from any thread.
class SimulatedDfs {
 public:
  explicit SimulatedDfs(std::filesystem::path root, CostModel cost = {});

  // Creates parent directories as needed; returns the byte count written.
  std::uint64_t write_file(const std::string& name, std::span<const std::uint8_t> bytes);
  // Throws DfsError naming the file if it does not exist.
  std::vector<std::uint8_t> read_file(const std::string& name);
  bool exists(const std::string& name) const;
  std::uint64_t file_size(const std::string& name) const;

  // Removes a file or directory subtree; no byte accounting.
  void remove(const std::string& name);

  std::uint64_t read_bytes() const { return read_bytes_.load(std::memory_order_relaxed); }
  std::uint64_t write_bytes() const { return write_bytes_.load(std::memory_order_relaxed); }

  const std::filesystem::path& root() const { return root_; }
  const CostModel& cost() const { return cost_; }

 private:
  std::filesystem::path resolve(const std::string& name) const;

  std::filesystem::path root_;
  CostModel cost_;
  std::atomic<std::uint64_t> read_bytes_{0};
  std::atomic<std::uint64_t> write_bytes_{0};
  mutable std::mutex mu_;
  std::unordered_set<std::string> writes_in_flight_;
};

}  // namespace graphmill
