#include "graphmill/dfs.hpp"

#include <chrono>
#include <fstream>
#include <thread>

#include "graphmill/errors.hpp"

namespace graphmill {

void apply_transfer_cost(double s_per_mib, std::uint64_t bytes) {
  if (s_per_mib <= 0.0 || bytes == 0) return;
  double seconds = s_per_mib * static_cast<double>(bytes) / (1024.0 * 1024.0);
  std::this_thread::sleep_for(std::chrono::duration<double>(seconds));
}

SimulatedDfs::SimulatedDfs(std::filesystem::path root, CostModel cost)
    : root_(std::move(root)), cost_(cost) {
  std::filesystem::create_directories(root_);
}

std::filesystem::path SimulatedDfs::resolve(const std::string& name) const { return root_ / name; }

std::uint64_t SimulatedDfs::write_file(const std::string& name,
                                       std::span<const std::uint8_t> bytes) {
  {
    std::lock_guard lock(mu_);
    if (!writes_in_flight_.insert(name).second)
      throw DfsError("concurrent write to dfs file " + name);
  }
  struct InFlightGuard {
    SimulatedDfs* dfs;
    const std::string& name;
    ~InFlightGuard() {
      std::lock_guard lock(dfs->mu_);
      dfs->writes_in_flight_.erase(name);
    }
  } guard{this, name};

  auto path = resolve(name);
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DfsError("cannot open dfs file for write: " + name);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DfsError("write failed for dfs file " + name);
  out.close();
  write_bytes_.fetch_add(bytes.size(), std::memory_order_relaxed);
  apply_transfer_cost(cost_.disk_s_per_mib, bytes.size());
  return bytes.size();
}

std::vector<std::uint8_t> SimulatedDfs::read_file(const std::string& name) {
  auto path = resolve(name);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DfsError("missing dfs file " + name);
  std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)),
                                 std::istreambuf_iterator<char>());
  if (in.bad()) throw DfsError("read failed for dfs file " + name);
  read_bytes_.fetch_add(data.size(), std::memory_order_relaxed);
  apply_transfer_cost(cost_.disk_s_per_mib, data.size());
  return data;
}

bool SimulatedDfs::exists(const std::string& name) const {
  return std::filesystem::exists(resolve(name));
}

std::uint64_t SimulatedDfs::file_size(const std::string& name) const {
  std::error_code ec;
  auto size = std::filesystem::file_size(resolve(name), ec);
  if (ec) throw DfsError("missing dfs file " + name);
  return size;
}

void SimulatedDfs::remove(const std::string& name) {
  std::filesystem::remove_all(resolve(name));
}

}  // namespace graphmill
