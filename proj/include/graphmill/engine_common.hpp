#pragma once

#include <chrono>
#include <string>
#include <vector>

#include "graphmill/graph.hpp"
#include "graphmill/ledger.hpp"
#include "graphmill/metrics.hpp"
#include "graphmill/vertex_programs.hpp"

namespace graphmill {

template <class Prog>
struct RunResult {
  StateVector<Prog> states;
  RunMetrics metrics;
  TransferLedger totals;
};

// Vertex ids owned by each partition, ascending within a partition.
inline std::vector<std::vector<VertexId>> partition_vertex_ids(const Graph& g,
                                                               std::uint32_t num_partitions) {
  std::vector<std::vector<VertexId>> owned(num_partitions);
  for (VertexId v : g.vertex_ids()) owned[hash_partition(v, num_partitions)].push_back(v);
  return owned;
}

class PhaseTimer {
 public:
  PhaseTimer() : start_(std::chrono::steady_clock::now()) {}

  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace graphmill
