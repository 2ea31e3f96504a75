#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "graphmill/errors.hpp"

namespace graphmill {

using VertexId = std::uint64_t;
using PartitionId = std::uint32_t;

struct Edge {
  VertexId target = 0;
  double weight = 1.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct GraphStats {
  std::size_t num_nodes = 0;
  std::size_t num_edges = 0;
  double avg_out_degree = 0.0;
  std::size_t max_in_degree = 0;

  friend bool operator==(const GraphStats&, const GraphStats&) = default;
};

using SeedLabelMap = std::unordered_map<VertexId, std::vector<double>>;

// Vertex-to-partition assignment shared by all engines. Canonical function is
// id mod num_partitions; this is a wire-stable contract, not an implementation
// detail, so results reproduce across runs and languages.
inline PartitionId hash_partition(VertexId v, std::uint32_t num_partitions) {
  return static_cast<PartitionId>(v % num_partitions);
}

// Immutable directed graph. Adjacency lists hold outgoing edges sorted by
// target id; sink-only vertices are materialized with empty adjacency.
class Graph {
 public:
  std::size_t num_vertices() const { return ids_.size(); }
  std::size_t num_edges() const { return edges_.size(); }

  // Sorted ascending.
  std::span<const VertexId> vertex_ids() const { return ids_; }

  bool contains(VertexId v) const { return index_.contains(v); }

  std::span<const Edge> out_edges(VertexId v) const {
    auto it = index_.find(v);
    if (it == index_.end()) throw ConfigError("unknown vertex id " + std::to_string(v));
    return {edges_.data() + offsets_[it->second], offsets_[it->second + 1] - offsets_[it->second]};
  }

  std::size_t out_degree(VertexId v) const { return out_edges(v).size(); }

  const SeedLabelMap& seed_labels() const { return seed_labels_; }

 private:
  friend class GraphBuilder;

  std::vector<VertexId> ids_;
  std::vector<std::size_t> offsets_;  // ids_.size() + 1 entries into edges_
  std::vector<Edge> edges_;
  std::unordered_map<VertexId, std::size_t> index_;
  SeedLabelMap seed_labels_;
};

class GraphBuilder {
 public:
  void add_vertex(VertexId v);
  // Duplicate (src, dst) pairs collapse to the last weight seen.
  void add_edge(VertexId src, VertexId dst, double weight);
  // Must be a likelihood vector: components in [0,1], sum 1 within 1e-9.
  void set_seed_label(VertexId v, std::vector<double> label);

  Graph build();

 private:
  struct PendingEdge {
    VertexId src;
    VertexId dst;
    double weight;
    std::size_t seq;
  };

  std::vector<VertexId> vertices_;
  std::vector<PendingEdge> edges_;
  SeedLabelMap seed_labels_;
};

// Parses "src dst [weight]" lines; '#' lines are comments, blank lines are
// skipped. Throws ParseError with the offending line number; an input with no
// edges or vertices at all is an error.
Graph load_edge_list(std::istream& in, double default_weight = 1.0);

struct SeedLabelLoad {
  SeedLabelMap labels;
  // Lines naming a vertex absent from the filter graph (when one is given).
  std::size_t ignored_unknown = 0;
};

// Parses "vertexId p_0 ... p_{C-1}" lines. Components must lie in [0,1] and sum
// to 1 within 1e-6; vectors are renormalized exactly. When `filter` is given,
// ids not in the graph are counted in ignored_unknown and dropped.
SeedLabelLoad load_seed_labels(std::istream& in, std::size_t num_classes,
                               const Graph* filter = nullptr);

// Directed graph with near-uniform out-degrees and a heavy-tailed (Zipf-like)
// in-degree distribution. Deterministic for a fixed seed. Vertex ids are
// 0..n-1; all edge weights are 1.0.
Graph generate_power_law_graph(std::size_t n, double target_avg_degree, double exponent,
                               std::uint64_t seed);

GraphStats graph_stats(const Graph& g);

// One "src dst weight" line per edge, sources in ascending id order. Graphs
// built from edge lists (loader or generator output) reload losslessly; a
// vertex touching no edge cannot be expressed in this format.
void write_edge_list(const Graph& g, std::ostream& out);

}  // namespace graphmill
