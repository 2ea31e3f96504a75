#include "graphmill/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <string_view>

namespace graphmill {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

VertexId parse_vertex_id(std::string_view field, std::size_t line_no) {
  VertexId v = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc{} || ptr != field.data() + field.size())
    throw ParseError("expected non-negative vertex id, got '" + std::string(field) + "'", line_no);
  return v;
}

double parse_real(std::string_view field, std::size_t line_no) {
  double x = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), x);
  if (ec != std::errc{} || ptr != field.data() + field.size() || std::isnan(x))
    throw ParseError("expected real number, got '" + std::string(field) + "'", line_no);
  return x;
}

// Portable uniform helpers: std::mt19937_64 output is fully specified by the
// standard, the std distributions are not.
double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - (std::numeric_limits<std::uint64_t>::max() % bound + 1) % bound;
  for (;;) {
    std::uint64_t v = rng();
    if (v <= limit) return v % bound;
  }
}

}  // namespace

void GraphBuilder::add_vertex(VertexId v) { vertices_.push_back(v); }

void GraphBuilder::add_edge(VertexId src, VertexId dst, double weight) {
  if (weight < 0.0) throw ConfigError("edge weight must be non-negative");
  edges_.push_back({src, dst, weight, edges_.size()});
}

void GraphBuilder::set_seed_label(VertexId v, std::vector<double> label) {
  double sum = 0.0;
  for (double p : label) {
    if (p < 0.0 || p > 1.0) throw ConfigError("seed label component outside [0,1]");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw ConfigError("seed label components must sum to 1");
  seed_labels_[v] = std::move(label);
}

Graph GraphBuilder::build() {
  // Last-wins for duplicate (src, dst): sort by (src, dst, seq) and keep the
  // final occurrence of each pair.
  std::sort(edges_.begin(), edges_.end(), [](const PendingEdge& a, const PendingEdge& b) {
    return std::tie(a.src, a.dst, a.seq) < std::tie(b.src, b.dst, b.seq);
  });

  Graph g;
  auto& ids = g.ids_;
  ids = vertices_;
  for (const auto& e : edges_) {
    ids.push_back(e.src);
    ids.push_back(e.dst);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

  g.index_.reserve(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) g.index_.emplace(ids[i], i);

  g.offsets_.assign(ids.size() + 1, 0);
  std::vector<Edge> dedup;
  dedup.reserve(edges_.size());
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    if (i + 1 < edges_.size() && edges_[i].src == edges_[i + 1].src &&
        edges_[i].dst == edges_[i + 1].dst)
      continue;  // a later duplicate overrides this one
    dedup.push_back({edges_[i].dst, edges_[i].weight});
    ++g.offsets_[g.index_.at(edges_[i].src) + 1];
  }
  for (std::size_t i = 1; i <= ids.size(); ++i) g.offsets_[i] += g.offsets_[i - 1];
  g.edges_ = std::move(dedup);  // already grouped by src and sorted by target

  for (auto& [v, label] : seed_labels_) {
    if (!g.index_.contains(v)) throw ConfigError("seed label for unknown vertex " + std::to_string(v));
  }
  g.seed_labels_ = std::move(seed_labels_);
  return g;
}

Graph load_edge_list(std::istream& in, double default_weight) {
  if (default_weight < 0.0) throw ConfigError("default edge weight must be non-negative");
  GraphBuilder builder;
  std::string line;
  std::size_t line_no = 0;
  std::size_t parsed = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (!view.empty() && view.front() == '#') continue;
    auto fields = split_fields(view);
    if (fields.empty()) continue;
    if (fields.size() != 2 && fields.size() != 3)
      throw ParseError("expected 'src dst [weight]', got " + std::to_string(fields.size()) +
                           " fields",
                       line_no);
    VertexId src = parse_vertex_id(fields[0], line_no);
    VertexId dst = parse_vertex_id(fields[1], line_no);
    double weight = default_weight;
    if (fields.size() == 3) {
      weight = parse_real(fields[2], line_no);
      if (weight < 0.0) throw ParseError("edge weight must be non-negative", line_no);
    }
    builder.add_edge(src, dst, weight);
    ++parsed;
  }
  if (parsed == 0) throw ParseError("edge list contains no edges", 0);
  return builder.build();
}

SeedLabelLoad load_seed_labels(std::istream& in, std::size_t num_classes, const Graph* filter) {
  if (num_classes < 2) throw ConfigError("seed labels need at least 2 classes");
  SeedLabelLoad result;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (!view.empty() && view.front() == '#') continue;
    auto fields = split_fields(view);
    if (fields.empty()) continue;
    if (fields.size() != num_classes + 1)
      throw ParseError("expected 'vertexId p_0 .. p_" + std::to_string(num_classes - 1) + "'",
                       line_no);
    VertexId v = parse_vertex_id(fields[0], line_no);
    std::vector<double> label(num_classes);
    double sum = 0.0;
    for (std::size_t c = 0; c < num_classes; ++c) {
      double p = parse_real(fields[c + 1], line_no);
      if (p < 0.0 || p > 1.0) throw ParseError("label component outside [0,1]", line_no);
      label[c] = p;
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-6)
      throw ParseError("label components sum to " + std::to_string(sum) + ", expected 1", line_no);
    for (double& p : label) p /= sum;
    if (filter != nullptr && !filter->contains(v)) {
      ++result.ignored_unknown;
      continue;
    }
    result.labels[v] = std::move(label);
  }
  return result;
}

Graph generate_power_law_graph(std::size_t n, double target_avg_degree, double exponent,
                               std::uint64_t seed) {
  if (n < 2) throw ConfigError("generator needs n >= 2");
  if (target_avg_degree < 1.0) throw ConfigError("generator needs target_avg_degree >= 1");
  if (!(exponent > 1.0)) throw ConfigError("generator needs exponent > 1");
  if (target_avg_degree > static_cast<double>(n - 1))
    throw ConfigError("target_avg_degree exceeds n-1");

  std::mt19937_64 rng(seed);

  // Targets are drawn Zipf(a) over a random rank permutation with a chosen so
  // the resulting in-degree distribution has tail exponent `exponent`.
  const double a = 1.0 / (exponent - 1.0);
  std::vector<double> cumulative(n);
  double total = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    total += std::pow(static_cast<double>(r + 1), -a);
    cumulative[r] = total;
  }
  std::vector<VertexId> rank_to_vertex(n);
  for (std::size_t i = 0; i < n; ++i) rank_to_vertex[i] = i;
  for (std::size_t i = n - 1; i > 0; --i) {
    std::size_t j = uniform_below(rng, i + 1);
    std::swap(rank_to_vertex[i], rank_to_vertex[j]);
  }

  const auto num_edges = static_cast<std::size_t>(std::llround(static_cast<double>(n) * target_avg_degree));
  std::vector<std::vector<VertexId>> adjacency(n);

  auto sample_target = [&]() -> VertexId {
    double u = uniform_unit(rng) * total;
    auto it = std::lower_bound(cumulative.begin(), cumulative.end(), u);
    std::size_t rank = static_cast<std::size_t>(it - cumulative.begin());
    if (rank >= n) rank = n - 1;
    return rank_to_vertex[rank];
  };
  auto try_add = [&](VertexId src) -> bool {
    for (int attempt = 0; attempt < 64; ++attempt) {
      VertexId dst = sample_target();
      if (dst == src) continue;
      auto& out = adjacency[src];
      if (std::find(out.begin(), out.end(), dst) != out.end()) continue;
      out.push_back(dst);
      return true;
    }
    return false;
  };

  for (std::size_t e = 0; e < num_edges; ++e) try_add(uniform_below(rng, n));

  // Edge-list datasets have no isolated vertices; give any leftover one edge.
  std::vector<std::size_t> in_degree(n, 0);
  for (const auto& out : adjacency)
    for (VertexId t : out) ++in_degree[t];
  for (std::size_t v = 0; v < n; ++v) {
    if (adjacency[v].empty() && in_degree[v] == 0) try_add(v);
  }

  GraphBuilder builder;
  for (std::size_t v = 0; v < n; ++v) {
    builder.add_vertex(v);
    for (VertexId dst : adjacency[v]) builder.add_edge(v, dst, 1.0);
  }
  return builder.build();
}

GraphStats graph_stats(const Graph& g) {
  GraphStats stats;
  stats.num_nodes = g.num_vertices();
  stats.num_edges = g.num_edges();
  stats.avg_out_degree =
      stats.num_nodes == 0 ? 0.0 : static_cast<double>(stats.num_edges) / static_cast<double>(stats.num_nodes);
  std::unordered_map<VertexId, std::size_t> in_degree;
  in_degree.reserve(g.num_vertices());
  for (VertexId v : g.vertex_ids())
    for (const Edge& e : g.out_edges(v)) ++in_degree[e.target];
  for (const auto& [v, d] : in_degree) stats.max_in_degree = std::max(stats.max_in_degree, d);
  return stats;
}

void write_edge_list(const Graph& g, std::ostream& out) {
  char buf[64];
  for (VertexId v : g.vertex_ids()) {
    for (const Edge& e : g.out_edges(v)) {
      std::snprintf(buf, sizeof(buf), "%.17g", e.weight);
      out << v << ' ' << e.target << ' ' << buf << '\n';
    }
  }
}

}  // namespace graphmill
