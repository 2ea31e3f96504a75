#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "graphmill/dfs.hpp"
#include "graphmill/engine_common.hpp"
#include "graphmill/errors.hpp"
#include "graphmill/graph.hpp"
#include "graphmill/messaging.hpp"
#include "graphmill/records.hpp"
#include "graphmill/worker_pool.hpp"

namespace graphmill {

struct BspOptions {
  std::size_t max_supersteps = 10;
  bool use_combiner = false;
  // 0 = unlimited. Checked by estimation before load; exceeding it raises
  // CapacityError before any superstep runs.
  std::uint64_t memory_budget_bytes = 0;
  CostModel cost;
};

struct SuperstepOutcome {
  std::size_t superstep = 0;
  std::uint64_t active_vertices = 0;
  std::uint64_t messages_sent = 0;
  bool halted = false;
};

// Pregel-style engine: one-time partition load into worker-resident memory,
// then supersteps that emit from the previous states of active vertices,
// exchange messages at the barrier, and apply. Vertices that see no
// improvement vote to halt and reawaken on message receipt. The graph
// structure never moves after load.
template <class Prog>
class BspEngine {
 public:
  BspEngine(const Graph& g, const Prog& program, WorkerPool& pool, BspOptions options)
      : graph_(g), program_(program), pool_(pool), options_(options) {}

  // Resident size estimate used for the capacity check: serialized vertex ids
  // + adjacency + states, doubled as headroom for inboxes.
  std::uint64_t estimated_resident_bytes() const {
    std::uint64_t base = serialized_structure_bytes(graph_) +
                         graph_.num_vertices() * (program_.state_wire_size() + 1);
    return 2 * base;
  }

  TransferLedger load() {
    if (loaded_) throw EngineFault("bsp: load called twice");
    std::uint64_t estimate = estimated_resident_bytes();
    if (options_.memory_budget_bytes != 0 && estimate > options_.memory_budget_bytes)
      throw CapacityError("bsp: estimated resident size " + std::to_string(estimate) +
                          " bytes exceeds memory budget " +
                          std::to_string(options_.memory_budget_bytes) + " bytes");

    auto num_partitions = static_cast<std::uint32_t>(pool_.num_workers());
    auto owned = partition_vertex_ids(graph_, num_partitions);
    partitions_.resize(num_partitions);
    std::vector<TransferLedger> ledgers(num_partitions);

    pool_.run_phase(num_partitions, [&](std::size_t p, std::size_t) {
      Partition& part = partitions_[p];
      part.ids = std::move(owned[p]);
      part.states.reserve(part.ids.size());
      part.active.assign(part.ids.size(), false);
      part.edge_offsets.assign(part.ids.size() + 1, 0);
      for (std::size_t i = 0; i < part.ids.size(); ++i) {
        auto span = graph_.out_edges(part.ids[i]);
        part.edge_offsets[i + 1] = part.edge_offsets[i] + span.size();
        ledgers[p].structure_bytes += structure_wire_size(span.size());
      }
      part.edges.reserve(part.edge_offsets.back());
      for (VertexId v : part.ids) {
        auto span = graph_.out_edges(v);
        part.edges.insert(part.edges.end(), span.begin(), span.end());
      }
      for (std::size_t i = 0; i < part.ids.size(); ++i) {
        auto init = program_.init(part.ids[i]);
        part.states.push_back(std::move(init.state));
        part.active[i] = init.active;
      }
    });

    TransferLedger total;
    for (const auto& l : ledgers) total += l;
    loaded_ = true;
    return total;
  }

  bool loaded() const { return loaded_; }
  bool halted() const { return halted_; }
  std::size_t supersteps_run() const { return superstep_index_; }

  // One superstep: emit from previous states of active vertices, exchange at
  // the mid barrier, apply delivered messages, then vote to halt.
  SuperstepOutcome superstep() {
    if (!loaded_) throw EngineFault("bsp: superstep before load");
    ++superstep_index_;
    auto num_partitions = static_cast<std::uint32_t>(partitions_.size());
    std::vector<std::vector<Message<typename Prog::Payload>>> outboxes(num_partitions);

    pool_.run_phase(num_partitions, [&](std::size_t p, std::size_t) {
      Partition& part = partitions_[p];
      auto& outbox = outboxes[p];
      outbox.reserve(part.edges.size());
      for (std::size_t i = 0; i < part.ids.size(); ++i) {
        if (!(Prog::kAlwaysActive || part.active[i])) continue;
        program_.emit(part.ids[i], part.states[i], part.out_edges(i),
                      [&](VertexId dest, typename Prog::Payload payload) {
                        outbox.push_back({dest, part.ids[i], std::move(payload)});
                      });
      }
      std::sort(outbox.begin(), outbox.end(), MessageOrder{});
      if (options_.use_combiner) outbox = combine_per_destination<Prog>(std::move(outbox));
    });

    // Message exchange at the barrier, single-threaded.
    TransferLedger exchange;
    std::vector<Message<typename Prog::Payload>> all_messages;
    std::size_t total_messages = 0;
    for (const auto& outbox : outboxes) total_messages += outbox.size();
    all_messages.reserve(total_messages);
    for (auto& outbox : outboxes) {
      all_messages.insert(all_messages.end(), std::make_move_iterator(outbox.begin()),
                          std::make_move_iterator(outbox.end()));
    }
    std::uint64_t sent = all_messages.size();
    auto inboxes = route_messages<Prog>(std::move(all_messages), num_partitions, exchange);
    apply_transfer_cost(options_.cost.network_s_per_mib, exchange.msg_bytes);

    std::vector<std::uint64_t> activated(num_partitions, 0);
    pool_.run_phase(num_partitions, [&](std::size_t p, std::size_t) {
      Partition& part = partitions_[p];
      auto& inbox = inboxes[p];
      std::size_t cursor = 0;
      std::vector<typename Prog::Payload> payloads;
      for (std::size_t i = 0; i < part.ids.size(); ++i) {
        payloads.clear();
        while (cursor < inbox.size() && inbox[cursor].dest == part.ids[i])
          payloads.push_back(std::move(inbox[cursor++].payload));
        if (payloads.empty() && !Prog::kAlwaysActive) {
          part.active[i] = false;  // vote to halt
          continue;
        }
        auto result = program_.apply(part.states[i], payloads);
        part.states[i] = std::move(result.state);
        part.active[i] = result.activated;
        if (result.activated) ++activated[p];
      }
      if (cursor != inbox.size())
        throw EngineFault("bsp: message addressed to nonexistent vertex " +
                          std::to_string(inbox[cursor].dest));
    });

    SuperstepOutcome outcome;
    outcome.superstep = superstep_index_;
    outcome.messages_sent = sent;
    for (auto a : activated) outcome.active_vertices += a;
    last_ledger_ = exchange;
    halted_ = !Prog::kAlwaysActive && outcome.active_vertices == 0;
    outcome.halted = halted_;
    return outcome;
  }

  const TransferLedger& last_superstep_ledger() const { return last_ledger_; }

  StateVector<Prog> states() const {
    StateVector<Prog> out;
    out.reserve(graph_.num_vertices());
    for (const auto& part : partitions_)
      for (std::size_t i = 0; i < part.ids.size(); ++i) out.emplace_back(part.ids[i], part.states[i]);
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
  }

  // Ids resident in a partition; constant across all supersteps.
  std::span<const VertexId> partition_ids(std::size_t p) const { return partitions_.at(p).ids; }

 private:
  struct Partition {
    std::vector<VertexId> ids;  // sorted ascending
    std::vector<typename Prog::State> states;
    std::vector<bool> active;
    std::vector<std::size_t> edge_offsets;
    std::vector<Edge> edges;

    std::span<const Edge> out_edges(std::size_t i) const {
      return {edges.data() + edge_offsets[i], edge_offsets[i + 1] - edge_offsets[i]};
    }
  };

  const Graph& graph_;
  Prog program_;
  WorkerPool& pool_;
  BspOptions options_;
  std::vector<Partition> partitions_;
  TransferLedger last_ledger_;
  std::size_t superstep_index_ = 0;
  bool loaded_ = false;
  bool halted_ = false;
};

template <class Prog>
RunResult<Prog> run_bsp(const Graph& g, const Prog& program, WorkerPool& pool,
                        const BspOptions& options) {
  RunResult<Prog> result;
  result.metrics.engine = "bsp";
  result.metrics.algorithm = std::string(Prog::kName);
  result.metrics.workers = static_cast<std::uint32_t>(pool.num_workers());
  if (options.max_supersteps < 1) throw ConfigError("bsp: max_supersteps must be >= 1");

  PhaseTimer total_timer;
  BspEngine<Prog> engine(g, program, pool, options);

  PhaseTimer load_timer;
  TransferLedger load_ledger = engine.load();
  std::uint64_t initially_active = 0;
  for (VertexId v : g.vertex_ids())
    if (program.init(v).active) ++initially_active;
  IterationMetrics setup;
  setup.iteration = 0;
  setup.wall_ms = load_timer.elapsed_ms();
  setup.structure_bytes = load_ledger.structure_bytes;
  setup.active_vertices = initially_active;
  result.metrics.iterations.push_back(setup);
  result.totals += load_ledger;

  for (std::size_t step = 1; step <= options.max_supersteps; ++step) {
    PhaseTimer timer;
    SuperstepOutcome outcome = engine.superstep();
    const TransferLedger& ledger = engine.last_superstep_ledger();
    IterationMetrics row;
    row.iteration = step;
    row.wall_ms = timer.elapsed_ms();
    row.msg_count = ledger.msg_count;
    row.msg_bytes = ledger.msg_bytes;
    row.structure_bytes = ledger.structure_bytes;
    row.active_vertices = outcome.active_vertices;
    result.metrics.iterations.push_back(row);
    result.totals += ledger;
    if (outcome.halted) break;
  }

  result.states = engine.states();
  result.metrics.total_wall_ms = total_timer.elapsed_ms();
  return result;
}

}  // namespace graphmill
