#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "graphmill/dfs.hpp"
#include "graphmill/engine_common.hpp"
#include "graphmill/engine_mr.hpp"
#include "graphmill/errors.hpp"
#include "graphmill/graph.hpp"
#include "graphmill/messaging.hpp"
#include "graphmill/records.hpp"
#include "graphmill/worker_pool.hpp"

namespace graphmill {

struct Mr2Options {
  std::size_t iterations = 10;
  bool use_combiner = false;
  bool keep_files = false;
  std::string run_prefix = "mr2";
  CostModel cost;
};

namespace detail {

inline std::string structure_file(const std::string& prefix, std::size_t p) {
  return iter_dir(prefix, 0) + "/structure-" + std::to_string(p) + ".bin";
}

inline std::string state_file(const std::string& prefix, std::size_t k, std::size_t p) {
  return iter_dir(prefix, k) + "/state-" + std::to_string(p) + ".bin";
}

}  // namespace detail

// Splits the input into two identically-partitioned file sets: structure
// files (adjacency, written exactly once per run) and iteration-0 state
// files. Both are sorted by vertex id so mappers can merge-join them record
// by record.
template <class Prog>
TransferLedger mr2_split_inputs(const Graph& g, const Prog& program, WorkerPool& pool,
                                SimulatedDfs& dfs, const std::string& prefix,
                                std::uint64_t& initially_active) {
  auto num_partitions = static_cast<std::uint32_t>(pool.num_workers());
  auto owned = partition_vertex_ids(g, num_partitions);
  std::vector<TransferLedger> ledgers(num_partitions);
  std::vector<std::uint64_t> active_counts(num_partitions, 0);

  pool.run_phase(num_partitions, [&](std::size_t p, std::size_t) {
    RecordFileWriter structure;
    RecordFileWriter state;
    for (VertexId v : owned[p]) {
      auto edges = g.out_edges(v);
      encode_structure(structure.body(), v, edges);
      structure.finish_record();
      ledgers[p].structure_bytes += structure_wire_size(edges.size());

      auto init = program.init(v);
      encode_state_record<Prog>(state.body(), {v, std::move(init.state), init.active});
      state.finish_record();
      if (init.active) ++active_counts[p];
    }
    structure.write_to(dfs, detail::structure_file(prefix, p));
    state.write_to(dfs, detail::state_file(prefix, 0, p));
  });

  TransferLedger total;
  for (const auto& l : ledgers) total += l;
  initially_active = 0;
  for (auto c : active_counts) initially_active += c;
  return total;
}

// One join-map/shuffle/reduce round. Mappers merge-join the static structure
// file with the current state file and emit only messages; the graph
// structure is never written back to disk. Reducers merge message groups with
// the previous state stream so message-less vertices carry forward, and write
// the next sorted state files.
template <class Prog>
TransferLedger mr2_iteration(const Prog& program, WorkerPool& pool, SimulatedDfs& dfs,
                             const std::string& prefix, std::size_t k, const Mr2Options& options,
                             std::uint64_t& activated_total) {
  auto num_partitions = static_cast<std::uint32_t>(pool.num_workers());
  std::vector<TransferLedger> ledgers(num_partitions);

  // Map-join phase: messages only.
  pool.run_phase(num_partitions, [&](std::size_t m, std::size_t) {
    RecordFileReader structure_in(dfs, detail::structure_file(prefix, m));
    // The structure stream is the designated remote read.
    apply_transfer_cost(options.cost.network_s_per_mib,
                        dfs.file_size(detail::structure_file(prefix, m)));
    RecordFileReader state_in(dfs, detail::state_file(prefix, k - 1, m));
    if (structure_in.count() != state_in.count())
      throw EngineFault("mr2 join: partition " + std::to_string(m) + " has " +
                        std::to_string(structure_in.count()) + " structure records vs " +
                        std::to_string(state_in.count()) + " state records");

    std::vector<Message<typename Prog::Payload>> messages;
    for (std::uint64_t i = 0; i < structure_in.count(); ++i) {
      auto structure = decode_structure(structure_in.reader());
      auto state = decode_state_record<Prog>(state_in.reader());
      if (structure.id != state.id)
        throw EngineFault("mr2 join: id mismatch between structure and state streams (" +
                          std::to_string(structure.id) + " vs " + std::to_string(state.id) +
                          "): partitioning drift");
      if (Prog::kAlwaysActive || state.active) {
        program.emit(state.id, state.state, structure.edges,
                     [&](VertexId dest, typename Prog::Payload payload) {
                       messages.push_back({dest, state.id, std::move(payload)});
                     });
      }
    }

    std::sort(messages.begin(), messages.end(), MessageOrder{});
    if (options.use_combiner) messages = combine_per_destination<Prog>(std::move(messages));

    std::vector<RecordFileWriter> msg_spills(num_partitions);
    for (const auto& msg : messages) {
      auto& spill = msg_spills[hash_partition(msg.dest, num_partitions)];
      encode_message<Prog>(spill.body(), msg);
      spill.finish_record();
      ++ledgers[m].msg_count;
      ledgers[m].msg_bytes += message_wire_size<Prog>(msg);
    }
    std::uint64_t spilled = 0;
    for (std::size_t r = 0; r < num_partitions; ++r)
      spilled += msg_spills[r].write_to(dfs, detail::spill_file(prefix, k, "msg", m, r));
    apply_transfer_cost(options.cost.network_s_per_mib, spilled);
  });

  // Reduce phase: merge message groups with the previous state stream.
  std::vector<std::uint64_t> activated(num_partitions, 0);
  pool.run_phase(num_partitions, [&](std::size_t r, std::size_t) {
    std::vector<std::vector<Message<typename Prog::Payload>>> msg_runs(num_partitions);
    for (std::size_t m = 0; m < num_partitions; ++m) {
      RecordFileReader msg_in(dfs, detail::spill_file(prefix, k, "msg", m, r));
      msg_runs[m].reserve(msg_in.count());
      for (std::uint64_t i = 0; i < msg_in.count(); ++i)
        msg_runs[m].push_back(decode_message<Prog>(msg_in.reader()));
    }
    auto messages =
        detail::merge_sorted_runs(std::move(msg_runs), MessageOrder{}, "message spill");

    RecordFileReader prev_state(dfs, detail::state_file(prefix, k - 1, r));
    RecordFileWriter out;
    std::size_t cursor = 0;
    std::vector<typename Prog::Payload> inbox;
    for (std::uint64_t i = 0; i < prev_state.count(); ++i) {
      auto rec = decode_state_record<Prog>(prev_state.reader());
      inbox.clear();
      while (cursor < messages.size() && messages[cursor].dest == rec.id)
        inbox.push_back(std::move(messages[cursor++].payload));
      if (inbox.empty()) {
        // Carry forward: the vertex emitted this iteration (if active) and
        // saw no improvement.
        encode_state_record<Prog>(out.body(),
                                  {rec.id, std::move(rec.state), Prog::kAlwaysActive});
      } else {
        auto result = program.apply(rec.state, inbox);
        bool active = Prog::kAlwaysActive || result.activated;
        if (result.activated) ++activated[r];
        encode_state_record<Prog>(out.body(), {rec.id, std::move(result.state), active});
      }
      out.finish_record();
    }
    if (cursor != messages.size())
      throw EngineFault("mr2 reduce: message for unknown vertex " +
                        std::to_string(messages[cursor].dest));
    out.write_to(dfs, detail::state_file(prefix, k, r));
  });

  TransferLedger total;
  for (const auto& l : ledgers) total += l;
  activated_total = 0;
  for (auto a : activated) activated_total += a;
  return total;
}

template <class Prog>
StateVector<Prog> mr2_read_states(WorkerPool& pool, SimulatedDfs& dfs, const std::string& prefix,
                                  std::size_t k) {
  StateVector<Prog> states;
  for (std::size_t p = 0; p < pool.num_workers(); ++p) {
    RecordFileReader in(dfs, detail::state_file(prefix, k, p));
    for (std::uint64_t i = 0; i < in.count(); ++i) {
      auto rec = decode_state_record<Prog>(in.reader());
      states.emplace_back(rec.id, std::move(rec.state));
    }
  }
  std::sort(states.begin(), states.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return states;
}

template <class Prog>
RunResult<Prog> run_mapside_join(const Graph& g, const Prog& program, WorkerPool& pool,
                                 SimulatedDfs& dfs, const Mr2Options& options) {
  if (options.iterations < 1) throw ConfigError("mr2: iterations must be >= 1");
  RunResult<Prog> result;
  result.metrics.engine = "mr2";
  result.metrics.algorithm = std::string(Prog::kName);
  result.metrics.workers = static_cast<std::uint32_t>(pool.num_workers());

  PhaseTimer total_timer;
  {
    PhaseTimer timer;
    std::uint64_t read_before = dfs.read_bytes();
    std::uint64_t write_before = dfs.write_bytes();
    std::uint64_t initially_active = 0;
    TransferLedger setup_ledger =
        mr2_split_inputs(g, program, pool, dfs, options.run_prefix, initially_active);
    IterationMetrics row;
    row.iteration = 0;
    row.wall_ms = timer.elapsed_ms();
    row.structure_bytes = setup_ledger.structure_bytes;
    row.dfs_read_bytes = dfs.read_bytes() - read_before;
    row.dfs_write_bytes = dfs.write_bytes() - write_before;
    row.active_vertices = initially_active;
    result.metrics.iterations.push_back(row);
    result.totals += setup_ledger;
  }

  for (std::size_t k = 1; k <= options.iterations; ++k) {
    PhaseTimer timer;
    std::uint64_t read_before = dfs.read_bytes();
    std::uint64_t write_before = dfs.write_bytes();
    std::uint64_t activated = 0;
    TransferLedger ledger =
        mr2_iteration(program, pool, dfs, options.run_prefix, k, options, activated);
    IterationMetrics row;
    row.iteration = k;
    row.wall_ms = timer.elapsed_ms();
    row.msg_count = ledger.msg_count;
    row.msg_bytes = ledger.msg_bytes;
    row.structure_bytes = ledger.structure_bytes;
    row.dfs_read_bytes = dfs.read_bytes() - read_before;
    row.dfs_write_bytes = dfs.write_bytes() - write_before;
    row.active_vertices = activated;
    result.metrics.iterations.push_back(row);
    result.totals += ledger;

    if (!options.keep_files) {
      for (std::size_t p = 0; p < pool.num_workers(); ++p)
        dfs.remove(detail::state_file(options.run_prefix, k - 1, p));
      for (std::size_t m = 0; m < pool.num_workers(); ++m)
        for (std::size_t r = 0; r < pool.num_workers(); ++r)
          dfs.remove(detail::spill_file(options.run_prefix, k, "msg", m, r));
    }
  }

  result.states = mr2_read_states<Prog>(pool, dfs, options.run_prefix, options.iterations);
  if (!options.keep_files) dfs.remove(options.run_prefix);
  result.metrics.total_wall_ms = total_timer.elapsed_ms();
  return result;
}

}  // namespace graphmill
