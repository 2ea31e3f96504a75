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

struct MrOptions {
  std::size_t iterations = 10;
  bool use_combiner = false;
  bool keep_files = false;  // retain all DFS files after the run
  std::string run_prefix = "mr";
  CostModel cost;
};

namespace detail {

inline std::string iter_dir(const std::string& prefix, std::size_t k) {
  return prefix + "/it" + std::to_string(k);
}

inline std::string vertices_file(const std::string& prefix, std::size_t k, std::size_t p) {
  return iter_dir(prefix, k) + "/vertices-" + std::to_string(p) + ".bin";
}

inline std::string spill_file(const std::string& prefix, std::size_t k, const char* kind,
                              std::size_t mapper, std::size_t reducer) {
  return iter_dir(prefix, k) + "/spill-" + kind + "-m" + std::to_string(mapper) + "-r" +
         std::to_string(reducer) + ".bin";
}

// K-way merge of sorted runs; faults on an unsorted run.
template <class T, class Less>
std::vector<T> merge_sorted_runs(std::vector<std::vector<T>>&& runs, Less less,
                                 const char* what) {
  for (const auto& run : runs) {
    for (std::size_t i = 1; i < run.size(); ++i)
      if (less(run[i], run[i - 1])) throw EngineFault(std::string("unsorted ") + what + " run");
  }
  std::size_t total = 0;
  for (const auto& run : runs) total += run.size();
  std::vector<T> out;
  out.reserve(total);
  std::vector<std::size_t> cursor(runs.size(), 0);
  for (std::size_t done = 0; done < total; ++done) {
    std::size_t best = runs.size();
    for (std::size_t r = 0; r < runs.size(); ++r) {
      if (cursor[r] == runs[r].size()) continue;
      if (best == runs.size() || less(runs[r][cursor[r]], runs[best][cursor[best]])) best = r;
    }
    out.push_back(std::move(runs[best][cursor[best]++]));
  }
  return out;
}

}  // namespace detail

// Writes one vertex-record file per partition holding the program's initial
// states; every engine iteration reads and rewrites these through the DFS.
template <class Prog>
TransferLedger mr_write_initial_vertices(const Graph& g, const Prog& program, WorkerPool& pool,
                                         SimulatedDfs& dfs, const std::string& prefix,
                                         std::uint64_t& initially_active) {
  auto num_partitions = static_cast<std::uint32_t>(pool.num_workers());
  auto owned = partition_vertex_ids(g, num_partitions);
  std::vector<TransferLedger> ledgers(num_partitions);
  std::vector<std::uint64_t> active_counts(num_partitions, 0);

  pool.run_phase(num_partitions, [&](std::size_t p, std::size_t) {
    RecordFileWriter file;
    for (VertexId v : owned[p]) {
      auto init = program.init(v);
      auto edges = g.out_edges(v);
      encode_vertex_record<Prog>(file.body(), v, init.state, init.active, edges);
      file.finish_record();
      ledgers[p].structure_bytes += structure_wire_size(edges.size());
      if (init.active) ++active_counts[p];
    }
    file.write_to(dfs, detail::vertices_file(prefix, 0, p));
  });

  TransferLedger total;
  for (const auto& l : ledgers) total += l;
  initially_active = 0;
  for (auto c : active_counts) initially_active += c;
  return total;
}

// One map-shuffle-reduce round. Mappers emit messages for active vertices and
// self-emit every vertex record (state + adjacency) so the graph structure
// survives the iteration; everything crosses the shuffle as sorted spill
// runs. Reducers merge the runs, apply the message multiset, and write the
// next iteration's vertex files.
template <class Prog>
TransferLedger mr_iteration(const Prog& program, WorkerPool& pool, SimulatedDfs& dfs,
                            const std::string& prefix, std::size_t k, const MrOptions& options,
                            std::uint64_t& activated_total) {
  auto num_partitions = static_cast<std::uint32_t>(pool.num_workers());
  std::vector<TransferLedger> ledgers(num_partitions);

  // Map phase: spill per-reducer sorted runs of vertex records and messages.
  pool.run_phase(num_partitions, [&](std::size_t m, std::size_t) {
    RecordFileReader input(dfs, detail::vertices_file(prefix, k - 1, m));
    std::vector<Message<typename Prog::Payload>> messages;
    std::vector<RecordFileWriter> vert_spills(num_partitions);

    for (std::uint64_t i = 0; i < input.count(); ++i) {
      auto rec = decode_vertex_record<Prog>(input.reader());
      if (Prog::kAlwaysActive || rec.active) {
        program.emit(rec.id, rec.state, rec.edges,
                     [&](VertexId dest, typename Prog::Payload payload) {
                       messages.push_back({dest, rec.id, std::move(payload)});
                     });
      }
      auto& spill = vert_spills[hash_partition(rec.id, num_partitions)];
      encode_vertex_record<Prog>(spill.body(), rec.id, rec.state, rec.active, rec.edges);
      spill.finish_record();
      ledgers[m].structure_bytes += structure_wire_size(rec.edges.size());
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
    for (std::size_t r = 0; r < num_partitions; ++r) {
      spilled += vert_spills[r].write_to(dfs, detail::spill_file(prefix, k, "vert", m, r));
      spilled += msg_spills[r].write_to(dfs, detail::spill_file(prefix, k, "msg", m, r));
    }
    // Map and reduce workers sit on different hosts: every shuffled byte
    // crosses the network.
    apply_transfer_cost(options.cost.network_s_per_mib, spilled);
  });

  // Shuffle + reduce phase.
  std::vector<std::uint64_t> activated(num_partitions, 0);
  pool.run_phase(num_partitions, [&](std::size_t r, std::size_t) {
    std::vector<std::vector<VertexRecord<Prog>>> vert_runs(num_partitions);
    std::vector<std::vector<Message<typename Prog::Payload>>> msg_runs(num_partitions);
    for (std::size_t m = 0; m < num_partitions; ++m) {
      RecordFileReader vert_in(dfs, detail::spill_file(prefix, k, "vert", m, r));
      vert_runs[m].reserve(vert_in.count());
      for (std::uint64_t i = 0; i < vert_in.count(); ++i)
        vert_runs[m].push_back(decode_vertex_record<Prog>(vert_in.reader()));
      RecordFileReader msg_in(dfs, detail::spill_file(prefix, k, "msg", m, r));
      msg_runs[m].reserve(msg_in.count());
      for (std::uint64_t i = 0; i < msg_in.count(); ++i)
        msg_runs[m].push_back(decode_message<Prog>(msg_in.reader()));
    }
    auto vertices = detail::merge_sorted_runs(
        std::move(vert_runs),
        [](const VertexRecord<Prog>& a, const VertexRecord<Prog>& b) { return a.id < b.id; },
        "vertex spill");
    auto messages =
        detail::merge_sorted_runs(std::move(msg_runs), MessageOrder{}, "message spill");

    RecordFileWriter out;
    std::size_t cursor = 0;
    std::vector<typename Prog::Payload> inbox;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      auto& rec = vertices[i];
      if (i > 0 && vertices[i - 1].id == rec.id)
        throw EngineFault("mr reduce: duplicate vertex record for vertex " +
                          std::to_string(rec.id));
      inbox.clear();
      while (cursor < messages.size() && messages[cursor].dest == rec.id)
        inbox.push_back(std::move(messages[cursor++].payload));
      auto result = program.apply(rec.state, inbox);
      bool active = Prog::kAlwaysActive || result.activated;
      if (result.activated) ++activated[r];
      encode_vertex_record<Prog>(out.body(), rec.id, result.state, active, rec.edges);
      out.finish_record();
    }
    if (cursor != messages.size())
      throw EngineFault("mr reduce: group for vertex " + std::to_string(messages[cursor].dest) +
                        " is missing its vertex record");
    out.write_to(dfs, detail::vertices_file(prefix, k, r));
  });

  TransferLedger total;
  for (const auto& l : ledgers) total += l;
  activated_total = 0;
  for (auto a : activated) activated_total += a;
  return total;
}

template <class Prog>
StateVector<Prog> mr_read_states(WorkerPool& pool, SimulatedDfs& dfs, const std::string& prefix,
                                 std::size_t k) {
  auto num_partitions = pool.num_workers();
  StateVector<Prog> states;
  for (std::size_t p = 0; p < num_partitions; ++p) {
    RecordFileReader in(dfs, detail::vertices_file(prefix, k, p));
    for (std::uint64_t i = 0; i < in.count(); ++i) {
      auto rec = decode_vertex_record<Prog>(in.reader());
      states.emplace_back(rec.id, std::move(rec.state));
    }
  }
  std::sort(states.begin(), states.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return states;
}

template <class Prog>
RunResult<Prog> run_mapreduce(const Graph& g, const Prog& program, WorkerPool& pool,
                              SimulatedDfs& dfs, const MrOptions& options) {
  if (options.iterations < 1) throw ConfigError("mr: iterations must be >= 1");
  RunResult<Prog> result;
  result.metrics.engine = "mr";
  result.metrics.algorithm = std::string(Prog::kName);
  result.metrics.workers = static_cast<std::uint32_t>(pool.num_workers());

  PhaseTimer total_timer;
  std::uint64_t dfs_read0 = dfs.read_bytes();
  std::uint64_t dfs_write0 = dfs.write_bytes();

  {
    PhaseTimer timer;
    std::uint64_t initially_active = 0;
    TransferLedger setup_ledger =
        mr_write_initial_vertices(g, program, pool, dfs, options.run_prefix, initially_active);
    IterationMetrics row;
    row.iteration = 0;
    row.wall_ms = timer.elapsed_ms();
    row.structure_bytes = setup_ledger.structure_bytes;
    row.dfs_read_bytes = dfs.read_bytes() - dfs_read0;
    row.dfs_write_bytes = dfs.write_bytes() - dfs_write0;
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
        mr_iteration(program, pool, dfs, options.run_prefix, k, options, activated);
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
      dfs.remove(detail::iter_dir(options.run_prefix, k - 1));
      for (std::size_t m = 0; m < pool.num_workers(); ++m) {
        for (std::size_t r = 0; r < pool.num_workers(); ++r) {
          dfs.remove(detail::spill_file(options.run_prefix, k, "vert", m, r));
          dfs.remove(detail::spill_file(options.run_prefix, k, "msg", m, r));
        }
      }
    }
  }

  result.states = mr_read_states<Prog>(pool, dfs, options.run_prefix, options.iterations);
  if (!options.keep_files) dfs.remove(options.run_prefix);
  result.metrics.total_wall_ms = total_timer.elapsed_ms();
  return result;
}

}  // namespace graphmill
