#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "graphmill/dfs.hpp"
#include "graphmill/graph.hpp"
#include "graphmill/messaging.hpp"
#include "graphmill/serde.hpp"

// On-disk record schemas shared by the MR-family engines, and the structure
// accounting unit shared by all three engines. Byte layouts (little-endian):
//
//   structure segment   u64 id, varint out_degree, out_degree x (u64 target, f64 weight)
//   vertex record (MR)  u64 id, state, u8 active, varint out_degree, edges
//   state record (MR2)  u64 id, state, u8 active
//   message record      u64 dest, u64 source, payload
//
// structure_bytes always counts exactly the structure-segment encoding, so
// the per-engine totals compare like-for-like.

namespace graphmill {

inline std::size_t structure_wire_size(std::size_t out_degree) {
  return 8 + varint_size(out_degree) + 16 * out_degree;
}

inline void encode_structure(BinaryWriter& w, VertexId id, std::span<const Edge> edges) {
  w.put_u64(id);
  w.put_varint(edges.size());
  for (const Edge& e : edges) {
    w.put_u64(e.target);
    w.put_f64(e.weight);
  }
}

struct StructureRecord {
  VertexId id = 0;
  std::vector<Edge> edges;
};

inline StructureRecord decode_structure(BinaryReader& r) {
  StructureRecord rec;
  rec.id = r.get_u64();
  rec.edges.resize(r.get_varint());
  for (Edge& e : rec.edges) {
    e.target = r.get_u64();
    e.weight = r.get_f64();
  }
  return rec;
}

// Total structure-segment bytes of a graph: what BSP moves once at load, what
// MR2 writes once at split, and what MR reshuffles every iteration.
inline std::uint64_t serialized_structure_bytes(const Graph& g) {
  std::uint64_t total = 0;
  for (VertexId v : g.vertex_ids()) total += structure_wire_size(g.out_edges(v).size());
  return total;
}

template <class Prog>
struct VertexRecord {
  VertexId id = 0;
  typename Prog::State state{};
  bool active = false;
  std::vector<Edge> edges;
};

template <class Prog>
void encode_vertex_record(BinaryWriter& w, VertexId id, const typename Prog::State& state,
                          bool active, std::span<const Edge> edges) {
  w.put_u64(id);
  Prog::encode_state(w, state);
  w.put_u8(active ? 1 : 0);
  w.put_varint(edges.size());
  for (const Edge& e : edges) {
    w.put_u64(e.target);
    w.put_f64(e.weight);
  }
}

template <class Prog>
VertexRecord<Prog> decode_vertex_record(BinaryReader& r) {
  VertexRecord<Prog> rec;
  rec.id = r.get_u64();
  rec.state = Prog::decode_state(r);
  rec.active = r.get_u8() != 0;
  rec.edges.resize(r.get_varint());
  for (Edge& e : rec.edges) {
    e.target = r.get_u64();
    e.weight = r.get_f64();
  }
  return rec;
}

template <class Prog>
struct StateRecord {
  VertexId id = 0;
  typename Prog::State state{};
  bool active = false;
};

template <class Prog>
void encode_state_record(BinaryWriter& w, const StateRecord<Prog>& rec) {
  w.put_u64(rec.id);
  Prog::encode_state(w, rec.state);
  w.put_u8(rec.active ? 1 : 0);
}

template <class Prog>
StateRecord<Prog> decode_state_record(BinaryReader& r) {
  StateRecord<Prog> rec;
  rec.id = r.get_u64();
  rec.state = Prog::decode_state(r);
  rec.active = r.get_u8() != 0;
  return rec;
}

// Accumulates records in memory, then lands header + body as one DFS write.
class RecordFileWriter {
 public:
  BinaryWriter& body() { return body_; }
  void finish_record() { ++count_; }
  std::uint64_t count() const { return count_; }

  std::uint64_t write_to(SimulatedDfs& dfs, const std::string& name) {
    return dfs.write_file(name, with_file_header(count_, body_.buffer()));
  }

 private:
  BinaryWriter body_;
  std::uint64_t count_ = 0;
};

// Reads a whole record file and hands out a positioned reader.
class RecordFileReader {
 public:
  RecordFileReader(SimulatedDfs& dfs, const std::string& name)
      : data_(dfs.read_file(name)), reader_(data_) {
    count_ = read_file_header(reader_);
  }

  std::uint64_t count() const { return count_; }
  BinaryReader& reader() { return reader_; }

 private:
  std::vector<std::uint8_t> data_;
  BinaryReader reader_;
  std::uint64_t count_ = 0;
};

}  // namespace graphmill
