#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "graphmill/graph.hpp"
#include "graphmill/ledger.hpp"
#include "graphmill/serde.hpp"

namespace graphmill {

// The only data crossing partitions in BSP, and the message half of the
// MR/MR2 shuffle. `source` is the emitting vertex (for combined messages the
// smallest contributing source); it fixes the canonical per-destination apply
// order so float summation is reproducible across engines and worker counts.
template <class Payload>
struct Message {
  VertexId dest = 0;
  VertexId source = 0;
  Payload payload{};

  friend bool operator==(const Message&, const Message&) = default;
};

struct MessageOrder {
  template <class Payload>
  bool operator()(const Message<Payload>& a, const Message<Payload>& b) const {
    return a.dest != b.dest ? a.dest < b.dest : a.source < b.source;
  }
};

// dest + source ids precede the payload on the wire.
inline constexpr std::size_t kMessageHeaderBytes = 16;

template <class Prog>
std::size_t message_wire_size(const Message<typename Prog::Payload>& m) {
  return kMessageHeaderBytes + Prog::payload_wire_size(m.payload);
}

template <class Prog>
void encode_message(BinaryWriter& w, const Message<typename Prog::Payload>& m) {
  w.put_u64(m.dest);
  w.put_u64(m.source);
  Prog::encode_payload(w, m.payload);
}

template <class Prog>
Message<typename Prog::Payload> decode_message(BinaryReader& r) {
  Message<typename Prog::Payload> m;
  m.dest = r.get_u64();
  m.source = r.get_u64();
  m.payload = Prog::decode_payload(r);
  return m;
}

// Buckets messages by the destination's partition and canonicalizes each
// bucket to (dest, source) order. msg_count tallies every routed message;
// msg_bytes only those whose destination partition differs from the source's
// partition — local delivery is free.
template <class Prog>
std::vector<std::vector<Message<typename Prog::Payload>>> route_messages(
    std::vector<Message<typename Prog::Payload>>&& messages, std::uint32_t num_partitions,
    TransferLedger& ledger) {
  std::vector<std::vector<Message<typename Prog::Payload>>> buckets(num_partitions);
  std::vector<std::size_t> sizes(num_partitions, 0);
  for (const auto& m : messages) ++sizes[hash_partition(m.dest, num_partitions)];
  for (std::uint32_t p = 0; p < num_partitions; ++p) buckets[p].reserve(sizes[p]);
  for (auto& m : messages) {
    PartitionId dest_part = hash_partition(m.dest, num_partitions);
    ++ledger.msg_count;
    if (dest_part != hash_partition(m.source, num_partitions))
      ledger.msg_bytes += message_wire_size<Prog>(m);
    buckets[dest_part].push_back(std::move(m));
  }
  for (auto& bucket : buckets) std::sort(bucket.begin(), bucket.end(), MessageOrder{});
  return buckets;
}

// Pre-aggregates same-destination payloads originating from one partition,
// folding in ascending-source order. Requires the input in canonical order;
// each output message carries the smallest contributing source id.
template <class Prog>
std::vector<Message<typename Prog::Payload>> combine_per_destination(
    std::vector<Message<typename Prog::Payload>>&& messages) {
  std::vector<Message<typename Prog::Payload>> out;
  out.reserve(messages.size());
  for (auto& m : messages) {
    if (!out.empty() && out.back().dest == m.dest)
      out.back().payload = Prog::combine(out.back().payload, m.payload);
    else
      out.push_back(std::move(m));
  }
  return out;
}

}  // namespace graphmill
