#pragma once

#include <cstdint>

namespace graphmill {

// Per-phase transfer accounting. Workers each own one during a phase; merges
// happen single-threaded at barriers and are associative and commutative.
struct TransferLedger {
  std::uint64_t msg_count = 0;
  std::uint64_t msg_bytes = 0;
  std::uint64_t structure_bytes = 0;

  TransferLedger& operator+=(const TransferLedger& o) {
    msg_count += o.msg_count;
    msg_bytes += o.msg_bytes;
    structure_bytes += o.structure_bytes;
    return *this;
  }

  friend TransferLedger operator+(TransferLedger a, const TransferLedger& b) { return a += b; }
  friend bool operator==(const TransferLedger&, const TransferLedger&) = default;
};

}  // namespace graphmill
