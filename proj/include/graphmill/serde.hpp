#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <span>
#include <vector>

#include "graphmill/errors.hpp"

// Length-prefixed binary encoding shared by every engine and the byte ledgers:
// fixed 8-byte little-endian ids, 8-byte IEEE-754 doubles, LEB128 varint list
// lengths. Byte counts derived from this encoding are platform-stable.

namespace graphmill {

inline std::size_t varint_size(std::uint64_t v) {
  std::size_t n = 1;
  while (v >= 0x80) {
    v >>= 7;
    ++n;
  }
  return n;
}

class BinaryWriter {
 public:
  void put_u8(std::uint8_t v) { buf_.push_back(v); }

  void put_u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }

  void put_f64(double v) { put_u64(std::bit_cast<std::uint64_t>(v)); }

  void put_varint(std::uint64_t v) {
    while (v >= 0x80) {
      buf_.push_back(static_cast<std::uint8_t>(v) | 0x80);
      v >>= 7;
    }
    buf_.push_back(static_cast<std::uint8_t>(v));
  }

  std::size_t size() const { return buf_.size(); }
  const std::vector<std::uint8_t>& buffer() const { return buf_; }
  std::vector<std::uint8_t> take() { return std::move(buf_); }
  void clear() { buf_.clear(); }

 private:
  std::vector<std::uint8_t> buf_;
};

class BinaryReader {
 public:
  explicit BinaryReader(std::span<const std::uint8_t> data) : data_(data) {}

  std::uint8_t get_u8() {
    require(1);
    return data_[pos_++];
  }

  std::uint64_t get_u64() {
    require(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(data_[pos_ + i]) << (8 * i);
    pos_ += 8;
    return v;
  }

  double get_f64() { return std::bit_cast<double>(get_u64()); }

  std::uint64_t get_varint() {
    std::uint64_t v = 0;
    int shift = 0;
    for (;;) {
      require(1);
      std::uint8_t b = data_[pos_++];
      v |= static_cast<std::uint64_t>(b & 0x7f) << shift;
      if ((b & 0x80) == 0) return v;
      shift += 7;
      if (shift > 63) throw EngineFault("varint overflows 64 bits");
    }
  }

  bool at_end() const { return pos_ == data_.size(); }
  std::size_t remaining() const { return data_.size() - pos_; }
  std::size_t position() const { return pos_; }

 private:
  void require(std::size_t n) const {
    if (data_.size() - pos_ < n) throw EngineFault("truncated record stream");
  }

  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

// Record-file header: 4-byte magic + u64 record count.
inline constexpr std::array<std::uint8_t, 4> kFileMagic = {'G', 'M', 'F', '1'};
inline constexpr std::size_t kFileHeaderBytes = 12;

inline std::vector<std::uint8_t> with_file_header(std::uint64_t record_count,
                                                  const std::vector<std::uint8_t>& body) {
  std::vector<std::uint8_t> out;
  out.reserve(kFileHeaderBytes + body.size());
  for (std::uint8_t b : kFileMagic) out.push_back(b);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(record_count >> (8 * i)));
  out.insert(out.end(), body.begin(), body.end());
  return out;
}

// Validates the magic, returns the record count, and leaves `r` at the first record.
inline std::uint64_t read_file_header(BinaryReader& r) {
  for (std::uint8_t expected : kFileMagic) {
    if (r.get_u8() != expected) throw DfsError("bad record-file magic");
  }
  return r.get_u64();
}

}  // namespace graphmill
