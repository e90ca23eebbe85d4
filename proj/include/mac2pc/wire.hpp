#pragma once

#include <cstdint>
#include <cstring>
#include <span>
#include <vector>

#include "mac2pc/bitlinalg.hpp"
#include "mac2pc/block.hpp"
#include "mac2pc/common.hpp"

namespace mac2pc {

/// Appends little-endian fields to a byte buffer.
class ByteWriter {
 public:
  void u8(std::uint8_t v) { buf_.push_back(v); }
  void u16(std::uint16_t v) { put(&v, 2); }
  void u32(std::uint32_t v) { put(&v, 4); }
  void u64(std::uint64_t v) { put(&v, 8); }
  void bytes(std::span<const std::uint8_t> b) { buf_.insert(buf_.end(), b.begin(), b.end()); }
  /// A block truncated to bytes_for_bits(bits) bytes.
  void block(const Block& b, unsigned bits) {
    std::uint8_t tmp[16];
    const std::size_t n = bytes_for_bits(bits);
    b.to_bytes({tmp, n});
    put(tmp, n);
  }
  /// Length-prefixed bit vector.
  void bits(const BitVec& v) {
    u64(v.size());
    const auto b = v.to_bytes();
    bytes(b);
  }
  std::vector<std::uint8_t>& data() { return buf_; }
  std::vector<std::uint8_t> take() { return std::move(buf_); }

 private:
  void put(const void* p, std::size_t n) {
    const auto* c = static_cast<const std::uint8_t*>(p);
    buf_.insert(buf_.end(), c, c + n);
  }
  std::vector<std::uint8_t> buf_;
};

/// Reads what ByteWriter wrote; short input is a protocol violation.
class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> b, const char* phase = "decode") : b_(b), phase_(phase) {}
  std::uint8_t u8() { return *take(1); }
  std::uint16_t u16() { return get<std::uint16_t>(); }
  std::uint32_t u32() { return get<std::uint32_t>(); }
  std::uint64_t u64() { return get<std::uint64_t>(); }
  std::span<const std::uint8_t> bytes(std::size_t n) { return {take(n), n}; }
  Block block(unsigned bits) {
    const std::size_t n = bytes_for_bits(bits);
    return Block::from_bytes({take(n), n}).masked(bits);
  }
  BitVec bits() {
    const std::uint64_t n = u64();
    if (n / 8 > remaining()) throw ProtocolAbort(phase_, "truncated bit vector");
    return BitVec::from_bytes(bytes(bytes_for_bits(n)), n);
  }
  std::size_t remaining() const { return b_.size() - pos_; }
  void expect_end() const {
    if (pos_ != b_.size()) throw ProtocolAbort(phase_, "trailing bytes in message");
  }

 private:
  template <class T>
  T get() {
    T v;
    std::memcpy(&v, take(sizeof(T)), sizeof(T));
    return v;
  }
  const std::uint8_t* take(std::size_t n) {
    if (n > remaining()) throw ProtocolAbort(phase_, "truncated message");
    const std::uint8_t* p = b_.data() + pos_;
    pos_ += n;
    return p;
  }
  std::span<const std::uint8_t> b_;
  std::size_t pos_ = 0;
  const char* phase_;
};

}  // namespace mac2pc

namespace mac2pc {

/// Appends bit fields, least significant bit first, into a packed buffer.
class BitPacker {
 public:
  void bit(bool b) { bits(b ? 1 : 0, 1); }
  void bits(std::uint64_t v, unsigned n) {
    if (n == 0) return;
    const unsigned off = static_cast<unsigned>(len_ % 64);
    if (off == 0) words_.push_back(0);
    words_.back() |= v << off;
    if (off + n > 64) words_.push_back(v >> (64 - off));
    len_ += n;
  }
  void block(const Block& b, unsigned n) {
    bits(b.lo & Block::mask(n < 64 ? n : 64).lo, n < 64 ? n : 64);
    if (n > 64) bits(b.hi & Block::mask(n - 64).lo, n - 64);
  }
  std::size_t size() const { return len_; }
  std::vector<std::uint8_t> bytes() const {
    std::vector<std::uint8_t> out(bytes_for_bits(len_));
    std::memcpy(out.data(), words_.data(), out.size());
    return out;
  }

 private:
  std::vector<std::uint64_t> words_;
  std::size_t len_ = 0;
};

/// Reads what BitPacker wrote.
class BitUnpacker {
 public:
  BitUnpacker(std::span<const std::uint8_t> bytes, std::size_t nbits) : v_(BitVec::from_bytes(bytes, nbits)) {}
  bool bit() { return bits(1) != 0; }
  std::uint64_t bits(unsigned n) {
    if (n == 0) return 0;
    if (pos_ + n > v_.size()) throw UsageError("BitUnpacker: read past end");
    const auto w = v_.words();
    const unsigned off = static_cast<unsigned>(pos_ % 64);
    std::uint64_t v = w[pos_ / 64] >> off;
    if (off + n > 64) v |= w[pos_ / 64 + 1] << (64 - off);
    pos_ += n;
    return n == 64 ? v : v & ((1ULL << n) - 1);
  }
  Block block(unsigned n) {
    Block b;
    b.lo = bits(n < 64 ? n : 64);
    if (n > 64) b.hi = bits(n - 64);
    return b;
  }

 private:
  BitVec v_;
  std::size_t pos_ = 0;
};

}  // namespace mac2pc
