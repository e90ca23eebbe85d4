#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <span>

#include "mac2pc/common.hpp"

namespace mac2pc {

inline constexpr unsigned kMaxKappa = 128;

/// A key, MAC or global key of at most 128 bits. Bits beyond the active
/// width are kept zero by every producer in this library.
struct Block {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;

  static constexpr Block mask(unsigned bits) {
    Block b;
    if (bits >= 128) return Block{~0ULL, ~0ULL};
    if (bits >= 64) {
      b.lo = ~0ULL;
      b.hi = bits == 64 ? 0 : (~0ULL >> (128 - bits));
    } else {
      b.lo = bits == 0 ? 0 : (~0ULL >> (64 - bits));
    }
    return b;
  }

  constexpr Block operator^(const Block& o) const { return Block{lo ^ o.lo, hi ^ o.hi}; }
  constexpr Block& operator^=(const Block& o) {
    lo ^= o.lo;
    hi ^= o.hi;
    return *this;
  }
  constexpr Block operator&(const Block& o) const { return Block{lo & o.lo, hi & o.hi}; }
  constexpr bool operator==(const Block& o) const = default;

  constexpr bool get(unsigned i) const { return ((i < 64 ? lo >> i : hi >> (i - 64)) & 1) != 0; }
  constexpr void set(unsigned i, bool v) {
    std::uint64_t& w = i < 64 ? lo : hi;
    const std::uint64_t m = 1ULL << (i % 64);
    w = v ? (w | m) : (w & ~m);
  }
  constexpr bool is_zero() const { return (lo | hi) == 0; }
  constexpr Block masked(unsigned bits) const { return *this & mask(bits); }
  /// `this` if b is set, zero otherwise.
  constexpr Block select(bool b) const { return b ? *this : Block{}; }
  int popcount() const { return std::popcount(lo) + std::popcount(hi); }

  /// Little-endian bytes; at most 16 are read.
  static Block from_bytes(std::span<const std::uint8_t> bytes) {
    std::uint8_t buf[16] = {};
    std::memcpy(buf, bytes.data(), bytes.size() < 16 ? bytes.size() : 16);
    Block b;
    std::memcpy(&b.lo, buf, 8);
    std::memcpy(&b.hi, buf + 8, 8);
    return b;
  }
  void to_bytes(std::span<std::uint8_t> out) const {
    std::uint8_t buf[16];
    std::memcpy(buf, &lo, 8);
    std::memcpy(buf + 8, &hi, 8);
    std::memcpy(out.data(), buf, out.size() < 16 ? out.size() : 16);
  }
};

constexpr std::size_t bytes_for_bits(std::size_t bits) { return (bits + 7) / 8; }

}  // namespace mac2pc
