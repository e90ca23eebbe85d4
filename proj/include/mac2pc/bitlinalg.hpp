#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mac2pc/block.hpp"

namespace mac2pc {

class Rng;

/// Packed bit string. Bit i lives in byte i/8 at position i%8; words are
/// little-endian, so the byte view and the word view agree. Pad bits past
/// size() are always zero.
class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(std::size_t nbits) : nbits_(nbits), words_((nbits + 63) / 64, 0) {}

  static BitVec from_bytes(std::span<const std::uint8_t> bytes, std::size_t nbits);
  static BitVec from_bytes(std::span<const std::uint8_t> bytes) {
    return from_bytes(bytes, bytes.size() * 8);
  }
  /// "1011" -> bits 1,0,1,1 at indices 0..3.
  static BitVec from_string(std::string_view bits);
  static BitVec from_block(const Block& b, std::size_t nbits);

  std::size_t size() const { return nbits_; }
  bool empty() const { return nbits_ == 0; }

  bool get(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1; }
  void set(std::size_t i, bool v) {
    const std::uint64_t m = 1ULL << (i % 64);
    words_[i / 64] = v ? (words_[i / 64] | m) : (words_[i / 64] & ~m);
  }
  void flip(std::size_t i) { words_[i / 64] ^= 1ULL << (i % 64); }

  std::span<std::uint64_t> words() { return words_; }
  std::span<const std::uint64_t> words() const { return words_; }

  BitVec& operator^=(const BitVec& o);
  BitVec operator^(const BitVec& o) const {
    BitVec r = *this;
    r ^= o;
    return r;
  }
  bool operator==(const BitVec& o) const = default;

  void push_back(bool v);
  void append(const BitVec& o);
  /// Bits [pos, pos+len).
  BitVec slice(std::size_t pos, std::size_t len) const;
  std::size_t popcount() const;
  bool is_zero() const;

  std::vector<std::uint8_t> to_bytes() const;
  std::string to_string() const;
  /// First min(size, 128) bits.
  Block to_block() const;

  /// Clears pad bits past size(); needed after raw word writes.
  void trim();

 private:
  std::size_t nbits_ = 0;
  std::vector<std::uint64_t> words_;
};

BitVec xor_bits(const BitVec& a, const BitVec& b);

/// Row-major GF(2) matrix; rows padded to whole 64-bit words with zero pad bits.
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), stride_((cols + 63) / 64), data_(rows * stride_, 0) {}

  static BitMatrix identity(std::size_t n);
  static BitMatrix random(std::size_t rows, std::size_t cols, Rng& rng);
  static BitMatrix from_rows(std::span<const BitVec> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t stride() const { return stride_; }

  bool get(std::size_t r, std::size_t c) const { return (data_[r * stride_ + c / 64] >> (c % 64)) & 1; }
  void set(std::size_t r, std::size_t c, bool v) {
    std::uint64_t& w = data_[r * stride_ + c / 64];
    const std::uint64_t m = 1ULL << (c % 64);
    w = v ? (w | m) : (w & ~m);
  }

  std::span<std::uint64_t> row_words(std::size_t r) { return {data_.data() + r * stride_, stride_}; }
  std::span<const std::uint64_t> row_words(std::size_t r) const {
    return {data_.data() + r * stride_, stride_};
  }
  BitVec row(std::size_t r) const;
  void set_row(std::size_t r, const BitVec& v);
  /// row r ^= v
  void xor_row(std::size_t r, std::span<const std::uint64_t> v);

  BitMatrix transpose() const;
  bool operator==(const BitMatrix& o) const = default;

  std::span<std::uint64_t> data() { return data_; }
  std::span<const std::uint64_t> data() const { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t stride_ = 0;
  std::vector<std::uint64_t> data_;
};

BitVec mat_vec_mul(const BitMatrix& a, const BitVec& v);

std::vector<BitVec> transpose_bits(std::span<const BitVec> rows);

/// Applies a fixed matrix with at most 128 rows to many vectors. Columns are
/// grouped by eight and every XOR combination of a group is tabulated, so one
/// product costs cols/8 lookups.
class MatVecTable {
 public:
  explicit MatVecTable(const BitMatrix& a);
  std::size_t in_bits() const { return cols_; }
  std::size_t out_bits() const { return rows_; }
  /// `v` holds at least in_bits() bits.
  Block apply(std::span<const std::uint64_t> v) const;
  Block apply(const BitVec& v) const { return apply(v.words()); }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Block> table_;  // groups * 256
};

/// Rank over GF(2) by Gaussian elimination.
std::size_t gf2_rank(std::span<const BitVec> vectors);

/// Fixed-point-free involution on {0..T-1}.
class Pairing {
 public:
  explicit Pairing(std::vector<std::uint32_t> partner);
  std::size_t size() const { return partner_.size(); }
  std::uint32_t operator()(std::size_t i) const { return partner_[i]; }
  const std::vector<std::uint32_t>& partners() const { return partner_; }
  /// Smaller index of each pair, ascending.
  std::vector<std::uint32_t> leaders() const;

 private:
  std::vector<std::uint32_t> partner_;
};

Pairing random_pairing(std::size_t t, Rng& rng);

/// Uniform permutation (Fisher-Yates). perm[i] is the image of i.
std::vector<std::uint32_t> random_permutation(std::size_t n, Rng& rng);

bool is_permutation(std::span<const std::uint32_t> perm);

}  // namespace mac2pc
