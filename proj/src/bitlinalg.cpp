#include "mac2pc/bitlinalg.hpp"

#include <algorithm>
#include <bit>
#include <cstring>

#include "mac2pc/rng.hpp"

namespace mac2pc {

BitVec BitVec::from_bytes(std::span<const std::uint8_t> bytes, std::size_t nbits) {
  if (bytes.size() < bytes_for_bits(nbits)) throw UsageError("BitVec: not enough bytes");
  BitVec v(nbits);
  std::memcpy(v.words_.data(), bytes.data(), bytes_for_bits(nbits));
  v.trim();
  return v;
}

BitVec BitVec::from_string(std::string_view bits) {
  BitVec v(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] != '0' && bits[i] != '1') throw UsageError("BitVec: expected 0/1 characters");
    v.set(i, bits[i] == '1');
  }
  return v;
}

BitVec BitVec::from_block(const Block& b, std::size_t nbits) {
  if (nbits > 128) throw UsageError("BitVec: block holds at most 128 bits");
  BitVec v(nbits);
  if (!v.words_.empty()) v.words_[0] = b.lo;
  if (v.words_.size() > 1) v.words_[1] = b.hi;
  v.trim();
  return v;
}

BitVec& BitVec::operator^=(const BitVec& o) {
  if (o.nbits_ != nbits_) throw UsageError("BitVec xor: length mismatch");
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= o.words_[i];
  return *this;
}

BitVec xor_bits(const BitVec& a, const BitVec& b) { return a ^ b; }

void BitVec::push_back(bool v) {
  if (nbits_ % 64 == 0) words_.push_back(0);
  ++nbits_;
  set(nbits_ - 1, v);
}

void BitVec::append(const BitVec& o) {
  const std::size_t old = nbits_;
  nbits_ += o.nbits_;
  words_.resize((nbits_ + 63) / 64, 0);
  const unsigned shift = old % 64;
  const std::size_t base = old / 64;
  for (std::size_t i = 0; i < o.words_.size(); ++i) {
    words_[base + i] |= o.words_[i] << shift;
    if (shift != 0 && base + i + 1 < words_.size()) words_[base + i + 1] |= o.words_[i] >> (64 - shift);
  }
  trim();
}

BitVec BitVec::slice(std::size_t pos, std::size_t len) const {
  if (pos + len > nbits_) throw UsageError("BitVec slice out of range");
  BitVec out(len);
  const unsigned shift = pos % 64;
  const std::size_t base = pos / 64;
  for (std::size_t i = 0; i < out.words_.size(); ++i) {
    std::uint64_t w = words_[base + i] >> shift;
    if (shift != 0 && base + i + 1 < words_.size()) w |= words_[base + i + 1] << (64 - shift);
    out.words_[i] = w;
  }
  out.trim();
  return out;
}

std::size_t BitVec::popcount() const {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

bool BitVec::is_zero() const {
  return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
}

std::vector<std::uint8_t> BitVec::to_bytes() const {
  std::vector<std::uint8_t> out(bytes_for_bits(nbits_));
  std::memcpy(out.data(), words_.data(), out.size());
  return out;
}

std::string BitVec::to_string() const {
  std::string s(nbits_, '0');
  for (std::size_t i = 0; i < nbits_; ++i) s[i] = get(i) ? '1' : '0';
  return s;
}

Block BitVec::to_block() const {
  Block b;
  if (!words_.empty()) b.lo = words_[0];
  if (words_.size() > 1) b.hi = words_[1];
  return b.masked(static_cast<unsigned>(std::min<std::size_t>(nbits_, 128)));
}

void BitVec::trim() {
  if (nbits_ % 64 != 0 && !words_.empty()) words_.back() &= (~0ULL >> (64 - nbits_ % 64));
}

// ---------------------------------------------------------------------------

BitMatrix BitMatrix::identity(std::size_t n) {
  BitMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
  return m;
}

BitMatrix BitMatrix::random(std::size_t rows, std::size_t cols, Rng& rng) {
  BitMatrix m(rows, cols);
  rng.fill({reinterpret_cast<std::uint8_t*>(m.data_.data()), m.data_.size() * 8});
  if (cols % 64 != 0) {
    const std::uint64_t pad = ~0ULL >> (64 - cols % 64);
    for (std::size_t r = 0; r < rows; ++r) m.data_[r * m.stride_ + m.stride_ - 1] &= pad;
  }
  return m;
}

BitMatrix BitMatrix::from_rows(std::span<const BitVec> rows) {
  const std::size_t cols = rows.empty() ? 0 : rows[0].size();
  BitMatrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw UsageError("BitMatrix: ragged rows");
    m.set_row(r, rows[r]);
  }
  return m;
}

BitVec BitMatrix::row(std::size_t r) const {
  BitVec v(cols_);
  std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>(r * stride_), stride_, v.words().begin());
  return v;
}

void BitMatrix::set_row(std::size_t r, const BitVec& v) {
  if (v.size() != cols_) throw UsageError("BitMatrix: row length mismatch");
  std::copy(v.words().begin(), v.words().end(), data_.begin() + static_cast<std::ptrdiff_t>(r * stride_));
}

void BitMatrix::xor_row(std::size_t r, std::span<const std::uint64_t> v) {
  std::uint64_t* dst = data_.data() + r * stride_;
  for (std::size_t i = 0; i < stride_; ++i) dst[i] ^= v[i];
}

namespace {

// In-place transpose of a 64x64 block, a[i] bit j = M[i][j].
void transpose64(std::uint64_t a[64]) {
  std::uint64_t m = 0x00000000FFFFFFFFULL;
  for (unsigned j = 32; j != 0; j >>= 1, m ^= m << j) {
    for (unsigned k = 0; k < 64; k = ((k | j) + 1) & ~j) {
      const std::uint64_t t = ((a[k] >> j) ^ a[k | j]) & m;
      a[k] ^= t << j;
      a[k | j] ^= t;
    }
  }
}

}  // namespace

BitMatrix BitMatrix::transpose() const {
  BitMatrix out(cols_, rows_);
  std::uint64_t blk[64];
  const std::size_t row_blocks = (rows_ + 63) / 64;
  for (std::size_t rb = 0; rb < row_blocks; ++rb) {
    for (std::size_t cb = 0; cb < stride_; ++cb) {
      for (std::size_t i = 0; i < 64; ++i) {
        const std::size_t r = rb * 64 + i;
        blk[i] = r < rows_ ? data_[r * stride_ + cb] : 0;
      }
      transpose64(blk);
      for (std::size_t j = 0; j < 64; ++j) {
        const std::size_t c = cb * 64 + j;
        if (c >= cols_) break;
        out.data_[c * out.stride_ + rb] = blk[j];
      }
    }
  }
  return out;
}

BitVec mat_vec_mul(const BitMatrix& a, const BitVec& v) {
  if (a.cols() != v.size()) throw UsageError("mat_vec_mul: dimension mismatch");
  BitVec out(a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    auto row = a.row_words(r);
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < row.size(); ++i) acc ^= row[i] & v.words()[i];
    out.set(r, std::popcount(acc) & 1);
  }
  return out;
}

std::vector<BitVec> transpose_bits(std::span<const BitVec> rows) {
  const BitMatrix t = BitMatrix::from_rows(rows).transpose();
  std::vector<BitVec> out;
  out.reserve(t.rows());
  for (std::size_t r = 0; r < t.rows(); ++r) out.push_back(t.row(r));
  return out;
}

// ---------------------------------------------------------------------------

MatVecTable::MatVecTable(const BitMatrix& a) : rows_(a.rows()), cols_(a.cols()) {
  if (rows_ > 128) throw UsageError("MatVecTable: at most 128 output bits");
  const std::size_t groups = (cols_ + 7) / 8;
  table_.assign(groups * 256, Block{});
  const BitMatrix at = a.transpose();  // row c = column c of a
  for (std::size_t g = 0; g < groups; ++g) {
    Block* t = table_.data() + g * 256;
    for (unsigned b = 0; b < 8; ++b) {
      const std::size_t c = g * 8 + b;
      if (c >= cols_) break;
      auto w = at.row_words(c);
      t[1u << b] = Block{w.empty() ? 0 : w[0], w.size() > 1 ? w[1] : 0};
    }
    for (unsigned x = 1; x < 256; ++x) {
      const unsigned low = x & (0u - x);
      if (x != low) t[x] = t[x ^ low] ^ t[low];
    }
  }
}

Block MatVecTable::apply(std::span<const std::uint64_t> v) const {
  Block acc;
  const std::size_t groups = table_.size() / 256;
  for (std::size_t g = 0; g < groups; ++g) {
    const unsigned byte = static_cast<unsigned>((v[g / 8] >> ((g % 8) * 8)) & 0xFF);
    acc ^= table_[g * 256 + byte];
  }
  return acc;
}

std::size_t gf2_rank(std::span<const BitVec> vectors) {
  if (vectors.empty()) return 0;
  std::vector<BitVec> m(vectors.begin(), vectors.end());
  const std::size_t cols = m[0].size();
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
    std::size_t pivot = rank;
    while (pivot < m.size() && !m[pivot].get(c)) ++pivot;
    if (pivot == m.size()) continue;
    std::swap(m[rank], m[pivot]);
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r != rank && m[r].get(c)) m[r] ^= m[rank];
    }
    ++rank;
  }
  return rank;
}

// ---------------------------------------------------------------------------

Pairing::Pairing(std::vector<std::uint32_t> partner) : partner_(std::move(partner)) {
  for (std::size_t i = 0; i < partner_.size(); ++i) {
    const std::uint32_t j = partner_[i];
    if (j >= partner_.size() || j == i || partner_[j] != i) {
      throw UsageError("Pairing: not a fixed-point-free involution");
    }
  }
}

std::vector<std::uint32_t> Pairing::leaders() const {
  std::vector<std::uint32_t> out;
  out.reserve(partner_.size() / 2);
  for (std::uint32_t i = 0; i < partner_.size(); ++i) {
    if (i < partner_[i]) out.push_back(i);
  }
  return out;
}

Pairing random_pairing(std::size_t t, Rng& rng) {
  if (t < 2 || t % 2 != 0) throw UsageError("random_pairing: T must be even and at least 2");
  // A uniform permutation read off in consecutive pairs is a uniform matching.
  const auto perm = random_permutation(t, rng);
  std::vector<std::uint32_t> partner(t);
  for (std::size_t k = 0; k < t; k += 2) {
    partner[perm[k]] = perm[k + 1];
    partner[perm[k + 1]] = perm[k];
  }
  return Pairing(std::move(partner));
}

std::vector<std::uint32_t> random_permutation(std::size_t n, Rng& rng) {
  std::vector<std::uint32_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = static_cast<std::uint32_t>(i);
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = rng.uniform(i);
    std::swap(perm[i - 1], perm[j]);
  }
  return perm;
}

bool is_permutation(std::span<const std::uint32_t> perm) {
  std::vector<bool> seen(perm.size(), false);
  for (auto p : perm) {
    if (p >= perm.size() || seen[p]) return false;
    seen[p] = true;
  }
  return true;
}

}  // namespace mac2pc
