#include <cmath>
#include <map>

#include "doctest.h"
#include "mac2pc/bitlinalg.hpp"
#include "mac2pc/rng.hpp"

using namespace mac2pc;

namespace {

BitVec bv(const char* s) { return BitVec::from_string(s); }

bool within_3sigma(std::size_t hits, std::size_t n, double p) {
  return std::abs(static_cast<double>(hits) - n * p) <= 3 * std::sqrt(n * p * (1 - p));
}

}  // namespace

TEST_CASE("BitVec xor") {
  CHECK((bv("1010") ^ bv("0000")) == bv("1010"));
  CHECK((bv("1010") ^ bv("1010")) == bv("0000"));
  CHECK((bv("1100") ^ bv("1010")) == bv("0110"));
  CHECK_THROWS_AS(bv("10") ^ bv("101"), UsageError);
  Rng rng(1);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 1 + rng.uniform(300);
    const BitVec a = rng.bits(n), b = rng.bits(n), c = rng.bits(n);
    CHECK(((a ^ b) ^ c) == (a ^ (b ^ c)));
    CHECK((a ^ a).is_zero());
    CHECK((a ^ BitVec(n)) == a);
  }
}

TEST_CASE("BitVec packing is little-endian and pads with zeros") {
  const std::uint8_t byte = 0b00000101;
  const BitVec v = BitVec::from_bytes(std::span(&byte, 1), 8);
  CHECK(v.get(0));
  CHECK_FALSE(v.get(1));
  CHECK(v.get(2));
  const std::uint8_t full = 0xFF;
  const BitVec w = BitVec::from_bytes(std::span(&full, 1), 3);
  CHECK(w.words()[0] == 0b111);
  CHECK(w.to_bytes() == std::vector<std::uint8_t>{0b111});
}

TEST_CASE("BitVec append and slice") {
  Rng rng(2);
  for (int t = 0; t < 50; ++t) {
    const BitVec a = rng.bits(rng.uniform(200)), b = rng.bits(rng.uniform(200));
    BitVec c = a;
    c.append(b);
    REQUIRE(c.size() == a.size() + b.size());
    CHECK(c.slice(0, a.size()) == a);
    CHECK(c.slice(a.size(), b.size()) == b);
  }
}

TEST_CASE("matrix-vector product") {
  CHECK(mat_vec_mul(BitMatrix::identity(4), bv("1011")) == bv("1011"));
  CHECK(mat_vec_mul(BitMatrix(2, 4), bv("1011")) == bv("00"));
  const std::vector<BitVec> rows{bv("110"), bv("011")};
  CHECK(mat_vec_mul(BitMatrix::from_rows(rows), bv("110")) == bv("01"));
  CHECK_THROWS_AS(mat_vec_mul(BitMatrix(2, 3), bv("1011")), UsageError);
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    const BitMatrix a = BitMatrix::random(32, 96, rng);
    const BitVec u = rng.bits(96), v = rng.bits(96);
    CHECK(mat_vec_mul(a, u ^ v) == (mat_vec_mul(a, u) ^ mat_vec_mul(a, v)));
    const MatVecTable tab(a);
    CHECK(BitVec::from_block(tab.apply(u), 32) == mat_vec_mul(a, u));
  }
}

TEST_CASE("transpose") {
  const std::vector<BitVec> sq{bv("10"), bv("01")};
  CHECK(transpose_bits(sq) == sq);
  const std::vector<BitVec> one{bv("111")};
  CHECK(transpose_bits(one) == std::vector<BitVec>{bv("1"), bv("1"), bv("1")});
  const std::vector<BitVec> ragged{bv("10"), bv("1")};
  CHECK_THROWS_AS(transpose_bits(ragged), UsageError);
  Rng rng(4);
  const BitMatrix x = BitMatrix::random(64, 128, rng);
  CHECK(x.transpose().transpose() == x);
  for (int t = 0; t < 10; ++t) {
    const std::size_t r = 1 + rng.uniform(256), c = 1 + rng.uniform(256);
    const BitMatrix m = BitMatrix::random(r, c, rng);
    const BitMatrix mt = m.transpose();
    REQUIRE(mt.rows() == c);
    bool ok = true;
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t j = 0; j < c; ++j) ok &= mt.get(j, i) == m.get(i, j);
    }
    CHECK(ok);
  }
}

TEST_CASE("random pairings are valid and uniform") {
  Rng rng(5);
  const Pairing two = random_pairing(2, rng);
  CHECK(two(0) == 1);
  CHECK(two(1) == 0);
  CHECK_THROWS_AS(random_pairing(3, rng), UsageError);
  CHECK_THROWS_AS(Pairing({0, 1}), UsageError);
  // T=4 has three matchings, identified by the partner of 0.
  const std::size_t n = 30000;
  std::map<std::uint32_t, std::size_t> freq;
  for (std::size_t t = 0; t < n; ++t) {
    const Pairing p = random_pairing(4, rng);
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(p(p(i)) == i);
      CHECK(p(i) != i);
    }
    CHECK(p.leaders().size() == 2);
    ++freq[p(0)];
  }
  REQUIRE(freq.size() == 3);
  for (const auto& [k, v] : freq) CHECK(within_3sigma(v, n, 1.0 / 3));
}

TEST_CASE("random permutations are uniform bijections") {
  Rng rng(6);
  CHECK(random_permutation(1, rng) == std::vector<std::uint32_t>{0});
  const std::size_t n = 60000;
  std::map<std::vector<std::uint32_t>, std::size_t> freq;
  for (std::size_t t = 0; t < n; ++t) ++freq[random_permutation(3, rng)];
  REQUIRE(freq.size() == 6);
  for (const auto& [k, v] : freq) CHECK(within_3sigma(v, n, 1.0 / 6));
  const auto p = random_permutation(100, rng);
  CHECK(is_permutation(p));
  std::vector<std::uint32_t> inv(100);
  for (std::uint32_t i = 0; i < 100; ++i) inv[p[i]] = i;
  for (std::uint32_t i = 0; i < 100; ++i) CHECK(inv[p[i]] == i);
}
