#include <openssl/evp.h>

#include <bit>
#include <cmath>
#include <set>

#include "doctest.h"
#include "mac2pc/ro.hpp"
#include "mac2pc/rng.hpp"

using namespace mac2pc;

TEST_CASE("hash is deterministic and domain separated") {
  Rng rng(1);
  std::size_t collisions = 0;
  for (int t = 0; t < 10000; ++t) {
    std::array<std::uint8_t, 16> x;
    rng.fill(x);
    CHECK(hash(Domain::EqCommit, x) == hash(Domain::EqCommit, x));
    collisions += hash(Domain::EqCommit, x) == hash(Domain::LaotTransfer, x);
  }
  CHECK(collisions == 0);
  // The tag is length-prefixed: ("AB", "C") and ("A", "BC") differ.
  const std::uint8_t c[] = {'C'};
  const std::uint8_t bc[] = {'B', 'C'};
  CHECK(hash("AB", c) != hash("A", bc));
  // Same bytes through OpenSSL's one-shot SHA-256: be32(4) || "TEST" || "abc".
  const std::uint8_t abc[] = {'a', 'b', 'c'};
  const std::uint8_t framed[] = {0, 0, 0, 4, 'T', 'E', 'S', 'T', 'a', 'b', 'c'};
  Digest want{};
  unsigned len = 0;
  EVP_Digest(framed, sizeof framed, want.data(), &len, EVP_sha256(), nullptr);
  CHECK(hash("TEST", abc) == want);
}

TEST_CASE("hash avalanche") {
  Rng rng(2);
  double total = 0;
  const int n = 10000;
  for (int t = 0; t < n; ++t) {
    std::array<std::uint8_t, 32> x;
    rng.fill(x);
    const Digest a = hash(Domain::Test, x);
    x[rng.uniform(32)] ^= static_cast<std::uint8_t>(1u << rng.uniform(8));
    const Digest b = hash(Domain::Test, x);
    for (int i = 0; i < 32; ++i) total += std::popcount(static_cast<unsigned>(a[i] ^ b[i]));
  }
  CHECK(std::abs(total / n - 128.0) < 1.0);
}

TEST_CASE("expand is a deterministic counter-mode stream") {
  const Digest seed = hash(Domain::Test, std::span<const std::uint8_t>{});
  CHECK(expand(seed, 300) == expand(seed, 300));
  CHECK(expand(seed, 64) == expand(seed, 256).slice(0, 64));
  const BitVec big = expand(seed, 1000000);
  const double ones = static_cast<double>(big.popcount());
  CHECK(std::abs(ones - 500000.0) <= 3 * std::sqrt(250000.0));
}

TEST_CASE("mask is an involution keyed by its material") {
  Rng rng(3);
  const BitVec k = rng.bits(128), m = rng.bits(200);
  CHECK(mask(k, mask(k, m)) == m);
  const Digest hk = hash(Domain::Prg, k.to_bytes());
  CHECK(mask(k, BitVec(77)) == expand(hk, 77));
  std::size_t equal = 0;
  for (int t = 0; t < 10000; ++t) {
    const BitVec k1 = rng.bits(64), k2 = rng.bits(64), msg = rng.bits(64);
    if (k1 == k2) continue;
    equal += mask(k1, msg) == mask(k2, msg);
  }
  CHECK(equal == 0);
}

TEST_CASE("MAC accumulator") {
  const MacAccumulator empty(128);
  CHECK(empty.state() == Digest{});
  CHECK(empty.count() == 0);
  Rng rng(4);
  const Block m1 = rng.block(128), m2 = rng.block(128);
  MacAccumulator a(128), b(128), c(128);
  for (const Block& m : {m1, m2}) {
    a.absorb(m);
    b.absorb(m);
  }
  c.absorb(m2);
  c.absorb(m1);
  CHECK(a == b);
  CHECK(a.count() == 2);
  CHECK_FALSE(a == c);
}

TEST_CASE("hash counter is per domain") {
  HashCounter::reset();
  const std::uint8_t x[] = {1};
  hash(Domain::LaandU, x);
  hash(Domain::LaandU, x);
  hash(Domain::Rot, x);
  CHECK(HashCounter::get(Domain::LaandU) == 2);
  CHECK(HashCounter::get(Domain::Rot) == 1);
  HashCounter::reset();
  CHECK(HashCounter::get(Domain::LaandU) == 0);
}
