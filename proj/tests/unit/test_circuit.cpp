#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <sstream>

#include "doctest.h"
#include "mac2pc/aes_circuit.hpp"
#include "mac2pc/circuit.hpp"
#include "mac2pc/rng.hpp"

using namespace mac2pc;

namespace {

std::array<std::uint8_t, 16> openssl_aes(const std::array<std::uint8_t, 16>& key, const std::array<std::uint8_t, 16>& pt) {
  std::array<std::uint8_t, 16> out{};
  EVP_CIPHER_CTX* ctx = EVP_CIPHER_CTX_new();
  int len = 0;
  EVP_EncryptInit_ex(ctx, EVP_aes_128_ecb(), nullptr, key.data(), nullptr);
  EVP_CIPHER_CTX_set_padding(ctx, 0);
  EVP_EncryptUpdate(ctx, out.data(), &len, pt.data(), 16);
  EVP_CIPHER_CTX_free(ctx);
  return out;
}

BitVec bytes_bits(std::span<const std::uint8_t> b) { return BitVec::from_bytes(b, 8 * b.size()); }

}  // namespace

TEST_CASE("minimal Bristol file parses to one XOR gate") {
  const Circuit c = parse_bristol_string("1 3\n2 1 1\n1 1\n\n2 1 0 1 2 XOR\n");
  REQUIRE(c.gates().size() == 1);
  CHECK(c.gates()[0] == Gate{GateKind::Xor, 0, 1, 2});
  CHECK(c.header().n_wires == 3);
  CHECK(c.header().inputs_of(Role::Alice) == 1);
  CHECK(c.header().inputs_of(Role::Bob) == 1);
}

TEST_CASE("parse errors carry line numbers") {
  SUBCASE("out of range wire") {
    try {
      parse_bristol_string("1 3\n2 1 1\n1 1\n\n2 1 0 7 2 XOR\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 5);
    }
  }
  SUBCASE("input group count without sizes") {
    CHECK_THROWS_AS(parse_bristol_string("1 3\n2 1\n1\n2 1 0 1 2 XOR\n"), ParseError);
  }
  SUBCASE("unknown gate") {
    CHECK_THROWS_AS(parse_bristol_string("1 3\n2 1 1\n1 1\n\n2 1 0 1 2 NAND\n"), ParseError);
  }
  SUBCASE("use before definition") {
    CHECK_THROWS_AS(parse_bristol_string("2 4\n2 1 1\n1 1\n\n2 1 0 3 2 XOR\n2 1 0 1 3 AND\n"), ParseError);
  }
  SUBCASE("double assignment") {
    CHECK_THROWS_AS(parse_bristol_string("2 4\n2 1 1\n1 1\n\n2 1 0 1 2 XOR\n2 1 0 1 2 AND\n"), ParseError);
  }
  SUBCASE("gate count mismatch") {
    CHECK_THROWS_AS(parse_bristol_string("2 3\n2 1 1\n1 1\n\n2 1 0 1 2 XOR\n"), ParseError);
  }
}

TEST_CASE("gate truth tables") {
  const Circuit x = parse_bristol_string("1 3\n2 1 1\n1 1\n\n2 1 0 1 2 XOR\n");
  const Circuit a = parse_bristol_string("1 3\n2 1 1\n1 1\n\n2 1 0 1 2 AND\n");
  const Circuit n = parse_bristol_string("1 2\n2 1 0\n1 1\n\n1 1 0 1 INV\n");
  for (int u = 0; u < 2; ++u) {
    for (int v = 0; v < 2; ++v) {
      BitVec ia(1), ib(1);
      ia.set(0, u);
      ib.set(0, v);
      CHECK(plain_eval(x, ia, ib).get(0) == bool(u ^ v));
      CHECK(plain_eval(a, ia, ib).get(0) == bool(u & v));
    }
    BitVec ia(1);
    ia.set(0, u);
    CHECK(plain_eval(n, ia, BitVec(0)).get(0) == !u);
  }
  CHECK_THROWS_AS(plain_eval(x, BitVec(2), BitVec(1)), UsageError);
}

TEST_CASE("chunks partition the gate stream") {
  Rng rng(3);
  const Circuit c = random_circuit(rng, 8, 8, 2500, 4);
  const auto cs = chunks(c, 1024);
  REQUIRE(cs.size() == 3);
  std::size_t next = 0, total = 0;
  for (const Chunk& ch : cs) {
    CHECK(ch.begin == next);
    next = ch.end;
    total += ch.size();
  }
  CHECK(total == 2500);
  CHECK(cs.back().size() == 2500 - 2048);
  CHECK_THROWS_AS(chunks(c, 0), UsageError);
}

TEST_CASE("Bristol round trip of a random circuit") {
  Rng rng(5);
  const Circuit c = random_circuit(rng, 10, 6, 300, 5);
  const Circuit d = parse_bristol_string(to_bristol(c));
  CHECK(d.gates() == c.gates());
  for (int t = 0; t < 10; ++t) {
    BitVec ia(10), ib(6);
    for (std::size_t i = 0; i < 10; ++i) ia.set(i, rng.next_bit());
    for (std::size_t i = 0; i < 6; ++i) ib.set(i, rng.next_bit());
    CHECK(plain_eval(c, ia, ib) == plain_eval(d, ia, ib));
  }
}

TEST_CASE("evaluation is invariant under shuffles within a level") {
  Rng rng(9);
  const Circuit c = random_circuit(rng, 6, 6, 400, 8);
  // Gates grouped by their depth in the full gate graph; any order inside a
  // group respects dependencies.
  std::vector<std::size_t> depth(c.header().n_wires, 0);
  std::vector<std::pair<std::size_t, Gate>> tagged;
  for (const Gate& g : c.gates()) {
    const std::size_t d = std::max(depth[g.in0], depth[g.in1]) + 1;
    depth[g.out] = d;
    tagged.emplace_back(d, g);
  }
  std::stable_sort(tagged.begin(), tagged.end(), [](auto& l, auto& r) { return l.first < r.first; });
  std::vector<Gate> shuffled;
  for (std::size_t i = 0; i < tagged.size();) {
    std::size_t j = i;
    while (j < tagged.size() && tagged[j].first == tagged[i].first) ++j;
    std::vector<Gate> level;
    for (std::size_t k = i; k < j; ++k) level.push_back(tagged[k].second);
    std::shuffle(level.begin(), level.end(), rng);
    shuffled.insert(shuffled.end(), level.begin(), level.end());
    i = j;
  }
  const Circuit s(c.header(), shuffled);
  for (int t = 0; t < 10; ++t) {
    BitVec ia(6), ib(6);
    for (std::size_t i = 0; i < 6; ++i) {
      ia.set(i, rng.next_bit());
      ib.set(i, rng.next_bit());
    }
    CHECK(plain_eval(c, ia, ib) == plain_eval(s, ia, ib));
  }
}

TEST_CASE("S-box circuit matches the table on all inputs") {
  const auto table = aes_sbox_table();
  CHECK(table[0x00] == 0x63);
  CHECK(table[0x53] == 0xED);
  const Circuit c = aes_sbox_circuit();
  for (unsigned x = 0; x < 256; ++x) {
    const std::uint8_t in = static_cast<std::uint8_t>(x);
    const BitVec out = plain_eval(c, bytes_bits({&in, 1}), BitVec(0));
    CHECK(out.to_bytes()[0] == table[x]);
  }
}

TEST_CASE("AES-128 circuit matches OpenSSL") {
  const Circuit c = aes128_circuit();
  MESSAGE("AES-128 circuit: " << c.gates().size() << " gates, " << c.and_count() << " AND");
  CHECK(c.header().total_outputs() == 128);
  CHECK(c.and_count() == 7200);
  // Reference AES circuits report about 34,520 gates per block.
  CHECK(c.gates().size() >= 31068);
  CHECK(c.gates().size() <= 37972);
  Rng rng(11);
  std::vector<std::pair<std::array<std::uint8_t, 16>, std::array<std::uint8_t, 16>>> vecs;
  // FIPS-197 appendix C.1 vector.
  std::array<std::uint8_t, 16> k{}, p{};
  for (int i = 0; i < 16; ++i) {
    k[i] = static_cast<std::uint8_t>(i);
    p[i] = static_cast<std::uint8_t>(0x11 * i);
  }
  vecs.emplace_back(k, p);
  for (int t = 0; t < 4; ++t) {
    rng.fill(k);
    rng.fill(p);
    vecs.emplace_back(k, p);
  }
  for (const auto& [key, pt] : vecs) {
    const BitVec out = plain_eval(c, bytes_bits(key), bytes_bits(pt));
    const auto want = openssl_aes(key, pt);
    CHECK(out.to_bytes() == std::vector<std::uint8_t>(want.begin(), want.end()));
  }
  const auto fips = openssl_aes(vecs[0].first, vecs[0].second);
  CHECK(fips[0] == 0x69);
  CHECK(fips[15] == 0x5a);
}

TEST_CASE("shared-key AES circuit XORs the key shares") {
  const Circuit c = aes128_circuit(true);
  CHECK(c.header().inputs_of(Role::Alice) == 256);
  CHECK(c.header().inputs_of(Role::Bob) == 128);
  Rng rng(12);
  std::array<std::uint8_t, 16> ka{}, kb{}, pt{}, key{};
  rng.fill(ka);
  rng.fill(kb);
  rng.fill(pt);
  for (int i = 0; i < 16; ++i) key[i] = ka[i] ^ kb[i];
  BitVec ia = bytes_bits(ka);
  ia.append(bytes_bits(pt));
  const BitVec out = plain_eval(c, ia, bytes_bits(kb));
  const auto want = openssl_aes(key, pt);
  CHECK(out.to_bytes() == std::vector<std::uint8_t>(want.begin(), want.end()));
}
