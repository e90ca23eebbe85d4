#include "doctest.h"
#include "mac2pc/eq.hpp"
#include "mac2pc/wire.hpp"
#include "support/harness.hpp"

using namespace mac2pc;
using namespace mac2pc::testing;

namespace {

std::pair<bool, bool> run_eq(Parties& p, const BitVec& x, const BitVec& y) {
  auto [ra, rb] =
      run_both_or_throw(p, [&] { return eq_commit_side(p.a, x); }, [&] { return eq_respond_side(p.b, y); });
  return {*ra.value, *rb.value};
}

}  // namespace

TEST_CASE("equal inputs pass on both sides") {
  Parties p(1, {128, 40});
  const BitVec x = BitVec::from_string("1011011111101010110110111110101100000000000000001101111010101101");
  CHECK(run_eq(p, x, x) == std::pair{true, true});
  for (std::size_t len = 1; len <= 8; ++len) {
    for (std::uint64_t v = 0; v < (1ULL << len); v += 1 + len) {
      const BitVec e = BitVec::from_block(Block{v, 0}, len);
      CHECK(run_eq(p, e, e) == std::pair{true, true});
    }
  }
}

TEST_CASE("one differing bit fails on both sides") {
  Parties p(2, {128, 40});
  Rng rng(2);
  for (int t = 0; t < 20; ++t) {
    const BitVec x = rng.bits(1 + rng.uniform(500));
    BitVec y = x;
    y.flip(rng.uniform(y.size()));
    CHECK(run_eq(p, x, y) == std::pair{false, false});
  }
}

TEST_CASE("commitment is deterministic in (x, r)") {
  Rng rng(3);
  const BitVec x = rng.bits(100);
  const Block r = rng.block(128);
  CHECK(eq_commitment(x, r, 128) == eq_commitment(x, r, 128));
  CHECK(eq_commitment(x, r, 128) != eq_commitment(x, r ^ Block{1, 0}, 128));
}

TEST_CASE("opening to a different value is rejected") {
  // A committer that commits to x and opens to x' with a fresh r'.
  Parties p(4, {128, 40});
  Rng rng(4);
  const BitVec x = rng.bits(64);
  BitVec x2 = x;
  x2.flip(0);
  auto [ra, rb] = run_both_or_throw(
      p,
      [&] {
        ByteWriter c;
        c.block(eq_commitment(x, rng.block(128), 128), 128);
        p.a.ch.send(MsgType::EqCommit, c.take());
        p.a.ch.recv(MsgType::EqValue);
        ByteWriter open;
        open.bits(x2);
        open.block(rng.block(128), 128);
        p.a.ch.send(MsgType::EqOpen, open.take());
        return true;
      },
      [&] { return eq_respond_side(p.b, x2); });
  CHECK_FALSE(*rb.value);

  std::size_t forged = 0;
  const Block r = rng.block(128);
  const Block c = eq_commitment(x, r, 128);
  for (int t = 0; t < 10000; ++t) forged += eq_commitment(x2, rng.block(128), 128) == c;
  CHECK(forged == 0);
}

TEST_CASE("binding at kappa = 16") {
  // A random opening of a different value matches a 16-bit commitment with
  // probability 2^-16; allow ten times that.
  Rng rng(5);
  const BitVec x = rng.bits(32);
  const Block c = eq_commitment(x, rng.block(16), 16);
  const std::size_t n = 1000000;
  std::size_t hits = 0;
  for (std::size_t t = 0; t < n; ++t) {
    BitVec x2 = x;
    x2.flip(t % 32);
    hits += eq_commitment(x2, rng.block(16), 16) == c;
  }
  CHECK(static_cast<double>(hits) <= 10.0 * n / 65536.0);
}

TEST_CASE("eq_check aborts with the caller's phase") {
  Parties p(6, {128, 40});
  const BitVec x = BitVec::from_string("0101"), y = BitVec::from_string("0100");
  auto [ra, rb] = run_both(p, [&] { eq_check(p.a, true, x, "demo"); }, [&] { eq_check(p.b, false, y, "demo"); });
  CHECK(abort_phase(ra) == std::optional<std::string>("demo"));
  CHECK(abort_phase(rb) == std::optional<std::string>("demo"));
}
