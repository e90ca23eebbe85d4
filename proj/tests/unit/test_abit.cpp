#include <cmath>

#include "doctest.h"
#include "mac2pc/abit.hpp"
#include "support/harness.hpp"

using namespace mac2pc;
using namespace mac2pc::testing;

namespace {

constexpr SecurityParams kParams{64, 16};

bool within_3sigma(std::size_t hits, std::size_t n, double p) {
  return std::abs(static_cast<double>(hits) - n * p) <= 3 * std::sqrt(n * p * (1 - p));
}

}  // namespace

TEST_CASE("honest LaBit run satisfies N_i = L_i ^ y_i * Gamma") {
  Parties p(1, kParams);
  auto [ra, rb] = run_both_or_throw(
      p, [&] { return labit_send(p.a, p.ot_a, 4, 16); }, [&] { return labit_receive(p.b, p.ot_b, 4, 16); });
  const auto& s = *ra.value;
  const auto& r = *rb.value;
  REQUIRE(s.strings.rows() == 4);
  CHECK(s.selected.size() == 4);  // half of the 2*tau candidates
  for (std::size_t i = 0; i < 4; ++i) {
    const BitVec want = r.y.get(i) ? (s.strings.row(i) ^ s.gamma) : s.strings.row(i);
    CHECK(r.strings.row(i) == want);
  }
  CHECK(p.ot_a.ots_used() == 8);
}

TEST_CASE("a sender offering a wrong Gamma in one OT is caught half the time") {
  const std::size_t n = 2000;
  std::size_t aborts = 0;
  for (std::size_t t = 0; t < n; ++t) {
    Parties p(100 + t, kParams);
    LabitHooks h;
    h.ot_gamma = [](std::size_t i, const BitVec& g) {
      BitVec o = g;
      if (i == 0) o.flip(0);
      return o;
    };
    auto [ra, rb] = run_both(
        p, [&] { return labit_send(p.a, p.ot_a, 4, 16, &h); }, [&] { return labit_receive(p.b, p.ot_b, 4, 16); });
    aborts += abort_phase(rb).has_value();
  }
  CHECK(within_3sigma(aborts, n, 0.5));
}

TEST_CASE("a receiver flipping d is always caught") {
  Parties p(2, kParams);
  LabitHooks h;
  h.flip_d = [](std::size_t k) { return k == 1; };
  auto [ra, rb] = run_both(
      p, [&] { return labit_send(p.a, p.ot_a, 4, 16); }, [&] { return labit_receive(p.b, p.ot_b, 4, 16, &h); });
  CHECK(abort_phase(ra) == std::optional<std::string>("labit"));
}

TEST_CASE("transpose to weak aBits on a hand instance") {
  // tau = 2, ell = 3: Gamma = 101, L = [110, 011], y = 10.
  LabitSenderOut s;
  s.gamma = BitVec::from_string("101");
  const std::vector<BitVec> l{BitVec::from_string("110"), BitVec::from_string("011")};
  s.strings = BitMatrix::from_rows(l);
  LabitReceiverOut r;
  r.y = BitVec::from_string("10");
  const std::vector<BitVec> nrows{l[0] ^ s.gamma, l[1]};
  r.strings = BitMatrix::from_rows(nrows);
  const WabitOwner o = labit_to_wabit(s);
  const WabitKeyHolder k = labit_to_wabit(r);
  CHECK(k.gamma == r.y);
  for (std::size_t j = 0; j < 3; ++j) {
    CHECK(o.bits.get(j) == s.gamma.get(j));
    for (std::size_t i = 0; i < 2; ++i) {
      CHECK(o.macs.get(j, i) == l[i].get(j));
      CHECK(k.keys.get(j, i) == nrows[i].get(j));
    }
    const BitVec want = o.bits.get(j) ? (k.keys.row(j) ^ k.gamma) : k.keys.row(j);
    CHECK(o.macs.row(j) == want);
  }
  // Round trip: transposing back recovers the LaBit strings.
  CHECK(o.macs.transpose() == s.strings);
  CHECK(k.keys.transpose() == r.strings);

  LabitSenderOut zero = s;
  zero.gamma = BitVec(3);
  const WabitOwner oz = labit_to_wabit(zero);
  CHECK(oz.bits.is_zero());
}

TEST_CASE("amplification keeps the MAC relation") {
  Rng rng(3);
  SUBCASE("identity matrix leaves the weak aBits unchanged") {
    Parties p(3, kParams);
    const std::size_t tau = 16, ell = 10;
    WabitKeyHolder k{rng.bits(tau), BitMatrix::random(ell, tau, rng)};
    WabitOwner o{rng.bits(ell), k.keys};
    for (std::size_t i = 0; i < ell; ++i) {
      if (o.bits.get(i)) o.macs.xor_row(i, k.gamma.words());
    }
    const BitMatrix id = BitMatrix::identity(tau);
    Block delta;
    auto [ra, rb] = run_both_or_throw(
        p, [&] { return wabit_amplify_owner(p.a, o, tau); },
        [&] { return wabit_amplify_key_holder(p.b, k, tau, delta, &id); });
    CHECK(BitVec::from_block(delta, tau) == k.gamma);
    for (std::size_t i = 0; i < ell; ++i) {
      CHECK(BitVec::from_block((*ra.value)[i].tag, tau) == o.macs.row(i));
      CHECK(BitVec::from_block((*rb.value)[i].tag, tau) == k.keys.row(i));
    }
  }
  SUBCASE("random matrix, psi = 8, tau = 59") {
    Parties p(4, kParams);
    const std::size_t tau = labit_tau(8), ell = 50;
    REQUIRE(tau == 59);
    WabitKeyHolder k{rng.bits(tau), BitMatrix::random(ell, tau, rng)};
    WabitOwner o{rng.bits(ell), k.keys};
    for (std::size_t i = 0; i < ell; ++i) {
      if (o.bits.get(i)) o.macs.xor_row(i, k.gamma.words());
    }
    Block delta;
    auto [ra, rb] = run_both_or_throw(
        p, [&] { return wabit_amplify_owner(p.a, o, 8); }, [&] { return wabit_amplify_key_holder(p.b, k, 8, delta); });
    for (std::size_t i = 0; i < ell; ++i) CHECK(mac_valid((*ra.value)[i], (*rb.value)[i], delta));
  }
  SUBCASE("linearity") {
    const BitMatrix a = BitMatrix::random(8, 59, rng);
    const BitVec m1 = rng.bits(59), m2 = rng.bits(59);
    CHECK(mat_vec_mul(a, m1 ^ m2) == (mat_vec_mul(a, m1) ^ mat_vec_mul(a, m2)));
  }
}

TEST_CASE("produce_abits yields valid, homomorphic aBits") {
  Parties p(5, {64, 16});
  HashCounter::reset();
  auto [ra, rb] = run_both_or_throw(
      p, [&] { return produce_abits(p.a, p.ot_a, Role::Alice, 1000, 64); },
      [&] { return produce_abits(p.b, p.ot_b, Role::Alice, 1000, 64); });
  const auto& own = ra.value->halves;
  const auto& key = rb.value->halves;
  const Block delta = rb.value->delta;
  REQUIRE(own.size() == 1000);
  std::size_t ones = 0;
  for (std::size_t i = 0; i < 1000; ++i) {
    CHECK(mac_valid(own[i], key[i], delta));
    ones += own[i].bit;
  }
  CHECK(within_3sigma(ones, 1000, 0.5));
  for (std::size_t i = 0; i + 1 < 1000; i += 37) CHECK(mac_valid(own[i] ^ own[i + 1], key[i] ^ key[i + 1], delta));
  CHECK(p.ot_a.ots_used() == seed_ots_for(64) + 0);
}
