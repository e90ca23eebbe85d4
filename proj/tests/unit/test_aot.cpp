#include <cmath>

#include "doctest.h"
#include "mac2pc/aot.hpp"
#include "mac2pc/bucket.hpp"
#include "support/check.hpp"
#include "support/harness.hpp"
#include "support/ideal.hpp"

using namespace mac2pc;
using namespace mac2pc::testing;

namespace {

bool within_3sigma(std::size_t hits, std::size_t n, double p) {
  return std::abs(static_cast<double>(hits) - n * p) <= 3 * std::sqrt(n * p * (1 - p));
}

/// Alice sends; sources hold 2*count aBits for each side.
struct Setup {
  Setup(std::uint64_t seed, unsigned kappa, std::size_t count)
      : p(seed, {kappa, 40}), rng(seed), d(rng, kappa) {
    p.a.delta = d.delta_a;
    p.b.delta = d.delta_b;
    std::tie(src_a, src_b) = d.sources(2 * count, 2 * count);
  }
  Parties p;
  Rng rng;
  IdealDealer d;
  AbitSource src_a, src_b;
};

}  // namespace

TEST_CASE("honest leaky OTs satisfy z = x_c and all MAC relations") {
  Setup st(1, 64, 1000);
  auto [ra, rb] = run_both_or_throw(
      st.p, [&] { return laot_batch(st.p.a, Role::Alice, 1000, st.src_a); },
      [&] { return laot_batch(st.p.b, Role::Alice, 1000, st.src_b); });
  for (std::size_t i = 0; i < 1000; ++i) {
    CHECK(aot_consistent((*ra.value)[i], (*rb.value)[i], st.d.delta_a, st.d.delta_b));
  }
}

TEST_CASE("selective-failure probe aborts exactly when c = 1") {
  const std::size_t n = 1000;
  std::size_t aborts = 0;
  for (std::size_t t = 0; t < n; ++t) {
    Setup st(100 + t, 32, 1);
    const bool c = st.src_b.own.items()[0].bit;
    LaotHooks h;
    h.edit_x1 = [](std::size_t, BitVec& payload) { payload.flip(1); };
    auto [ra, rb] = run_both(
        st.p, [&] { return laot_batch(st.p.a, Role::Alice, 1, st.src_a, &h); },
        [&] { return laot_batch(st.p.b, Role::Alice, 1, st.src_b); });
    const bool aborted = abort_phase(rb) == std::optional<std::string>("laot");
    CHECK(aborted == c);
    aborts += aborted;
  }
  CHECK(within_3sigma(aborts, n, 0.5));
}

TEST_CASE("a receiver announcing the wrong d is caught") {
  // Succeeding needs the unseen pad, 2^-16 per trial at kappa = 16.
  std::size_t passes = 0;
  for (std::size_t t = 0; t < 1000; ++t) {
    Setup st(5000 + t, 16, 1);
    LaotHooks h;
    h.flip_d = [](std::size_t) { return true; };
    auto [ra, rb] = run_both(
        st.p, [&] { return laot_batch(st.p.a, Role::Alice, 1, st.src_a); },
        [&] { return laot_batch(st.p.b, Role::Alice, 1, st.src_b, &h); });
    passes += ra.ok();
  }
  CHECK(passes == 0);
}

TEST_CASE("combining two OTs, exhaustive over input bits") {
  for (unsigned bits = 0; bits < 64; ++bits) {
    Parties p(bits, {32, 40});
    Rng rng(bits);
    IdealDealer d(rng, 32);
    p.a.delta = d.delta_a;
    p.b.delta = d.delta_b;
    std::vector<Aot> snd(2), rcv(2);
    for (int q = 0; q < 2; ++q) {
      const bool x0 = (bits >> (3 * q)) & 1, x1 = (bits >> (3 * q + 1)) & 1, c = (bits >> (3 * q + 2)) & 1;
      auto [x0o, x0k] = d.abit(Role::Alice, x0);
      auto [x1o, x1k] = d.abit(Role::Alice, x1);
      auto [co, ck] = d.abit(Role::Bob, c);
      auto [zo, zk] = d.abit(Role::Bob, c ? x1 : x0);
      snd[q] = Aot{x0o, x1o, ck, zk};
      rcv[q] = Aot{x0k, x1k, co, zo};
    }
    std::vector<Aot> acc_a{snd[0]}, acc_b{rcv[0]};
    run_both_or_throw(
        p,
        [&] {
          combine_aots(p.a, Role::Alice, acc_a, std::span<const Aot>(&snd[1], 1));
          p.a.mac.flush(p.a.ch, MsgType::RtAccFlush, "test");
        },
        [&] {
          combine_aots(p.b, Role::Alice, acc_b, std::span<const Aot>(&rcv[1], 1));
          p.b.mac.flush(p.b.ch, MsgType::RtAccFlush, "test");
        });
    CHECK(aot_consistent(acc_a[0], acc_b[0], d.delta_a, d.delta_b));
    CHECK(acc_b[0].c.bit == (rcv[0].c.bit != rcv[1].c.bit));
    const bool dbit = (snd[0].x0.bit != snd[0].x1.bit) != (snd[1].x0.bit != snd[1].x1.bit);
    if (!dbit) CHECK(acc_b[0].z.bit == (rcv[0].z.bit != rcv[1].z.bit));
  }
}

TEST_CASE("combined choice bit is uniform when one input's choice is known") {
  Rng rng(7);
  IdealDealer d(rng, 32);
  std::size_t ones = 0;
  const std::size_t n = 4000;
  for (std::size_t t = 0; t < n; ++t) {
    // The adversary fixes c2 = 1; c1 comes from an honest quad.
    auto [s1, r1] = d.aot(Role::Alice);
    ones += r1.c.bit != true;
  }
  CHECK(within_3sigma(ones, n, 0.5));
}

TEST_CASE("bucketed aOTs are secure and cost 6B hash calls each") {
  const std::size_t count = 60, bucket = 3;
  Setup st(9, 64, bucket * count);
  HashCounter::reset();
  auto [ra, rb] = run_both_or_throw(
      st.p,
      [&] {
        auto out = aot_produce(st.p.a, Role::Alice, count, bucket, st.src_a);
        st.p.a.mac.flush(st.p.a.ch, MsgType::RtAccFlush, "test");
        return std::pair{out, HashCounter::get(Domain::LaotTransfer) + HashCounter::get(Domain::LaotRecommit)};
      },
      [&] {
        auto out = aot_produce(st.p.b, Role::Alice, count, bucket, st.src_b);
        st.p.b.mac.flush(st.p.b.ch, MsgType::RtAccFlush, "test");
        return std::pair{out, HashCounter::get(Domain::LaotTransfer) + HashCounter::get(Domain::LaotRecommit)};
      });
  for (std::size_t i = 0; i < count; ++i) {
    CHECK(aot_consistent(ra.value->first[i], rb.value->first[i], st.d.delta_a, st.d.delta_b));
  }
  CHECK(ra.value->second + rb.value->second == 6 * bucket * count);
  CHECK(st.src_a.own.remaining() == 0);
  CHECK(st.src_b.own.remaining() == 0);
}

TEST_CASE("bucket size selection") {
  CHECK(bucket_size_for(1024, 40) == 5);
  CHECK(bucket_size_for(std::size_t{1} << 20, 100) == 6);
  CHECK(kDefaultBucketSize == 4);
}
