#include <cmath>
#include <set>

#include "doctest.h"
#include "mac2pc/bitlinalg.hpp"
#include "mac2pc/leakage.hpp"

using namespace mac2pc;

namespace {

bool within_3sigma(double observed, double p, std::size_t n) {
  return std::abs(observed - p) <= 3 * std::sqrt(p * (1 - p) / static_cast<double>(n));
}

LeakageSpec never_leak(unsigned tau) { return {tau, {{0, true, 1.0}}}; }
LeakageSpec always_leak(unsigned tau, unsigned s) { return {tau, {{(1ULL << s) - 1, true, 1.0}}}; }
LeakageSpec mixed(unsigned tau) { return {tau, {{0, true, 0.5}, {1, true, 0.5}}}; }

}  // namespace

TEST_CASE("leak_bits on small tables") {
  CHECK(leak_bits(never_leak(4)) == doctest::Approx(0.0));
  CHECK(leak_bits(always_leak(8, 3)) == doctest::Approx(3.0));
  CHECK(leak_bits(mixed(4)) == doctest::Approx(std::log2(1.5)));
  // A detected outcome contributes nothing.
  const LeakageSpec caught{4, {{0b11, false, 0.5}, {0, true, 0.5}}};
  CHECK(leak_bits(caught) == doctest::Approx(-1.0));
  CHECK_THROWS_AS(leak_bits(LeakageSpec{4, {{0, true, 0.4}}}), UsageError);
}

TEST_CASE("leak_bits Monte Carlo agrees with the table") {
  Rng rng(1);
  const LeakSampler s = [](Rng& r) { return r.next_bit() ? LeakOutcome{1, true, 1} : LeakOutcome{0, true, 1}; };
  const Estimate e = leak_bits_mc(s, 100000, rng);
  CHECK(std::abs(e.value - std::log2(1.5)) <= 3 * e.stderr_);
}

TEST_CASE("guessing game matches 2^(leak - tau)") {
  Rng rng(2);
  const std::size_t n = 200000;
  for (const LeakageSpec& l : {never_leak(4), always_leak(4, 2), mixed(4)}) {
    const double p = std::exp2(leak_bits(l) - l.tau);
    CHECK(within_3sigma(leakage_game_success(l, n, rng), p, n));
  }
  CHECK(std::exp2(leak_bits(mixed(4)) - 4) == doctest::Approx(1.5 / 16));
}

TEST_CASE("bucket failure formula") {
  CHECK(bucket_fail_prob(1, 8, 2) == 0.0);
  CHECK(bucket_fail_prob(3, 8, 4) == 0.0);
  CHECK(bucket_fail_prob(2, 2, 2) == doctest::Approx(1.0 / 12));
  CHECK_THROWS_AS(bucket_fail_prob(9, 2, 4), UsageError);
  // Exhaustive: 4 balls, 2 leaky, the 3 pairings of {0,1,2,3}; one pairs the leaky balls.
  const int pairings[3][2][2] = {{{0, 1}, {2, 3}}, {{0, 2}, {1, 3}}, {{0, 3}, {1, 2}}};
  int full = 0;
  for (const auto& pr : pairings) {
    for (const auto& b : pr) full += (b[0] < 2 && b[1] < 2);
  }
  CHECK(0.25 * full / 3.0 == doctest::Approx(bucket_fail_prob(2, 2, 2)));
}

TEST_CASE("alpha is unimodal with mode 2B-1") {
  for (unsigned b = 2; b <= 6; ++b) {
    for (std::uint64_t ell : {16ULL, 256ULL, 4096ULL}) {
      for (unsigned g = b; g + 1 <= b * ell && g < 6 * b; ++g) {
        const double cur = log2_bucket_fail_prob(g, ell, b), next = log2_bucket_fail_prob(g + 1, ell, b);
        if (g < 2 * b - 1) {
          CHECK(next > cur);
        } else {
          CHECK(next <= cur + 1e-9);
        }
      }
    }
  }
}

TEST_CASE("alpha' stays under (2 ell)^(1-B)") {
  for (unsigned b = 2; b <= 6; ++b) {
    for (unsigned e = 4; e <= 12; ++e) {
      const std::uint64_t ell = 1ULL << e;
      CHECK(log2_alpha_prime(b, ell) <= (1.0 - b) * (e + 1.0));
    }
  }
  CHECK(log2_alpha_prime(6, 1ULL << 20) <= -100.0);
}

TEST_CASE("bucket Monte Carlo tracks the formula") {
  Rng rng(3);
  for (auto [g, ell, b] : {std::tuple{2u, 2ULL, 2u}, std::tuple{3u, 4ULL, 2u}, std::tuple{5u, 8ULL, 3u}}) {
    const BucketMc mc = bucket_fail_mc(g, ell, b, 20000, rng);
    const double alpha = bucket_fail_prob(g, ell, b);
    CHECK(std::abs(mc.expected_full.value - alpha) <= 3 * mc.expected_full.stderr_ + 1e-12);
    CHECK(mc.any_full.value <= alpha + 3 * mc.any_full.stderr_);
  }
}

TEST_CASE("span lemma") {
  Rng rng(4);
  CHECK(span_vectors_for(8) == 36);
  CHECK(span_vectors_for(1) == 5);
  CHECK(span_fail_exact(1, 5) == doctest::Approx(1.0 / 32));
  const double r1 = span_fail_rate(1, 5, 100000, rng);
  CHECK(within_3sigma(r1, 1.0 / 32, 100000));
  CHECK(r1 <= 1.0);
  const double r8 = span_fail_rate(8, 36, 200000, rng);
  CHECK(r8 <= std::exp2(-7));
  CHECK(span_fail_exact(8, 36) <= std::exp2(-7));
}

TEST_CASE("rank agrees with an exhaustive span check") {
  Rng rng(5);
  for (unsigned psi = 1; psi <= 4; ++psi) {
    for (int t = 0; t < 200; ++t) {
      const std::size_t n = 1 + rng.uniform(6);
      std::vector<std::uint64_t> v(n);
      for (auto& x : v) x = rng.next_u64() & ((1ULL << psi) - 1);
      std::set<std::uint64_t> span;
      for (std::uint64_t m = 0; m < (1ULL << n); ++m) {
        std::uint64_t s = 0;
        for (std::size_t i = 0; i < n; ++i) {
          if ((m >> i) & 1) s ^= v[i];
        }
        span.insert(s);
      }
      CHECK((span.size() == (1ULL << psi)) == (rank_u64(v) == psi));
      std::vector<BitVec> bv;
      for (auto x : v) bv.push_back(BitVec::from_block(Block{x, 0}, psi));
      CHECK(gf2_rank(bv) == rank_u64(v));
    }
  }
}
