#include "mac2pc/leakage.hpp"

#include <bit>
#include <cmath>
#include <algorithm>

#include "mac2pc/bitlinalg.hpp"
#include "mac2pc/common.hpp"

namespace mac2pc {

void LeakageSpec::validate() const {
  if (tau == 0 || tau > 64) throw UsageError("leakage: tau must be in [1, 64]");
  double total = 0;
  for (const auto& o : outcomes) {
    if (o.prob < 0) throw UsageError("leakage: negative probability");
    if (tau < 64 && (o.leaked >> tau) != 0) throw UsageError("leakage: leaked bit outside the key");
    total += o.prob;
  }
  if (std::abs(total - 1.0) > 1e-9) throw UsageError("leakage: probabilities must sum to 1");
}

double leak_bits(const LeakageSpec& l) {
  l.validate();
  double e = 0;
  for (const auto& o : l.outcomes) {
    if (o.c) e += o.prob * std::ldexp(1.0, std::popcount(o.leaked));
  }
  return std::log2(e);
}

Estimate leak_bits_mc(const LeakSampler& l, std::size_t trials, Rng& rng) {
  if (trials == 0) throw UsageError("leak_bits_mc: trials must be positive");
  double sum = 0, sum2 = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    const LeakOutcome o = l(rng);
    const double v = o.c ? std::ldexp(1.0, std::popcount(o.leaked)) : 0.0;
    sum += v;
    sum2 += v * v;
  }
  const double n = static_cast<double>(trials);
  const double mean = sum / n;
  const double var = std::max(0.0, sum2 / n - mean * mean);
  const double se_mean = std::sqrt(var / n);
  return {std::log2(mean), se_mean / (mean * std::log(2.0))};
}

double leakage_game_success(const LeakageSpec& l, std::size_t trials, Rng& rng) {
  l.validate();
  const std::uint64_t key_mask = l.tau == 64 ? ~0ULL : (1ULL << l.tau) - 1;
  std::vector<double> cdf;
  double acc = 0;
  for (const auto& o : l.outcomes) cdf.push_back(acc += o.prob);
  std::size_t wins = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    const std::uint64_t key = rng.next_u64() & key_mask;
    const double u = rng.uniform01() * cdf.back();
    std::size_t k = 0;
    while (k + 1 < cdf.size() && u >= cdf[k]) ++k;
    const LeakOutcome& o = l.outcomes[k];
    if (!o.c) continue;
    // Known bits are copied, the rest guessed.
    const std::uint64_t guess = (key & o.leaked) | (rng.next_u64() & ~o.leaked & key_mask);
    wins += guess == key;
  }
  return static_cast<double>(wins) / static_cast<double>(trials);
}

// ---------------------------------------------------------------------------

double log2_binomial(double n, double k) {
  if (k < 0 || k > n) return -INFINITY;
  return (std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1)) / std::log(2.0);
}

double log2_bucket_fail_prob(unsigned gamma, std::uint64_t ell, unsigned bucket) {
  if (bucket < 1 || ell < 1) throw UsageError("bucket_fail_prob: B and ell must be positive");
  const double balls = static_cast<double>(bucket) * static_cast<double>(ell);
  if (gamma > balls) throw UsageError("bucket_fail_prob: gamma exceeds the number of balls");
  if (gamma < bucket) return -INFINITY;
  return -static_cast<double>(gamma) + log2_binomial(gamma, bucket) + std::log2(static_cast<double>(ell)) -
         log2_binomial(balls, bucket);
}

double bucket_fail_prob(unsigned gamma, std::uint64_t ell, unsigned bucket) {
  return std::exp2(log2_bucket_fail_prob(gamma, ell, bucket));
}

double log2_alpha_prime(unsigned bucket, std::uint64_t ell) {
  return log2_bucket_fail_prob(2 * bucket - 1, ell, bucket);
}

BucketMc bucket_fail_mc(unsigned gamma, std::uint64_t ell, unsigned bucket, std::size_t trials, Rng& rng) {
  const std::size_t balls = static_cast<std::size_t>(bucket) * ell;
  if (bucket < 1 || ell < 1 || gamma > balls) throw UsageError("bucket_fail_mc: domain violation");
  if (trials == 0) throw UsageError("bucket_fail_mc: trials must be positive");
  const double weight = std::ldexp(1.0, -static_cast<int>(gamma));
  // Under a uniform permutation the leaky balls occupy a uniform gamma-subset
  // of the positions, so only their positions are drawn. Position p lands in
  // bucket p / B.
  std::vector<std::uint64_t> pos(gamma), bin(gamma);
  double s_full = 0, s_full2 = 0, s_any = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    for (unsigned i = 0; i < gamma; ++i) {
      std::uint64_t p;
      do {
        p = rng.uniform(balls);
      } while (std::find(pos.begin(), pos.begin() + i, p) != pos.begin() + i);
      pos[i] = p;
      bin[i] = p / bucket;
    }
    std::sort(bin.begin(), bin.end());
    unsigned full = 0;
    for (unsigned i = 0; i < gamma;) {
      unsigned j = i;
      while (j < gamma && bin[j] == bin[i]) ++j;
      full += j - i == bucket;
      i = j;
    }
    s_full += full;
    s_full2 += static_cast<double>(full) * full;
    s_any += full > 0;
  }
  const double n = static_cast<double>(trials);
  const double m_full = s_full / n, m_any = s_any / n;
  const double v_full = std::max(0.0, s_full2 / n - m_full * m_full);
  BucketMc out;
  out.expected_full = {weight * m_full, weight * std::sqrt(v_full / n)};
  out.any_full = {weight * m_any, weight * std::sqrt(m_any * (1 - m_any) / n)};
  return out;
}

// ---------------------------------------------------------------------------

std::size_t span_vectors_for(unsigned psi) { return (9 * static_cast<std::size_t>(psi) + 1) / 2; }

double span_fail_exact(unsigned psi, std::size_t n) {
  // P(full rank) = prod_{i<psi} (1 - 2^{i-n}) for n >= psi.
  if (n < psi) return 1.0;
  double log_ok = 0;
  for (unsigned i = 0; i < psi; ++i) {
    log_ok += std::log1p(-std::ldexp(1.0, static_cast<int>(i) - static_cast<int>(n)));
  }
  return -std::expm1(log_ok);
}

unsigned rank_u64(std::vector<std::uint64_t> v) {
  unsigned rank = 0;
  for (unsigned bit = 0; bit < 64; ++bit) {
    const std::uint64_t m = 1ULL << bit;
    auto it = std::find_if(v.begin() + rank, v.end(), [m](std::uint64_t x) { return (x & m) != 0; });
    if (it == v.end()) continue;
    std::swap(v[rank], *it);
    for (std::size_t r = rank + 1; r < v.size(); ++r) {
      if (v[r] & m) v[r] ^= v[rank];
    }
    ++rank;
  }
  return rank;
}

double span_fail_rate(unsigned psi, std::size_t n, std::size_t trials, Rng& rng) {
  if (psi == 0 || psi > 64) throw UsageError("span_fail_rate: psi must be in [1, 64]");
  if (trials == 0) throw UsageError("span_fail_rate: trials must be positive");
  const std::uint64_t mask = psi == 64 ? ~0ULL : (1ULL << psi) - 1;
  std::vector<std::uint64_t> v(n);
  std::size_t fails = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    for (auto& x : v) x = rng.next_u64() & mask;
    fails += rank_u64(v) < psi;
  }
  return static_cast<double>(fails) / static_cast<double>(trials);
}

}  // namespace mac2pc

namespace mac2pc {

std::vector<BoundCheck> verify_bounds(std::size_t trials, Rng& rng) {
  if (trials == 0) throw UsageError("verify_bounds: trials must be positive");
  std::vector<BoundCheck> out;
  for (unsigned b : {2u, 3u, 4u}) {
    for (std::uint64_t ell : {4ULL, 8ULL, 16ULL}) {
      for (unsigned g = b; g <= 2 * b; ++g) {
        // Rare points get more trials so that each expects several hundred
        // all-leaky buckets.
        const double alpha = bucket_fail_prob(g, ell, b);
        const double per_trial = std::ldexp(alpha, static_cast<int>(g));
        const std::size_t n = std::max<std::size_t>(trials, std::min(2e7, std::ceil(400.0 / per_trial)));
        const BucketMc mc = bucket_fail_mc(g, ell, b, n, rng);
        BoundCheck c;
        c.name = "bucket_mc B=" + std::to_string(b) + " ell=" + std::to_string(ell) + " gamma=" + std::to_string(g);
        c.measured = mc.expected_full.value;
        c.reference = alpha;
        // Three standard errors, with the standard error taken under the
        // reference distribution when the sample saw too few hits to estimate it.
        const double null_se = std::ldexp(std::sqrt(per_trial * (1 - per_trial) / n), -static_cast<int>(g));
        c.tolerance = 3 * std::max(mc.expected_full.stderr_, null_se);
        c.pass = std::abs(c.measured - c.reference) <= c.tolerance;
        out.push_back(c);
      }
    }
  }
  for (unsigned b = 2; b <= 8; ++b) {
    for (unsigned e : {4u, 8u, 12u, 16u, 20u}) {
      BoundCheck c;
      c.name = "log2 alpha' B=" + std::to_string(b) + " ell=2^" + std::to_string(e);
      c.measured = log2_alpha_prime(b, 1ULL << e);
      c.reference = (1.0 - b) * (e + 1.0);
      c.pass = c.measured <= c.reference + 1e-9;
      out.push_back(c);
    }
  }
  {
    BoundCheck c;
    c.name = "log2 alpha' B=6 ell=2^20 vs -100";
    c.measured = log2_alpha_prime(6, 1ULL << 20);
    c.reference = -100;
    c.pass = c.measured <= c.reference;
    out.push_back(c);
  }
  {
    const std::size_t n = span_vectors_for(8);
    BoundCheck c;
    c.name = "span failure psi=8 n=" + std::to_string(n);
    c.measured = span_fail_rate(8, n, 10 * trials, rng);
    c.reference = std::exp2(-7);
    c.pass = c.measured <= c.reference && span_fail_exact(8, n) <= c.reference;
    out.push_back(c);
  }
  return out;
}

}  // namespace mac2pc
