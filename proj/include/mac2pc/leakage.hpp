#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mac2pc/rng.hpp"

namespace mac2pc {

/// One outcome of a leakage distribution: the adversary learns the key bits
/// in `leaked` (bit i of the mask is key bit i) and goes undetected iff `c`.
struct LeakOutcome {
  std::uint64_t leaked = 0;
  bool c = true;
  double prob = 1.0;
};

/// A leakage distribution over tau <= 64 key bits, as an enumerable table.
struct LeakageSpec {
  unsigned tau = 0;
  std::vector<LeakOutcome> outcomes;

  /// Throws UsageError unless probabilities are non-negative and sum to 1.
  void validate() const;
};

using LeakSampler = std::function<LeakOutcome(Rng&)>;

struct Estimate {
  double value = 0;
  double stderr_ = 0;
};

/// log2 E[c * 2^|S|], exact for a table.
double leak_bits(const LeakageSpec& l);
/// Monte-Carlo log2 E[c * 2^|S|] for a sampler, with the standard error of
/// the log estimate (delta method).
Estimate leak_bits_mc(const LeakSampler& l, std::size_t trials, Rng& rng);

/// Plays the guessing game: a random key, one outcome drawn from l, and an
/// adversary that guesses every unleaked bit uniformly. Returns the win rate.
double leakage_game_success(const LeakageSpec& l, std::size_t trials, Rng& rng);

/// log2 of the binomial coefficient, via lgamma.
double log2_binomial(double n, double k);

/// alpha(gamma, ell, B) = 2^-gamma C(gamma, B) ell / C(B ell, B).
double bucket_fail_prob(unsigned gamma, std::uint64_t ell, unsigned bucket);
double log2_bucket_fail_prob(unsigned gamma, std::uint64_t ell, unsigned bucket);
/// alpha at its maximising gamma = 2B - 1.
double log2_alpha_prime(unsigned bucket, std::uint64_t ell);

struct BucketMc {
  /// Survival-weighted mean number of all-leaky buckets; estimates alpha.
  Estimate expected_full;
  /// Survival-weighted probability that some bucket is all leaky.
  Estimate any_full;
};

/// Plants gamma leaky balls among B*ell, buckets them by a uniform
/// permutation and weights each trial by the survival probability 2^-gamma.
BucketMc bucket_fail_mc(unsigned gamma, std::uint64_t ell, unsigned bucket, std::size_t trials, Rng& rng);

/// Default number of vectors for the span lemma: ceil(9 psi / 2).
std::size_t span_vectors_for(unsigned psi);
/// Probability that n uniform psi-bit vectors do not span GF(2)^psi.
double span_fail_exact(unsigned psi, std::size_t n);
/// Fraction of trials in which n uniform psi-bit vectors (psi <= 64) do not span.
double span_fail_rate(unsigned psi, std::size_t n, std::size_t trials, Rng& rng);
/// Rank of psi-bit vectors packed in words.
unsigned rank_u64(std::vector<std::uint64_t> v);

/// One line of the bound report: a measured quantity against its reference.
struct BoundCheck {
  std::string name;
  double measured = 0;
  double reference = 0;
  /// Allowed |measured - reference| for two-sided checks, or 0 for a
  /// one-sided measured <= reference check.
  double tolerance = 0;
  bool pass = false;
};

/// Checks the combinatorial bounds behind the protocol parameters:
///   bucket Monte Carlo against alpha for B in {2,3,4}, ell in {4,8,16},
///   gamma in [B, 2B], within three standard errors;
///   log2 alpha'(B, ell) <= (1 - B) log2(2 ell) on a grid up to ell = 2^20,
///   and alpha'(6, 2^20) <= 2^-100;
///   the span failure rate for psi = 8 under 2^-7.
std::vector<BoundCheck> verify_bounds(std::size_t trials, Rng& rng);

}  // namespace mac2pc
