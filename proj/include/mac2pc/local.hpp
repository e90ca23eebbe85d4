#pragma once

#include <cstdint>
#include <exception>
#include <optional>
#include <thread>
#include <utility>

#include "mac2pc/circuit.hpp"
#include "mac2pc/dealer.hpp"
#include "mac2pc/runtime.hpp"

namespace mac2pc {

/// Party randomness derived from a user seed and the role, so that both
/// parties can be started with the same --seed.
Rng party_rng(std::uint64_t seed, Role r);
/// The shared seed of the insecure dealer seed-OT backend.
Rng::Seed seed_ot_seed(std::uint64_t seed);

/// Runs fa and fb on two threads. When one throws, `on_error` (typically
/// closing that party's channel) runs so the other cannot block forever.
/// Rethrows the first failure that is not a transport error caused by it.
template <class FA, class FB, class CloseA, class CloseB>
void run_pair(FA&& fa, FB&& fb, CloseA&& close_a, CloseB&& close_b) {
  std::exception_ptr ea, eb;
  std::thread tb([&] {
    try {
      fb();
    } catch (...) {
      eb = std::current_exception();
      close_b();
    }
  });
  try {
    fa();
  } catch (...) {
    ea = std::current_exception();
    close_a();
  }
  tb.join();
  for (auto e : {ea, eb}) {
    if (!e) continue;
    try {
      std::rethrow_exception(e);
    } catch (const TransportError&) {
    } catch (...) {
      throw;
    }
  }
  if (ea) std::rethrow_exception(ea);
  if (eb) std::rethrow_exception(eb);
}

struct LocalDealResult {
  MaterialStore alice;
  MaterialStore bob;
  double seconds = 0;
  std::uint64_t bytes = 0;  // sent by both parties
};

/// Both parties of the dealer in one process over an in-memory channel.
LocalDealResult deal_local(const DealerConfig& cfg, std::uint64_t seed);

struct LocalEvalResult {
  BitVec out_alice;
  BitVec out_bob;
  RuntimeStats stats_alice;
  RuntimeStats stats_bob;
  double seconds = 0;
  std::uint64_t bytes = 0;  // sent by both parties
};

/// Both parties of the online phase in one process on existing material.
LocalEvalResult evaluate_local(const Circuit& c, const BitVec& in_alice, const BitVec& in_bob, MaterialStore& alice,
                               MaterialStore& bob, std::uint64_t seed, const EvalOptions& opts = {});

/// Deals exactly the material `c` needs, then evaluates it.
struct LocalRun {
  LocalDealResult deal;
  LocalEvalResult eval;
};
LocalRun run_local(const Circuit& c, const BitVec& in_alice, const BitVec& in_bob, SecurityParams params,
                   std::uint64_t seed, std::optional<std::size_t> bucket = std::nullopt);

/// Dealer configuration for `blocks` evaluations of `c`.
DealerConfig config_for(const Circuit& c, std::size_t blocks, SecurityParams params,
                        std::optional<std::size_t> bucket = std::nullopt);

}  // namespace mac2pc
