#include "mac2pc/local.hpp"

#include <chrono>

#include "mac2pc/ro.hpp"
#include "mac2pc/wire.hpp"

namespace mac2pc {

namespace {

Rng::Seed derive(std::string_view tag, std::uint64_t seed, std::uint8_t extra) {
  ByteWriter w;
  w.u64(seed);
  w.u8(extra);
  const Digest d = hash(tag, w.data());
  Rng::Seed s;
  std::copy_n(d.begin(), s.size(), s.begin());
  return s;
}

double since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

Rng party_rng(std::uint64_t seed, Role r) { return Rng(derive("PARTY-RNG", seed, static_cast<std::uint8_t>(r))); }

Rng::Seed seed_ot_seed(std::uint64_t seed) { return derive("SEED-OT", seed, 0); }

LocalDealResult deal_local(const DealerConfig& cfg, std::uint64_t seed) {
  auto [ca, cb] = memory_channel_pair();
  const SecurityParams params{cfg.kappa, cfg.psi};
  Session sa(*ca, Role::Alice, params, party_rng(seed, Role::Alice));
  Session sb(*cb, Role::Bob, params, party_rng(seed, Role::Bob));
  DealerSeedOt ota(seed_ot_seed(seed)), otb(seed_ot_seed(seed));
  LocalDealResult out;
  const auto t0 = std::chrono::steady_clock::now();
  run_pair(
      [&] {
        const SessionId sid = agree_session_id(sa);
        out.alice = deal(sa, ota, cfg, sid);
      },
      [&] {
        const SessionId sid = agree_session_id(sb);
        out.bob = deal(sb, otb, cfg, sid);
      },
      [&] { ca->close(); }, [&] { cb->close(); });
  out.seconds = since(t0);
  out.bytes = ca->stats().bytes_sent + cb->stats().bytes_sent;
  return out;
}

LocalEvalResult evaluate_local(const Circuit& c, const BitVec& in_alice, const BitVec& in_bob, MaterialStore& alice,
                               MaterialStore& bob, std::uint64_t seed, const EvalOptions& opts) {
  auto [ca, cb] = memory_channel_pair();
  const SecurityParams pa{alice.kappa, alice.psi}, pb{bob.kappa, bob.psi};
  Session sa(*ca, Role::Alice, pa, party_rng(seed ^ 0x0E7A1ULL, Role::Alice));
  Session sb(*cb, Role::Bob, pb, party_rng(seed ^ 0x0E7A1ULL, Role::Bob));
  LocalEvalResult out;
  const auto t0 = std::chrono::steady_clock::now();
  run_pair(
      [&] {
        auto r = evaluate(sa, c, in_alice, alice, opts);
        if (r.outputs) out.out_alice = *r.outputs;
        out.stats_alice = r.stats;
      },
      [&] {
        auto r = evaluate(sb, c, in_bob, bob, opts);
        if (r.outputs) out.out_bob = *r.outputs;
        out.stats_bob = r.stats;
      },
      [&] { ca->close(); }, [&] { cb->close(); });
  out.seconds = since(t0);
  out.bytes = ca->stats().bytes_sent + cb->stats().bytes_sent;
  return out;
}

DealerConfig config_for(const Circuit& c, std::size_t blocks, SecurityParams params,
                        std::optional<std::size_t> bucket) {
  DealerConfig cfg = DealerConfig::for_circuit(blocks * c.and_count(), blocks * c.header().inputs_of(Role::Alice),
                                               blocks * c.header().inputs_of(Role::Bob), params.kappa, params.psi);
  cfg.bucket_aot = bucket;
  cfg.bucket_aand = bucket;
  return cfg;
}

LocalRun run_local(const Circuit& c, const BitVec& in_alice, const BitVec& in_bob, SecurityParams params,
                   std::uint64_t seed, std::optional<std::size_t> bucket) {
  LocalRun run;
  run.deal = deal_local(config_for(c, 1, params, bucket), seed);
  run.eval = evaluate_local(c, in_alice, in_bob, run.deal.alice, run.deal.bob, seed);
  return run;
}

}  // namespace mac2pc
