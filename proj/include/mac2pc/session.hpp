#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mac2pc/auth.hpp"
#include "mac2pc/bitlinalg.hpp"
#include "mac2pc/ro.hpp"
#include "mac2pc/rng.hpp"
#include "mac2pc/transport.hpp"

namespace mac2pc {

struct SecurityParams {
  unsigned kappa = 128;
  unsigned psi = 40;
};

void validate(const SecurityParams& p);

/// Lets a test play a cheating revealer: called on every bit this party
/// reveals (deferred or immediate) with a running site index; the hook may
/// change the bit that is sent or the MAC that is used.
using RevealHook = std::function<void(std::uint64_t site, bool& bit, Block& mac)>;

/// Deferred MAC checking. A revealed bit travels without its MAC; both
/// parties fold the would-be MAC into a hash chain (the owner from its MAC,
/// the key holder from key ^ bit*delta) and the chains are compared at the
/// next flush.
class MacChecker {
 public:
  explicit MacChecker(unsigned kappa) : sent_(kappa), received_(kappa), kappa_(kappa) {}

  /// Sends the bits of `owned` (my halves) under tag t.
  void send_reveals(Channel& ch, MsgType t, std::span<const ABit> owned);
  /// Receives bits for `keys` (my keys on peer bits) under tag t.
  BitVec recv_reveals(Channel& ch, MsgType t, std::span<const ABit> keys, const Block& delta);

  /// Exchanges chain states; any difference aborts with "deferred check failed".
  void flush(Channel& ch, MsgType t, const char* phase);

  /// Reveals bit and MAC for immediate verification.
  void send_opened(Channel& ch, MsgType t, std::span<const ABit> owned);
  BitVec recv_opened(Channel& ch, MsgType t, std::span<const ABit> keys, const Block& delta, const char* phase);

  void set_hook(RevealHook h) { hook_ = std::move(h); }
  std::uint64_t sites() const { return site_; }

 private:
  void apply_hook(bool& bit, Block& mac);

  MacAccumulator sent_;
  MacAccumulator received_;
  unsigned kappa_;
  RevealHook hook_;
  std::uint64_t site_ = 0;
};

/// Per-party protocol context: the channel, my role, parameters, my
/// randomness, the global key I hold (it verifies the peer's MACs), and
/// the deferred-check state.
class Session {
 public:
  Session(Channel& ch, Role role, SecurityParams params, Rng rng)
      : ch(ch), role(role), params(params), rng(std::move(rng)), mac(params.kappa) {
    validate(params);
  }

  Channel& ch;
  Role role;
  SecurityParams params;
  Rng rng;
  Block delta;
  MacChecker mac;

  bool is(Role r) const { return role == r; }
  unsigned kappa() const { return params.kappa; }
};

}  // namespace mac2pc
