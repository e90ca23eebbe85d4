#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "mac2pc/auth.hpp"
#include "mac2pc/base_ot.hpp"
#include "mac2pc/bitlinalg.hpp"
#include "mac2pc/session.hpp"

namespace mac2pc {

/// Test hooks for playing a dishonest party in the LaBit protocol.
struct LabitHooks {
  /// Sender: the global string offered in OT i (default: the real one).
  std::function<BitVec(std::size_t i, const BitVec& gamma)> ot_gamma;
  /// Receiver: flip the announced d for the k-th pair.
  std::function<bool(std::size_t k)> flip_d;
  /// Sender: observes the pairing it received (partner of each OT).
  std::function<void(const std::vector<std::uint32_t>& partners)> saw_pairing;
};

/// The OT sender of LaBit; it ends up owning the bits.
struct LabitSenderOut {
  BitVec gamma;                         // ell bits
  BitMatrix strings;                    // tau x ell, the kept L_i
  std::vector<std::uint32_t> selected;  // indices of the kept instances
  std::vector<std::uint32_t> partners;  // the full pairing
};

/// The OT receiver of LaBit; it ends up holding the keys.
struct LabitReceiverOut {
  BitVec y;                             // tau bits
  BitMatrix strings;                    // tau x ell, the kept N_i = L_i ^ y_i*gamma
  std::vector<std::uint32_t> selected;
  std::vector<std::uint32_t> partners;
};

/// 2*tau OTs of ell-bit strings, a random pairing chosen by the receiver,
/// and one equality check over the paired differences. Keeps the smaller
/// index of every pair.
LabitSenderOut labit_send(Session& s, SeedOtBackend& ot, std::size_t tau, std::size_t ell,
                          const LabitHooks* hooks = nullptr);
LabitReceiverOut labit_receive(Session& s, SeedOtBackend& ot, std::size_t tau, std::size_t ell,
                               const LabitHooks* hooks = nullptr);

/// Weak aBits: mac_j == key_j ^ bit_j * gamma with tau-bit keys.
struct WabitOwner {
  BitVec bits;      // ell
  BitMatrix macs;   // ell x tau
};
struct WabitKeyHolder {
  BitVec gamma;     // tau
  BitMatrix keys;   // ell x tau
};

/// Local transpose of LaBit output into weak aBits.
WabitOwner labit_to_wabit(const LabitSenderOut& out);
WabitKeyHolder labit_to_wabit(const LabitReceiverOut& out);

/// Key holder samples a key_bits x tau matrix A, sends it, and both sides
/// multiply every MAC/key (and the key holder its gamma) by A.
std::vector<ABit> wabit_amplify_owner(Session& s, const WabitOwner& w, unsigned key_bits);
std::vector<ABit> wabit_amplify_key_holder(Session& s, const WabitKeyHolder& w, unsigned key_bits,
                                           Block& delta_out, const BitMatrix* fixed_matrix = nullptr);

/// tau = ceil(22 * key_bits / 3).
std::size_t labit_tau(unsigned key_bits);
/// Seed OTs consumed by one produce_abits call: 2 * labit_tau.
std::size_t seed_ots_for(unsigned key_bits);

struct AbitBatch {
  std::vector<ABit> halves;  // MACs if I own the bits, keys otherwise
  Block delta;               // set on the key holder
};

/// Full pipeline: OT extension, LaBit, transpose, amplification. `owner`
/// gets count random authenticated bits; the other party gets the keys and
/// a fresh global key.
AbitBatch produce_abits(Session& s, SeedOtBackend& ot, Role owner, std::size_t count, unsigned key_bits);

}  // namespace mac2pc
