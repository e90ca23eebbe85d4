#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mac2pc/aand.hpp"
#include "mac2pc/aot.hpp"
#include "mac2pc/auth.hpp"
#include "mac2pc/base_ot.hpp"
#include "mac2pc/session.hpp"

namespace mac2pc {

using SessionId = std::array<std::uint8_t, 16>;
using KeyCommit = std::array<std::uint8_t, 16>;

struct DealerConfig {
  unsigned kappa = 128;
  unsigned psi = 40;
  std::size_t n_abits_A = 0;
  std::size_t n_abits_B = 0;
  std::size_t n_aands_A = 0;
  std::size_t n_aands_B = 0;
  std::size_t n_aots_AB = 0;  // Alice sends
  std::size_t n_aots_BA = 0;  // Bob sends
  std::optional<std::size_t> bucket_aot;
  std::optional<std::size_t> bucket_aand;

  /// Material for a circuit: per AND gate 2 aOTs, 2 aANDs and 2 aBits (one
  /// of each per party or direction), plus one aBit per input wire.
  static DealerConfig for_circuit(std::size_t and_gates, std::size_t inputs_A, std::size_t inputs_B,
                                  unsigned kappa = 128, unsigned psi = 40);

  std::size_t aot_bucket(std::size_t count) const;
  std::size_t aand_bucket(std::size_t count) const;
  /// aBits that `owner` must own to run the whole dealer.
  std::size_t abits_owned_total(Role owner) const;
};

/// One party's preprocessed material, consumed front to back.
class MaterialStore {
 public:
  static constexpr std::uint16_t kVersion = 1;
  static constexpr std::size_t kHeaderSize = 64;

  Role role = Role::Alice;
  unsigned kappa = 128;
  unsigned psi = 40;
  SessionId session_id{};
  Block delta;           // the global key this party holds
  KeyCommit own_commit{};
  KeyCommit peer_commit{};

  std::vector<ABit> abit_own;   // bits I own, with MACs
  std::vector<ABit> abit_key;   // keys on the peer's bits
  std::vector<Aand> aand_own;   // triples I own
  std::vector<Aand> aand_key;   // keys on the peer's triples
  std::vector<Aot> aot_send;    // OTs where I am the sender
  std::vector<Aot> aot_recv;    // OTs where I am the receiver

  /// Next record for the given owner (or sender, for OTs).
  ABit take_abit(Role owner);
  Aand take_aand(Role owner);
  Aot take_aot(Role sender);

  struct Cursors {
    std::size_t abit_own = 0, abit_key = 0, aand_own = 0, aand_key = 0, aot_send = 0, aot_recv = 0;
    bool operator==(const Cursors&) const = default;
  };
  const Cursors& consumed() const { return cur_; }
  Cursors remaining() const;

  std::vector<std::uint8_t> serialize() const;
  static MaterialStore deserialize(std::span<const std::uint8_t> bytes);
  void save(const std::string& path, bool overwrite) const;
  static MaterialStore load(const std::string& path);

 private:
  Cursors cur_;
};

/// H(session_id || delta), truncated.
KeyCommit commit_delta(const SessionId& sid, const Block& delta, unsigned kappa);

/// Both parties contribute a nonce; the session id is a hash of the two.
SessionId agree_session_id(Session& s);

/// Runs the whole preprocessing phase: aBits in both directions, aOTs in
/// both directions, aANDs for both owners, a final deferred-MAC flush, and
/// an exchange of global-key commitments. Sets s.delta.
MaterialStore deal(Session& s, SeedOtBackend& ot, const DealerConfig& cfg, const SessionId& sid);

/// Online handshake on stored material: parameters, session id and key
/// commitments must agree.
void material_handshake(Session& s, const MaterialStore& m);

}  // namespace mac2pc
