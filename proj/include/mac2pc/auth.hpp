#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mac2pc/block.hpp"
#include "mac2pc/common.hpp"

namespace mac2pc {

/// One party's half of an authenticated bit. On the owner's side `bit` is
/// the secret bit and `tag` its MAC; on the other side `bit` is unused
/// (kept false) and `tag` is the local key. With the key holder's global
/// key D the halves satisfy mac == key ^ bit*D.
struct ABit {
  bool bit = false;
  Block tag;

  ABit operator^(const ABit& o) const { return ABit{bit != o.bit, tag ^ o.tag}; }
  ABit& operator^=(const ABit& o) {
    bit = bit != o.bit;
    tag ^= o.tag;
    return *this;
  }
  bool operator==(const ABit&) const = default;
};

/// d * [x] for a public bit d.
inline ABit scale(const ABit& a, bool d) { return d ? a : ABit{}; }

/// [x] ^ b for a public bit b. The owner flips its bit and keeps the MAC;
/// the key holder moves its key by b*delta.
inline ABit add_const(const ABit& a, bool b, bool is_owner, const Block& delta) {
  if (!b) return a;
  return is_owner ? ABit{!a.bit, a.tag} : ABit{false, a.tag ^ delta};
}

/// Authentication of a public bit b: MAC 0 for the owner, key b*delta for
/// the key holder.
inline ABit const_abit(bool b, bool is_owner, const Block& delta) {
  return is_owner ? ABit{b, Block{}} : ABit{false, delta.select(b)};
}

inline bool mac_valid(const ABit& owner_half, const ABit& key_half, const Block& delta) {
  return owner_half.tag == (key_half.tag ^ delta.select(owner_half.bit));
}

/// A bit shared as x = x_A ^ x_B, each share authenticated towards the
/// other party. `mine` is my share with its MAC, `peer` my key on the
/// peer's share.
struct AuthShare {
  ABit mine;
  ABit peer;

  AuthShare operator^(const AuthShare& o) const { return {mine ^ o.mine, peer ^ o.peer}; }
  AuthShare& operator^=(const AuthShare& o) {
    mine ^= o.mine;
    peer ^= o.peer;
    return *this;
  }
};

inline AuthShare scale(const AuthShare& s, bool d) { return {scale(s.mine, d), scale(s.peer, d)}; }

/// Adds a public bit to the shared value. Alice absorbs it into her share;
/// Bob shifts his key on Alice's share.
inline AuthShare add_const(const AuthShare& s, bool b, Role me, const Block& my_delta) {
  if (!b) return s;
  if (me == Role::Alice) return {ABit{!s.mine.bit, s.mine.tag}, s.peer};
  return {s.mine, ABit{false, s.peer.tag ^ my_delta}};
}

/// Sequential, consume-once stream of aBit halves.
class AbitStream {
 public:
  AbitStream() = default;
  explicit AbitStream(std::vector<ABit> items) : items_(std::move(items)) {}

  std::span<const ABit> take(std::size_t n) {
    if (n > remaining()) throw OutOfMaterial("aBit stream exhausted");
    std::span<const ABit> out(items_.data() + pos_, n);
    pos_ += n;
    return out;
  }
  std::size_t remaining() const { return items_.size() - pos_; }
  std::size_t size() const { return items_.size(); }
  const std::vector<ABit>& items() const { return items_; }

 private:
  std::vector<ABit> items_;
  std::size_t pos_ = 0;
};

/// The aBits a party holds for one session: the ones it owns (MACs) and
/// the ones the peer owns (keys).
struct AbitSource {
  AbitStream own;
  AbitStream peer;

  std::span<const ABit> take(Role owner, Role me, std::size_t n) {
    return owner == me ? own.take(n) : peer.take(n);
  }
};

}  // namespace mac2pc
