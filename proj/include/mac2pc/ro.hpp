#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>

#include "mac2pc/bitlinalg.hpp"
#include "mac2pc/block.hpp"

namespace mac2pc {

using Digest = std::array<std::uint8_t, 32>;

/// Every use of the random oracle carries one of these tags.
enum class Domain : std::uint8_t {
  EqCommit,
  LaotTransfer,
  LaotRecommit,
  LaandU,
  Rot,
  Prg,
  Acc,
  AccMac,
  DeltaCommit,
  SeedOt,
  Test,
  kCount,
};

std::string_view domain_tag(Domain d);

/// SHA-256 over be32(len(tag)) || tag || input.
Digest hash(std::string_view tag, std::span<const std::uint8_t> input);
Digest hash(Domain d, std::span<const std::uint8_t> input);
/// First `bits` bits of hash(d, input).
Block hash_block(Domain d, std::span<const std::uint8_t> input, unsigned bits);
/// Hash of a list of blocks, each serialized to bytes_for_bits(bits) bytes.
Block hash_blocks(Domain d, std::initializer_list<Block> in, unsigned bits);

/// Counter-mode stream: block j is hash(PRG, seed || le64(j)).
BitVec expand(std::span<const std::uint8_t> seed, std::size_t out_bits);
inline BitVec expand(const Digest& seed, std::size_t out_bits) {
  return expand(std::span<const std::uint8_t>(seed), out_bits);
}
/// message ^ expand(hash(PRG, key_material), |message|). Self-inverse.
BitVec mask(const BitVec& key_material, const BitVec& message);

/// Per-thread count of oracle invocations, by domain. Each protocol party
/// runs on its own thread, so the counters attribute calls to a party.
struct HashCounter {
  static std::uint64_t get(Domain d);
  static void reset();
};

/// Running hash chain N <- G(N, H(mac)) over revealed MACs.
class MacAccumulator {
 public:
  explicit MacAccumulator(unsigned kappa = kMaxKappa) : kappa_(kappa) {}
  void absorb(const Block& mac);
  const Digest& state() const { return state_; }
  std::uint64_t count() const { return count_; }
  bool operator==(const MacAccumulator& o) const { return state_ == o.state_ && count_ == o.count_; }

 private:
  unsigned kappa_;
  Digest state_{};
  std::uint64_t count_ = 0;
};

}  // namespace mac2pc
