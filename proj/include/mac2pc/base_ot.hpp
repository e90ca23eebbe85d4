#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mac2pc/bitlinalg.hpp"
#include "mac2pc/rng.hpp"
#include "mac2pc/session.hpp"

namespace mac2pc {

/// Source of the seed OTs. Each party holds its own instance; the k-th
/// call on one side pairs with the k-th call on the other.
class SeedOtBackend {
 public:
  virtual ~SeedOtBackend() = default;
  /// m0[i], m1[i] all of one length.
  virtual void send(Session& s, std::span<const BitVec> m0, std::span<const BitVec> m1) = 0;
  virtual std::vector<BitVec> receive(Session& s, const BitVec& choices, std::size_t len) = 0;

  std::uint64_t ots_used() const { return used_; }

 protected:
  std::uint64_t used_ = 0;
};

/// NOT SECURE. Both parties expand a shared seed into random OTs and
/// derandomize them; this stands in for a public-key base OT whose cost is
/// outside the measured protocol.
class DealerSeedOt final : public SeedOtBackend {
 public:
  explicit DealerSeedOt(const Rng::Seed& shared) : shared_(shared) {}
  void send(Session& s, std::span<const BitVec> m0, std::span<const BitVec> m1) override;
  std::vector<BitVec> receive(Session& s, const BitVec& choices, std::size_t len) override;

 private:
  Rng call_rng();
  Rng::Seed shared_;
  std::uint64_t calls_ = 0;
};

void seed_ot_send(Session& s, SeedOtBackend& ot, std::span<const BitVec> m0, std::span<const BitVec> m1);
std::vector<BitVec> seed_ot_receive(Session& s, SeedOtBackend& ot, const BitVec& choices, std::size_t len);

/// Long-message OT from kappa-bit seed OTs: row i of m0/m1 is masked with
/// expand(seed_b) and both are sent; the receiver unmasks its branch.
void extend_ot_send(Session& s, SeedOtBackend& ot, const BitMatrix& m0, const BitMatrix& m1);
BitMatrix extend_ot_receive(Session& s, SeedOtBackend& ot, const BitVec& choices, std::size_t len);

}  // namespace mac2pc
