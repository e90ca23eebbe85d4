#pragma once

#include <functional>
#include <span>
#include <vector>

#include "mac2pc/auth.hpp"
#include "mac2pc/bitlinalg.hpp"
#include "mac2pc/session.hpp"

namespace mac2pc {

/// One party's view of an authenticated OT: x0, x1 belong to the sender,
/// c and z = c(x0 ^ x1) ^ x0 to the receiver.
struct Aot {
  ABit x0, x1, c, z;
  bool operator==(const Aot&) const = default;
};

/// Test hooks for dishonest LaOT parties.
struct LaotHooks {
  /// Sender: edit the plaintext x1 || M_x1 || T_x1 of instance i before it is masked.
  std::function<void(std::size_t i, BitVec& payload1)> edit_x1;
  /// Receiver: flip the announced d of instance i.
  std::function<bool(std::size_t i)> flip_d;
};

/// Leaky authenticated OTs: a corrupt sender may learn the choice bit at
/// the risk of being caught. Consumes 2*count sender aBits then 2*count
/// receiver aBits from `src`.
std::vector<Aot> laot_batch(Session& s, Role sender, std::size_t count, AbitSource& src,
                            const LaotHooks* hooks = nullptr);

/// Folds `add` into `acc` for a whole round of buckets. The sender reveals
/// d = x0 ^ x1 ^ x0' ^ x1' under the deferred MAC check.
void combine_aots(Session& s, Role sender, std::span<Aot> acc, std::span<const Aot> add);

/// Bucketed combiner: bucket * count leaky OTs, a permutation chosen by the
/// receiver, buckets folded left to right.
std::vector<Aot> aot_produce(Session& s, Role sender, std::size_t count, std::size_t bucket, AbitSource& src);

/// aBits consumed by aot_produce per side: 2 * bucket * count.
inline std::size_t aot_abits_per_side(std::size_t count, std::size_t bucket) { return 2 * bucket * count; }

}  // namespace mac2pc
