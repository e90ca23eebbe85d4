#pragma once

#include <functional>
#include <span>
#include <vector>

#include "mac2pc/auth.hpp"
#include "mac2pc/session.hpp"

namespace mac2pc {

/// One party's view of an authenticated local AND: x, y, z = xy all
/// belong to the same owner.
struct Aand {
  ABit x, y, z;
  bool operator==(const Aand&) const = default;
};

struct LaandHooks {
  /// Key holder: value XORed into U of instance i (zero means honest).
  std::function<Block(std::size_t i)> tamper_u;
  /// Owner: flip the announced d of instance i.
  std::function<bool(std::size_t i)> flip_d;
};

/// Leaky authenticated ANDs: a corrupt key holder may learn x at the risk
/// of being caught. Consumes 3*count owner aBits.
std::vector<Aand> laand_batch(Session& s, Role owner, std::size_t count, AbitSource& src,
                              const LaandHooks* hooks = nullptr);

/// Folds `add` into `acc`; the owner reveals d = y ^ y' under the deferred
/// MAC check.
void combine_aands(Session& s, Role owner, std::span<Aand> acc, std::span<const Aand> add);

/// Bucketed combiner with a permutation chosen by the owner.
std::vector<Aand> aand_produce(Session& s, Role owner, std::size_t count, std::size_t bucket, AbitSource& src);

inline std::size_t aand_abits(std::size_t count, std::size_t bucket) { return 3 * bucket * count; }

}  // namespace mac2pc
