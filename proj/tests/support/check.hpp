#pragma once

#include "mac2pc/aand.hpp"
#include "mac2pc/aot.hpp"
#include "mac2pc/auth.hpp"

namespace mac2pc::testing {

/// Both views of an aOT are consistent: MACs verify under the holders'
/// global keys and z = c(x0 ^ x1) ^ x0.
inline bool aot_consistent(const Aot& snd, const Aot& rcv, const Block& delta_at_sender,
                           const Block& delta_at_receiver) {
  const bool macs = mac_valid(snd.x0, rcv.x0, delta_at_receiver) && mac_valid(snd.x1, rcv.x1, delta_at_receiver) &&
                    mac_valid(rcv.c, snd.c, delta_at_sender) && mac_valid(rcv.z, snd.z, delta_at_sender);
  const bool ot = rcv.z.bit == (rcv.c.bit ? snd.x1.bit : snd.x0.bit);
  return macs && ot;
}

inline bool aand_consistent(const Aand& own, const Aand& key, const Block& delta_at_key_holder) {
  return mac_valid(own.x, key.x, delta_at_key_holder) && mac_valid(own.y, key.y, delta_at_key_holder) &&
         mac_valid(own.z, key.z, delta_at_key_holder) && own.z.bit == (own.x.bit && own.y.bit);
}

}  // namespace mac2pc::testing
