#pragma once

#include <span>
#include <vector>

#include "mac2pc/base_ot.hpp"
#include "mac2pc/session.hpp"

namespace mac2pc {

/// Key length of the weak aBits behind random-OT extension: ceil(4*kappa/3).
std::size_t rot_tau(unsigned kappa);

struct RotSenderOut {
  std::vector<Block> x0;
  std::vector<Block> x1;
};

struct RotReceiverOut {
  BitVec choices;
  std::vector<Block> y;  // y[i] == (choices[i] ? x1 : x0)[i]
};

/// Random OTs: the sender gets X0 = H(K), X1 = H(K ^ D); the receiver, who
/// owns the weak aBit b with MAC M, gets H(M) = X_b.
RotSenderOut rot_extend_send(Session& s, SeedOtBackend& ot, std::size_t count);
RotReceiverOut rot_extend_receive(Session& s, SeedOtBackend& ot, std::size_t count);

/// Chosen messages on top of random OTs: the sender pads m0 with X0 and m1
/// with X1; the receiver learns m_b for its random choice b.
void rot_send_messages(Session& s, const RotSenderOut& pads, std::span<const Block> m0, std::span<const Block> m1);
std::vector<Block> rot_receive_messages(Session& s, const RotReceiverOut& pads);

}  // namespace mac2pc
