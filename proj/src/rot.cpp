#include "mac2pc/rot.hpp"

#include "mac2pc/abit.hpp"
#include "mac2pc/ro.hpp"
#include "mac2pc/wire.hpp"

namespace mac2pc {

namespace {

Block hash_row(std::span<const std::uint64_t> row, std::size_t bits, unsigned kappa) {
  return hash_block(Domain::Rot, {reinterpret_cast<const std::uint8_t*>(row.data()), bytes_for_bits(bits)}, kappa);
}

}  // namespace

std::size_t rot_tau(unsigned kappa) { return (4 * static_cast<std::size_t>(kappa) + 2) / 3; }

RotSenderOut rot_extend_send(Session& s, SeedOtBackend& ot, std::size_t count) {
  const std::size_t tau = rot_tau(s.kappa());
  const WabitKeyHolder w = labit_to_wabit(labit_receive(s, ot, tau, count));
  RotSenderOut out;
  out.x0.resize(count);
  out.x1.resize(count);
  std::vector<std::uint64_t> shifted(w.keys.stride());
  for (std::size_t i = 0; i < count; ++i) {
    const auto k = w.keys.row_words(i);
    out.x0[i] = hash_row(k, tau, s.kappa());
    for (std::size_t j = 0; j < shifted.size(); ++j) shifted[j] = k[j] ^ w.gamma.words()[j];
    out.x1[i] = hash_row(shifted, tau, s.kappa());
  }
  return out;
}

RotReceiverOut rot_extend_receive(Session& s, SeedOtBackend& ot, std::size_t count) {
  const std::size_t tau = rot_tau(s.kappa());
  const WabitOwner w = labit_to_wabit(labit_send(s, ot, tau, count));
  RotReceiverOut out;
  out.choices = w.bits;
  out.y.resize(count);
  for (std::size_t i = 0; i < count; ++i) out.y[i] = hash_row(w.macs.row_words(i), tau, s.kappa());
  return out;
}

void rot_send_messages(Session& s, const RotSenderOut& pads, std::span<const Block> m0, std::span<const Block> m1) {
  if (m0.size() != pads.x0.size() || m1.size() != pads.x1.size()) throw UsageError("rot: message count mismatch");
  ByteWriter w0, w1;
  for (std::size_t i = 0; i < m0.size(); ++i) {
    w0.block(m0[i] ^ pads.x0[i], s.kappa());
    w1.block(m1[i] ^ pads.x1[i], s.kappa());
  }
  s.ch.send(MsgType::RotMask0, w0.take());
  s.ch.send(MsgType::RotMask1, w1.take());
}

std::vector<Block> rot_receive_messages(Session& s, const RotReceiverOut& pads) {
  const auto p0 = s.ch.recv(MsgType::RotMask0);
  const auto p1 = s.ch.recv(MsgType::RotMask1);
  ByteReader r0(p0, "rot"), r1(p1, "rot");
  std::vector<Block> out(pads.y.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Block a = r0.block(s.kappa());
    const Block b = r1.block(s.kappa());
    out[i] = (pads.choices.get(i) ? b : a) ^ pads.y[i];
  }
  r0.expect_end();
  r1.expect_end();
  return out;
}

}  // namespace mac2pc
