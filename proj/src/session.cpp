#include "mac2pc/session.hpp"

#include "mac2pc/wire.hpp"

namespace mac2pc {

void validate(const SecurityParams& p) {
  if (p.kappa < 8 || p.kappa > kMaxKappa) throw UsageError("kappa must be in [8, 128]");
  if (p.psi < 1 || p.psi > 256) throw UsageError("psi must be in [1, 256]");
}

void MacChecker::apply_hook(bool& bit, Block& mac) {
  if (hook_) hook_(site_, bit, mac);
  ++site_;
}

void MacChecker::send_reveals(Channel& ch, MsgType t, std::span<const ABit> owned) {
  BitVec bits(owned.size());
  for (std::size_t i = 0; i < owned.size(); ++i) {
    bool b = owned[i].bit;
    Block m = owned[i].tag;
    apply_hook(b, m);
    bits.set(i, b);
    sent_.absorb(m);
  }
  ByteWriter w;
  w.bits(bits);
  ch.send(t, w.take());
}

BitVec MacChecker::recv_reveals(Channel& ch, MsgType t, std::span<const ABit> keys, const Block& delta) {
  const auto payload = ch.recv(t);
  ByteReader r(payload, "reveal");
  BitVec bits = r.bits();
  r.expect_end();
  if (bits.size() != keys.size()) throw ProtocolAbort("reveal", "unexpected number of revealed bits");
  for (std::size_t i = 0; i < keys.size(); ++i) received_.absorb(keys[i].tag ^ delta.select(bits.get(i)));
  return bits;
}

void MacChecker::flush(Channel& ch, MsgType t, const char* phase) {
  ByteWriter w;
  w.bytes(sent_.state());
  w.u64(sent_.count());
  ch.send(t, w.take());
  const auto payload = ch.recv(t);
  ByteReader r(payload, phase);
  const auto state = r.bytes(32);
  const std::uint64_t count = r.u64();
  r.expect_end();
  const bool ok = count == received_.count() && std::equal(state.begin(), state.end(), received_.state().begin());
  if (!ok) throw ProtocolAbort(phase, "deferred check failed");
}

void MacChecker::send_opened(Channel& ch, MsgType t, std::span<const ABit> owned) {
  ByteWriter w;
  w.u64(owned.size());
  for (const ABit& a : owned) {
    bool b = a.bit;
    Block m = a.tag;
    apply_hook(b, m);
    w.u8(b ? 1 : 0);
    w.block(m, kappa_);
  }
  ch.send(t, w.take());
}

BitVec MacChecker::recv_opened(Channel& ch, MsgType t, std::span<const ABit> keys, const Block& delta,
                               const char* phase) {
  const auto payload = ch.recv(t);
  ByteReader r(payload, phase);
  if (r.u64() != keys.size()) throw ProtocolAbort(phase, "unexpected number of opened bits");
  BitVec bits(keys.size());
  bool ok = true;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    const std::uint8_t b = r.u8();
    const Block m = r.block(kappa_);
    if (b > 1) throw ProtocolAbort(phase, "malformed opened bit");
    bits.set(i, b == 1);
    ok &= m == (keys[i].tag ^ delta.select(b == 1));
  }
  r.expect_end();
  if (!ok) throw ProtocolAbort(phase, "MAC check failed on opened bit");
  return bits;
}

}  // namespace mac2pc
