#include "mac2pc/eq.hpp"

#include "mac2pc/ro.hpp"
#include "mac2pc/wire.hpp"

namespace mac2pc {

Block eq_commitment(const BitVec& x, const Block& r, unsigned kappa) {
  ByteWriter w;
  w.bits(x);
  w.block(r, kappa);
  return hash_block(Domain::EqCommit, w.data(), kappa);
}

bool eq_commit_side(Session& s, const BitVec& x) {
  const unsigned k = s.kappa();
  const Block r = s.rng.block(k);
  ByteWriter c;
  c.block(eq_commitment(x, r, k), k);
  s.ch.send(MsgType::EqCommit, c.take());

  const auto payload = s.ch.recv(MsgType::EqValue);
  ByteReader rd(payload, "eq");
  const BitVec y = rd.bits();
  rd.expect_end();

  ByteWriter open;
  open.bits(x);
  open.block(r, k);
  s.ch.send(MsgType::EqOpen, open.take());
  return x == y;
}

bool eq_respond_side(Session& s, const BitVec& y) {
  const unsigned k = s.kappa();
  const auto cp = s.ch.recv(MsgType::EqCommit);
  ByteReader cr(cp, "eq");
  const Block c = cr.block(k);
  cr.expect_end();

  ByteWriter v;
  v.bits(y);
  s.ch.send(MsgType::EqValue, v.take());

  const auto op = s.ch.recv(MsgType::EqOpen);
  ByteReader orr(op, "eq");
  const BitVec x = orr.bits();
  const Block r = orr.block(k);
  orr.expect_end();
  return eq_commitment(x, r, k) == c && x == y;
}

void eq_check(Session& s, bool committer, const BitVec& value, const char* phase) {
  const bool ok = committer ? eq_commit_side(s, value) : eq_respond_side(s, value);
  if (!ok) throw ProtocolAbort(phase, "equality check failed");
}

}  // namespace mac2pc
