#include "mac2pc/aand.hpp"

#include "mac2pc/bucket.hpp"
#include "mac2pc/eq.hpp"
#include "mac2pc/ro.hpp"
#include "mac2pc/wire.hpp"

namespace mac2pc {

namespace {

constexpr const char* kPhase = "laand";

Block h2(const Block& a, const Block& b, unsigned kappa) { return hash_blocks(Domain::LaandU, {a, b}, kappa); }

void put_block(BitVec& v, std::size_t offset, const Block& b, unsigned kappa) {
  for (unsigned j = 0; j < kappa; ++j) v.set(offset + j, b.get(j));
}

}  // namespace

std::vector<Aand> laand_batch(Session& s, Role owner, std::size_t count, AbitSource& src, const LaandHooks* hooks) {
  const unsigned k = s.kappa();
  const auto bits = src.take(owner, s.role, 3 * count);
  std::vector<Aand> out(count);
  BitVec eq_value(k * count);

  if (s.is(owner)) {
    BitVec d(count);
    for (std::size_t i = 0; i < count; ++i) {
      const bool z = bits[3 * i].bit && bits[3 * i + 1].bit;
      bool di = z != bits[3 * i + 2].bit;
      if (hooks != nullptr && hooks->flip_d && hooks->flip_d(i)) di = !di;
      d.set(i, di);
    }
    ByteWriter dw;
    dw.bits(d);
    s.ch.send(MsgType::LaandD, dw.take());

    const auto up = s.ch.recv(MsgType::LaandU);
    ByteReader ur(up, kPhase);
    for (std::size_t i = 0; i < count; ++i) {
      const ABit& x = bits[3 * i];
      const ABit& y = bits[3 * i + 1];
      const ABit z = add_const(bits[3 * i + 2], d.get(i), true, s.delta);
      const Block u = ur.block(k);
      const Block v = x.bit ? u ^ h2(x.tag, y.tag ^ z.tag, k) : h2(x.tag, z.tag, k);
      put_block(eq_value, k * i, v, k);
      out[i] = Aand{x, y, z};
    }
    ur.expect_end();
    eq_check(s, true, eq_value, kPhase);
    return out;
  }

  const auto dp = s.ch.recv(MsgType::LaandD);
  ByteReader dr(dp, kPhase);
  const BitVec d = dr.bits();
  dr.expect_end();
  if (d.size() != count) throw ProtocolAbort(kPhase, "wrong number of announced differences");
  ByteWriter uw;
  for (std::size_t i = 0; i < count; ++i) {
    const ABit& kx = bits[3 * i];
    const ABit& ky = bits[3 * i + 1];
    const ABit kz = add_const(bits[3 * i + 2], d.get(i), false, s.delta);
    const Block expected = h2(kx.tag, kz.tag, k);
    Block u = expected ^ h2(kx.tag ^ s.delta, ky.tag ^ kz.tag, k);
    if (hooks != nullptr && hooks->tamper_u) u ^= hooks->tamper_u(i).masked(k);
    uw.block(u, k);
    put_block(eq_value, k * i, expected, k);
    out[i] = Aand{kx, ky, kz};
  }
  s.ch.send(MsgType::LaandU, uw.take());
  eq_check(s, false, eq_value, kPhase);
  return out;
}

void combine_aands(Session& s, Role owner, std::span<Aand> acc, std::span<const Aand> add) {
  if (acc.size() != add.size()) throw UsageError("combine_aands: size mismatch");
  std::vector<ABit> dv(acc.size());
  for (std::size_t i = 0; i < acc.size(); ++i) dv[i] = acc[i].y ^ add[i].y;
  BitVec d(acc.size());
  if (s.is(owner)) {
    s.mac.send_reveals(s.ch, MsgType::CombD, dv);
    for (std::size_t i = 0; i < dv.size(); ++i) d.set(i, dv[i].bit);
  } else {
    d = s.mac.recv_reveals(s.ch, MsgType::CombD, dv, s.delta);
  }
  for (std::size_t i = 0; i < acc.size(); ++i) {
    Aand& a = acc[i];
    const Aand& b = add[i];
    a.z = a.z ^ b.z ^ scale(b.x, d.get(i));
    a.x = a.x ^ b.x;
  }
}

std::vector<Aand> aand_produce(Session& s, Role owner, std::size_t count, std::size_t bucket, AbitSource& src) {
  if (bucket == 0) throw UsageError("aand_produce: bucket size must be positive");
  const std::size_t total = bucket * count;
  const std::vector<Aand> leaky = laand_batch(s, owner, total, src);
  const auto perm = s.is(owner) ? send_permutation(s, total) : recv_permutation(s, total, "aand-combine");
  std::vector<Aand> acc(count);
  for (std::size_t b = 0; b < count; ++b) acc[b] = leaky[perm[b * bucket]];
  std::vector<Aand> next(count);
  for (std::size_t j = 1; j < bucket; ++j) {
    for (std::size_t b = 0; b < count; ++b) next[b] = leaky[perm[b * bucket + j]];
    combine_aands(s, owner, acc, next);
  }
  return acc;
}

}  // namespace mac2pc
