#include "mac2pc/aot.hpp"

#include "mac2pc/bucket.hpp"
#include "mac2pc/eq.hpp"
#include "mac2pc/ro.hpp"
#include "mac2pc/wire.hpp"

namespace mac2pc {

namespace {

constexpr const char* kPhase = "laot";

std::size_t payload_bits(unsigned kappa) { return 1 + 2 * static_cast<std::size_t>(kappa); }

BitVec pack(bool bit, const Block& mac, const Block& pad, unsigned kappa) {
  BitVec v(payload_bits(kappa));
  v.set(0, bit);
  for (unsigned j = 0; j < kappa; ++j) {
    v.set(1 + j, mac.get(j));
    v.set(1 + kappa + j, pad.get(j));
  }
  return v;
}

void unpack(const BitVec& v, unsigned kappa, bool& bit, Block& mac, Block& pad) {
  bit = v.get(0);
  mac = Block{};
  pad = Block{};
  for (unsigned j = 0; j < kappa; ++j) {
    mac.set(j, v.get(1 + j));
    pad.set(j, v.get(1 + kappa + j));
  }
}

BitVec transfer_mask(const Block& key, unsigned kappa) {
  std::uint8_t buf[16];
  key.to_bytes({buf, bytes_for_bits(kappa)});
  const Digest seed = hash(Domain::LaotTransfer, {buf, bytes_for_bits(kappa)});
  return expand(seed, payload_bits(kappa));
}

Block recommit_pad(const Block& key, unsigned kappa) { return hash_blocks(Domain::LaotRecommit, {key}, kappa); }

}  // namespace

std::vector<Aot> laot_batch(Session& s, Role sender, std::size_t count, AbitSource& src, const LaotHooks* hooks) {
  const unsigned k = s.kappa();
  const Role receiver = peer_of(sender);
  const auto xs = src.take(sender, s.role, 2 * count);
  const auto cs = src.take(receiver, s.role, 2 * count);
  std::vector<Aot> out(count);
  const std::size_t nb = bytes_for_bits(payload_bits(k));

  if (s.is(sender)) {
    std::vector<Block> t0(count), t1(count);
    ByteWriter w0, w1;
    for (std::size_t i = 0; i < count; ++i) {
      const ABit& x0 = xs[2 * i];
      const ABit& x1 = xs[2 * i + 1];
      const ABit& c = cs[2 * i];
      t0[i] = s.rng.block(k);
      t1[i] = s.rng.block(k);
      BitVec p0 = pack(x0.bit, x0.tag, x0.bit ? t1[i] : t0[i], k);
      BitVec p1 = pack(x1.bit, x1.tag, x1.bit ? t1[i] : t0[i], k);
      if (hooks != nullptr && hooks->edit_x1) hooks->edit_x1(i, p1);
      w0.bytes((p0 ^ transfer_mask(c.tag, k)).to_bytes());
      w1.bytes((p1 ^ transfer_mask(c.tag ^ s.delta, k)).to_bytes());
    }
    s.ch.send(MsgType::LaotX0, w0.take());
    s.ch.send(MsgType::LaotX1, w1.take());

    const auto dp = s.ch.recv(MsgType::LaotD);
    ByteReader dr(dp, kPhase);
    const BitVec d = dr.bits();
    dr.expect_end();
    if (d.size() != count) throw ProtocolAbort(kPhase, "wrong number of announced differences");

    ByteWriter i0, i1;
    BitVec eq_value(2 * k * count);
    for (std::size_t i = 0; i < count; ++i) {
      const ABit kz = add_const(cs[2 * i + 1], d.get(i), false, s.delta);
      i0.block(recommit_pad(kz.tag, k) ^ t1[i], k);
      i1.block(recommit_pad(kz.tag ^ s.delta, k) ^ t0[i], k);
      for (unsigned j = 0; j < k; ++j) {
        eq_value.set(2 * k * i + j, t0[i].get(j));
        eq_value.set(2 * k * i + k + j, t1[i].get(j));
      }
      out[i] = Aot{xs[2 * i], xs[2 * i + 1], cs[2 * i], kz};
    }
    s.ch.send(MsgType::LaotI0, i0.take());
    s.ch.send(MsgType::LaotI1, i1.take());
    eq_check(s, true, eq_value, kPhase);
    return out;
  }

  const auto p0 = s.ch.recv(MsgType::LaotX0);
  const auto p1 = s.ch.recv(MsgType::LaotX1);
  if (p0.size() != count * nb || p1.size() != count * nb) throw ProtocolAbort(kPhase, "transfer has wrong size");
  std::vector<Block> tz(count);
  BitVec d(count);
  bool mac_ok = true;
  for (std::size_t i = 0; i < count; ++i) {
    const ABit& c = cs[2 * i];
    const auto& src_bytes = c.bit ? p1 : p0;
    const BitVec x = BitVec::from_bytes(std::span(src_bytes).subspan(i * nb, nb), payload_bits(k)) ^
                     transfer_mask(c.tag, k);
    bool bit;
    Block mac;
    unpack(x, k, bit, mac, tz[i]);
    const ABit& kx = c.bit ? xs[2 * i + 1] : xs[2 * i];
    mac_ok &= mac == (kx.tag ^ s.delta.select(bit));
    bool di = bit != cs[2 * i + 1].bit;
    if (hooks != nullptr && hooks->flip_d && hooks->flip_d(i)) di = !di;
    d.set(i, di);
  }
  if (!mac_ok) throw ProtocolAbort(kPhase, "MAC check failed on transferred bit");
  ByteWriter dw;
  dw.bits(d);
  s.ch.send(MsgType::LaotD, dw.take());

  const auto ip0 = s.ch.recv(MsgType::LaotI0);
  const auto ip1 = s.ch.recv(MsgType::LaotI1);
  ByteReader r0(ip0, kPhase), r1(ip1, kPhase);
  BitVec eq_value(2 * k * count);
  for (std::size_t i = 0; i < count; ++i) {
    const Block a = r0.block(k);
    const Block b = r1.block(k);
    const ABit z = add_const(cs[2 * i + 1], d.get(i), true, s.delta);
    const Block other = (z.bit ? b : a) ^ recommit_pad(z.tag, k);
    const Block t0 = z.bit ? other : tz[i];
    const Block t1 = z.bit ? tz[i] : other;
    for (unsigned j = 0; j < k; ++j) {
      eq_value.set(2 * k * i + j, t0.get(j));
      eq_value.set(2 * k * i + k + j, t1.get(j));
    }
    out[i] = Aot{xs[2 * i], xs[2 * i + 1], cs[2 * i], z};
  }
  r0.expect_end();
  r1.expect_end();
  eq_check(s, false, eq_value, kPhase);
  return out;
}

void combine_aots(Session& s, Role sender, std::span<Aot> acc, std::span<const Aot> add) {
  if (acc.size() != add.size()) throw UsageError("combine_aots: size mismatch");
  std::vector<ABit> dv(acc.size());
  for (std::size_t i = 0; i < acc.size(); ++i) dv[i] = acc[i].x0 ^ acc[i].x1 ^ add[i].x0 ^ add[i].x1;
  BitVec d(acc.size());
  if (s.is(sender)) {
    s.mac.send_reveals(s.ch, MsgType::CombD, dv);
    for (std::size_t i = 0; i < dv.size(); ++i) d.set(i, dv[i].bit);
  } else {
    d = s.mac.recv_reveals(s.ch, MsgType::CombD, dv, s.delta);
  }
  for (std::size_t i = 0; i < acc.size(); ++i) {
    Aot& a = acc[i];
    const Aot& b = add[i];
    const ABit c1 = a.c;
    const ABit x01 = a.x0;
    a.z = a.z ^ b.z ^ scale(c1, d.get(i));
    a.c = c1 ^ b.c;
    a.x0 = x01 ^ b.x0;
    a.x1 = x01 ^ b.x1;
  }
}

std::vector<Aot> aot_produce(Session& s, Role sender, std::size_t count, std::size_t bucket, AbitSource& src) {
  if (bucket == 0) throw UsageError("aot_produce: bucket size must be positive");
  const std::size_t total = bucket * count;
  const std::vector<Aot> leaky = laot_batch(s, sender, total, src);
  const auto perm = s.is(sender) ? recv_permutation(s, total, "aot-combine") : send_permutation(s, total);
  std::vector<Aot> acc(count);
  for (std::size_t b = 0; b < count; ++b) acc[b] = leaky[perm[b * bucket]];
  std::vector<Aot> next(count);
  for (std::size_t j = 1; j < bucket; ++j) {
    for (std::size_t b = 0; b < count; ++b) next[b] = leaky[perm[b * bucket + j]];
    combine_aots(s, sender, acc, next);
  }
  return acc;
}

}  // namespace mac2pc
