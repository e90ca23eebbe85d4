#include "mac2pc/abit.hpp"

#include <optional>

#include "mac2pc/eq.hpp"
#include "mac2pc/wire.hpp"

namespace mac2pc {

namespace {

constexpr const char* kPhase = "labit";

/// Row-major words of m as one bit string; rows keep their zero padding so
/// both parties lay out the same value identically.
BitVec matrix_bits(const BitMatrix& m) {
  BitVec v(m.data().size() * 64);
  std::copy(m.data().begin(), m.data().end(), v.words().begin());
  return v;
}

void copy_row(BitMatrix& dst, std::size_t dr, const BitMatrix& src, std::size_t sr) {
  auto s = src.row_words(sr);
  std::copy(s.begin(), s.end(), dst.row_words(dr).begin());
}

}  // namespace

std::size_t labit_tau(unsigned key_bits) { return (22 * static_cast<std::size_t>(key_bits) + 2) / 3; }

std::size_t seed_ots_for(unsigned key_bits) { return 2 * labit_tau(key_bits); }

LabitSenderOut labit_send(Session& s, SeedOtBackend& ot, std::size_t tau, std::size_t ell,
                          const LabitHooks* hooks) {
  if (tau == 0) throw UsageError("labit: tau must be positive");
  const std::size_t t = 2 * tau;
  LabitSenderOut out;
  out.gamma = s.rng.bits(ell);
  const BitMatrix l = BitMatrix::random(t, ell, s.rng);
  BitMatrix l1 = l;
  const bool cheating = hooks != nullptr && static_cast<bool>(hooks->ot_gamma);
  std::vector<BitVec> offered;
  if (cheating) offered.reserve(t);
  for (std::size_t i = 0; i < t; ++i) {
    if (cheating) {
      offered.push_back(hooks->ot_gamma(i, out.gamma));
      l1.xor_row(i, offered.back().words());
    } else {
      l1.xor_row(i, out.gamma.words());
    }
  }
  extend_ot_send(s, ot, l, l1);

  const auto pp = s.ch.recv(MsgType::LabitPairing);
  ByteReader pr(pp, kPhase);
  std::vector<std::uint32_t> partners(t);
  for (auto& p : partners) p = pr.u32();
  pr.expect_end();
  std::optional<Pairing> pairing;
  try {
    pairing.emplace(partners);
  } catch (const UsageError&) {
    throw ProtocolAbort(kPhase, "peer sent an invalid pairing");
  }
  const auto leaders = pairing->leaders();
  if (hooks != nullptr && hooks->saw_pairing) hooks->saw_pairing(partners);

  const auto dp = s.ch.recv(MsgType::LabitD);
  ByteReader dr(dp, kPhase);
  const BitVec d = dr.bits();
  dr.expect_end();
  if (d.size() != tau) throw ProtocolAbort(kPhase, "wrong number of announced differences");

  BitMatrix z(tau, ell);
  out.strings = BitMatrix(tau, ell);
  for (std::size_t k = 0; k < tau; ++k) {
    const std::size_t i = leaders[k];
    const std::size_t j = (*pairing)(i);
    copy_row(z, k, l, i);
    z.xor_row(k, l.row_words(j));
    if (cheating) {
      // Without knowing y_i the sender has to guess it when the two offers differ.
      const bool g = offered[i] == offered[j] ? false : s.rng.next_bit();
      if (g) z.xor_row(k, offered[i].words());
      if (g != d.get(k)) z.xor_row(k, offered[j].words());
    } else if (d.get(k)) {
      z.xor_row(k, out.gamma.words());
    }
    copy_row(out.strings, k, l, i);
  }
  eq_check(s, true, matrix_bits(z), kPhase);
  out.selected = leaders;
  out.partners = std::move(partners);
  return out;
}

LabitReceiverOut labit_receive(Session& s, SeedOtBackend& ot, std::size_t tau, std::size_t ell,
                               const LabitHooks* hooks) {
  if (tau == 0) throw UsageError("labit: tau must be positive");
  const std::size_t t = 2 * tau;
  const BitVec y = s.rng.bits(t);
  const BitMatrix n = extend_ot_receive(s, ot, y, ell);

  const Pairing pairing = random_pairing(t, s.rng);
  ByteWriter pw;
  for (auto p : pairing.partners()) pw.u32(p);
  s.ch.send(MsgType::LabitPairing, pw.take());

  const auto leaders = pairing.leaders();
  BitVec d(tau);
  for (std::size_t k = 0; k < tau; ++k) {
    bool v = y.get(leaders[k]) != y.get(pairing(leaders[k]));
    if (hooks != nullptr && hooks->flip_d && hooks->flip_d(k)) v = !v;
    d.set(k, v);
  }
  ByteWriter dw;
  dw.bits(d);
  s.ch.send(MsgType::LabitD, dw.take());

  LabitReceiverOut out;
  out.y = BitVec(tau);
  out.strings = BitMatrix(tau, ell);
  BitMatrix w(tau, ell);
  for (std::size_t k = 0; k < tau; ++k) {
    const std::size_t i = leaders[k];
    copy_row(w, k, n, i);
    w.xor_row(k, n.row_words(pairing(i)));
    copy_row(out.strings, k, n, i);
    out.y.set(k, y.get(i));
  }
  eq_check(s, false, matrix_bits(w), kPhase);
  out.selected = leaders;
  out.partners = pairing.partners();
  return out;
}

WabitOwner labit_to_wabit(const LabitSenderOut& out) {
  return WabitOwner{out.gamma, out.strings.transpose()};
}

WabitKeyHolder labit_to_wabit(const LabitReceiverOut& out) {
  return WabitKeyHolder{out.y, out.strings.transpose()};
}

std::vector<ABit> wabit_amplify_owner(Session& s, const WabitOwner& w, unsigned key_bits) {
  const std::size_t tau = w.macs.cols();
  const auto payload = s.ch.recv(MsgType::AmplifyMatrix);
  ByteReader r(payload, "amplify");
  if (r.u32() != key_bits || r.u64() != tau) throw ProtocolAbort("amplify", "matrix has wrong shape");
  BitMatrix a(key_bits, tau);
  for (std::size_t row = 0; row < key_bits; ++row) {
    for (auto& word : a.row_words(row)) word = r.u64();
  }
  r.expect_end();
  if (tau % 64 != 0) {
    for (std::size_t row = 0; row < key_bits; ++row) a.row_words(row).back() &= ~0ULL >> (64 - tau % 64);
  }
  const MatVecTable table(a);
  std::vector<ABit> out(w.bits.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = ABit{w.bits.get(i), table.apply(w.macs.row_words(i))};
  return out;
}

std::vector<ABit> wabit_amplify_key_holder(Session& s, const WabitKeyHolder& w, unsigned key_bits,
                                           Block& delta_out, const BitMatrix* fixed_matrix) {
  if (key_bits == 0 || key_bits > kMaxKappa) throw UsageError("amplify: key length must be in [1, 128]");
  const std::size_t tau = w.gamma.size();
  const BitMatrix a = fixed_matrix != nullptr ? *fixed_matrix : BitMatrix::random(key_bits, tau, s.rng);
  if (a.rows() != key_bits || a.cols() != tau) throw UsageError("amplify: matrix has wrong shape");
  ByteWriter wr;
  wr.u32(key_bits);
  wr.u64(tau);
  for (auto word : a.data()) wr.u64(word);
  s.ch.send(MsgType::AmplifyMatrix, wr.take());
  const MatVecTable table(a);
  delta_out = table.apply(w.gamma);
  std::vector<ABit> out(w.keys.rows());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = ABit{false, table.apply(w.keys.row_words(i))};
  return out;
}

AbitBatch produce_abits(Session& s, SeedOtBackend& ot, Role owner, std::size_t count, unsigned key_bits) {
  const std::size_t tau = labit_tau(key_bits);
  AbitBatch batch;
  if (s.is(owner)) {
    const auto la = labit_send(s, ot, tau, count);
    batch.halves = wabit_amplify_owner(s, labit_to_wabit(la), key_bits);
  } else {
    const auto la = labit_receive(s, ot, tau, count);
    batch.halves = wabit_amplify_key_holder(s, labit_to_wabit(la), key_bits, batch.delta);
  }
  return batch;
}

}  // namespace mac2pc
