#include "mac2pc/base_ot.hpp"

#include <cstring>

#include "mac2pc/ro.hpp"
#include "mac2pc/wire.hpp"

namespace mac2pc {

Rng DealerSeedOt::call_rng() {
  std::uint8_t buf[24];
  std::memcpy(buf, shared_.data(), 16);
  std::memcpy(buf + 16, &calls_, 8);
  ++calls_;
  const Digest d = hash(Domain::SeedOt, buf);
  Rng::Seed seed;
  std::memcpy(seed.data(), d.data(), seed.size());
  return Rng(seed);
}

void DealerSeedOt::send(Session& s, std::span<const BitVec> m0, std::span<const BitVec> m1) {
  if (m0.size() != m1.size()) throw UsageError("seed OT: message count mismatch");
  const std::size_t n = m0.size();
  const std::size_t len = n == 0 ? 0 : m0[0].size();
  Rng rng = call_rng();
  const auto payload = s.ch.recv(MsgType::DotChoice);
  ByteReader r(payload, "seed-ot");
  const BitVec e = r.bits();
  r.expect_end();
  if (e.size() != n) throw ProtocolAbort("seed-ot", "choice vector has wrong length");
  ByteWriter w;
  for (std::size_t i = 0; i < n; ++i) {
    if (m0[i].size() != len || m1[i].size() != len) throw UsageError("seed OT: messages differ in length");
    BitVec r0 = rng.bits(len);
    BitVec r1 = rng.bits(len);
    rng.next_bit();
    const bool ei = e.get(i);
    w.bits(m0[i] ^ (ei ? r1 : r0));
    w.bits(m1[i] ^ (ei ? r0 : r1));
  }
  s.ch.send(MsgType::DotMsg, w.take());
  used_ += n;
}

std::vector<BitVec> DealerSeedOt::receive(Session& s, const BitVec& choices, std::size_t len) {
  const std::size_t n = choices.size();
  Rng rng = call_rng();
  BitVec e(n);
  std::vector<BitVec> pad(n);
  for (std::size_t i = 0; i < n; ++i) {
    BitVec r0 = rng.bits(len);
    BitVec r1 = rng.bits(len);
    const bool b = rng.next_bit();
    pad[i] = b ? std::move(r1) : std::move(r0);
    e.set(i, choices.get(i) != b);
  }
  ByteWriter w;
  w.bits(e);
  s.ch.send(MsgType::DotChoice, w.take());
  const auto payload = s.ch.recv(MsgType::DotMsg);
  ByteReader r(payload, "seed-ot");
  std::vector<BitVec> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    BitVec y0 = r.bits();
    BitVec y1 = r.bits();
    if (y0.size() != len || y1.size() != len) throw ProtocolAbort("seed-ot", "message has wrong length");
    out[i] = (choices.get(i) ? y1 : y0) ^ pad[i];
  }
  r.expect_end();
  used_ += n;
  return out;
}

void seed_ot_send(Session& s, SeedOtBackend& ot, std::span<const BitVec> m0, std::span<const BitVec> m1) {
  ot.send(s, m0, m1);
}

std::vector<BitVec> seed_ot_receive(Session& s, SeedOtBackend& ot, const BitVec& choices, std::size_t len) {
  return ot.receive(s, choices, len);
}

namespace {

void send_matrix(Channel& ch, MsgType t, const BitMatrix& m) {
  ByteWriter w;
  w.u64(m.rows());
  w.u64(m.cols());
  const auto d = m.data();
  w.bytes({reinterpret_cast<const std::uint8_t*>(d.data()), d.size() * 8});
  ch.send(t, w.take());
}

BitMatrix recv_matrix(Channel& ch, MsgType t, std::size_t rows, std::size_t cols, const char* phase) {
  const auto payload = ch.recv(t);
  ByteReader r(payload, phase);
  if (r.u64() != rows || r.u64() != cols) throw ProtocolAbort(phase, "matrix has wrong shape");
  BitMatrix m(rows, cols);
  auto d = m.data();
  const auto bytes = r.bytes(d.size() * 8);
  std::memcpy(d.data(), bytes.data(), bytes.size());
  r.expect_end();
  if (cols % 64 != 0) {
    const std::uint64_t pad = ~0ULL >> (64 - cols % 64);
    for (std::size_t i = 0; i < rows; ++i) m.row_words(i).back() &= pad;
  }
  return m;
}

void xor_expand_into_row(BitMatrix& m, std::size_t row, const BitVec& seed) {
  const auto seed_bytes = seed.to_bytes();
  const BitVec pad = expand(seed_bytes, m.cols());
  m.xor_row(row, pad.words());
}

}  // namespace

void extend_ot_send(Session& s, SeedOtBackend& ot, const BitMatrix& m0, const BitMatrix& m1) {
  if (m0.rows() != m1.rows() || m0.cols() != m1.cols()) throw UsageError("extend_ot_send: shape mismatch");
  const std::size_t n = m0.rows();
  std::vector<BitVec> s0(n), s1(n);
  for (std::size_t i = 0; i < n; ++i) {
    s0[i] = s.rng.bits(s.kappa());
    s1[i] = s.rng.bits(s.kappa());
  }
  ot.send(s, s0, s1);
  BitMatrix y0 = m0;
  BitMatrix y1 = m1;
  for (std::size_t i = 0; i < n; ++i) {
    xor_expand_into_row(y0, i, s0[i]);
    xor_expand_into_row(y1, i, s1[i]);
  }
  send_matrix(s.ch, MsgType::OtMasked0, y0);
  send_matrix(s.ch, MsgType::OtMasked1, y1);
}

BitMatrix extend_ot_receive(Session& s, SeedOtBackend& ot, const BitVec& choices, std::size_t len) {
  const std::size_t n = choices.size();
  const auto seeds = ot.receive(s, choices, s.kappa());
  BitMatrix y0 = recv_matrix(s.ch, MsgType::OtMasked0, n, len, "ot-extend");
  BitMatrix y1 = recv_matrix(s.ch, MsgType::OtMasked1, n, len, "ot-extend");
  BitMatrix out(n, len);
  for (std::size_t i = 0; i < n; ++i) {
    const BitMatrix& y = choices.get(i) ? y1 : y0;
    auto dst = out.row_words(i);
    auto src = y.row_words(i);
    std::copy(src.begin(), src.end(), dst.begin());
    xor_expand_into_row(out, i, seeds[i]);
  }
  return out;
}

}  // namespace mac2pc
