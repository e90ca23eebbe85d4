#include "mac2pc/runtime.hpp"

#include <chrono>

#include "mac2pc/wire.hpp"

namespace mac2pc {

Evaluator::Evaluator(Session& s, MaterialStore& m, bool handshake) : s_(s), m_(m) {
  if (m.role != s.role) throw UsageError("material belongs to the other party");
  if (m.kappa != s.kappa()) throw UsageError("material kappa does not match the session");
  if (handshake) material_handshake(s, m);
  s_.delta = m.delta;
}

AuthShare Evaluator::constant(bool b) const {
  // Alice holds the bit with MAC 0, Bob holds key b*delta on it.
  const Role me = s_.role;
  return {const_abit(me == Role::Alice && b, true, s_.delta),
          const_abit(me == Role::Bob && b, false, s_.delta)};
}

std::vector<AuthShare> Evaluator::input(Role owner, const BitVec* bits, std::size_t n) {
  const bool mine = owner == s_.role;
  if (mine && (bits == nullptr || bits->size() != n)) throw UsageError("input bits missing or of wrong length");
  std::vector<ABit> masks(n);
  for (std::size_t i = 0; i < n; ++i) masks[i] = m_.take_abit(owner);

  // The owner announces x ^ x_owner as the other party's (constant) share.
  BitVec announced(n);
  if (mine) {
    for (std::size_t i = 0; i < n; ++i) announced.set(i, bits->get(i) != masks[i].bit);
    ByteWriter w;
    w.bits(announced);
    s_.ch.send(MsgType::RtAnnounceBatch, w.take());
    stats_.announced_bits += n;
  } else {
    const auto payload = s_.ch.recv(MsgType::RtAnnounceBatch);
    ByteReader r(payload, "input");
    announced = r.bits();
    r.expect_end();
    if (announced.size() != n) throw ProtocolAbort("input", "unexpected number of announced bits");
  }

  std::vector<AuthShare> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const ABit other = const_abit(announced.get(i), !mine, s_.delta);
    out[i] = mine ? AuthShare{masks[i], other} : AuthShare{other, masks[i]};
  }
  return out;
}

AuthShare Evaluator::rand() {
  const ABit a = m_.take_abit(Role::Alice);
  const ABit b = m_.take_abit(Role::Bob);
  return s_.role == Role::Alice ? AuthShare{a, b} : AuthShare{b, a};
}

std::pair<BitVec, BitVec> Evaluator::exchange(const std::vector<ABit>& alice_halves,
                                              const std::vector<ABit>& bob_halves) {
  const bool alice = s_.role == Role::Alice;
  const auto& mine = alice ? alice_halves : bob_halves;
  const auto& theirs = alice ? bob_halves : alice_halves;
  s_.mac.send_reveals(s_.ch, MsgType::RtRevealBatch, mine);
  stats_.revealed_bits += mine.size();
  ++stats_.reveal_rounds;
  BitVec my_bits(mine.size());
  for (std::size_t i = 0; i < mine.size(); ++i) my_bits.set(i, mine[i].bit);
  BitVec peer_bits = s_.mac.recv_reveals(s_.ch, MsgType::RtRevealBatch, theirs, s_.delta);
  return alice ? std::pair{std::move(my_bits), std::move(peer_bits)} : std::pair{std::move(peer_bits), std::move(my_bits)};
}

std::vector<AuthShare> Evaluator::and_gates(std::span<const AuthShare> x, std::span<const AuthShare> y) {
  if (x.size() != y.size()) throw UsageError("and_gates: operand count mismatch");
  const std::size_t n = x.size();
  if (n == 0) return {};
  constexpr Role kParties[2] = {Role::Alice, Role::Bob};
  auto idx = [](Role r) { return r == Role::Alice ? 0 : 1; };

  // Material, in the same order on both sides. aot[P] has P as sender.
  std::vector<Aand> aand[2];
  std::vector<Aot> aot[2];
  std::vector<ABit> r[2];
  for (Role p : kParties) {
    aand[idx(p)].reserve(n);
    for (std::size_t i = 0; i < n; ++i) aand[idx(p)].push_back(m_.take_aand(p));
  }
  for (Role p : kParties) {
    aot[idx(p)].reserve(n);
    for (std::size_t i = 0; i < n; ++i) aot[idx(p)].push_back(m_.take_aot(p));
  }
  for (Role p : kParties) {
    r[idx(p)].reserve(n);
    for (std::size_t i = 0; i < n; ++i) r[idx(p)].push_back(m_.take_abit(p));
  }

  // Round 1: each party P reveals f = u ^ x_P and g = v ^ y_P for its local
  // product, and d = c ^ y_P as receiver of the peer's aOT.
  std::vector<ABit> round1[2];
  for (Role p : kParties) {
    const int o = idx(p), q = 1 - o;
    auto& v = round1[o];
    v.resize(3 * n);
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = aand[o][i].x ^ half(x[i], p);
      v[n + i] = aand[o][i].y ^ half(y[i], p);
      v[2 * n + i] = aot[q][i].c ^ half(y[i], p);
    }
  }
  const auto pub1 = exchange(round1[0], round1[1]);
  const BitVec* revealed1[2] = {&pub1.first, &pub1.second};

  // Round 2: as sender of its aOT, P reveals f = u0 ^ u1 ^ x_P and
  // g = r_P ^ u0 ^ d*x_P, where d came from the peer.
  std::vector<ABit> round2[2];
  for (Role p : kParties) {
    const int o = idx(p), q = 1 - o;
    auto& v = round2[o];
    v.resize(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
      const ABit xp = half(x[i], p);
      const bool d = revealed1[q]->get(2 * n + i);
      v[i] = aot[o][i].x0 ^ aot[o][i].x1 ^ xp;
      v[n + i] = r[o][i] ^ aot[o][i].x0 ^ scale(xp, d);
    }
  }
  const auto pub2 = exchange(round2[0], round2[1]);
  const BitVec* revealed2[2] = {&pub2.first, &pub2.second};

  std::vector<AuthShare> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    ABit z[2];
    for (Role p : kParties) {
      const int o = idx(p), q = 1 - o;
      // [x_P y_P] = f[y_P] ^ g[x_P] ^ [w] ^ fg
      const bool f = revealed1[o]->get(i), g = revealed1[o]->get(n + i);
      ABit local = scale(half(y[i], p), f) ^ scale(half(x[i], p), g) ^ aand[o][i].z;
      local = constant_half(local, f && g, p);
      // [s_P] = [w] ^ f[c] ^ g from the aOT the peer sent, = r_Q ^ x_Q y_P.
      const bool fq = revealed2[q]->get(i), gq = revealed2[q]->get(n + i);
      ABit cross = aot[q][i].z ^ scale(aot[q][i].c, fq);
      cross = constant_half(cross, gq, p);
      z[o] = r[o][i] ^ cross ^ local;
    }
    const int me = idx(s_.role);
    out[i] = AuthShare{z[me], z[1 - me]};
  }
  stats_.and_gates += n;
  return out;
}

AuthShare Evaluator::and_gate(const AuthShare& x, const AuthShare& y) {
  return and_gates(std::span(&x, 1), std::span(&y, 1)).front();
}

void Evaluator::open_to(std::span<const AuthShare> shares, Role learner, std::optional<BitVec>& out) {
  std::vector<ABit> halves(shares.size());
  if (learner == s_.role) {
    for (std::size_t i = 0; i < shares.size(); ++i) halves[i] = shares[i].peer;
    const BitVec peer_bits = s_.mac.recv_opened(s_.ch, MsgType::RtOutput, halves, s_.delta, "output");
    BitVec value(shares.size());
    for (std::size_t i = 0; i < shares.size(); ++i) value.set(i, shares[i].mine.bit != peer_bits.get(i));
    out = std::move(value);
  } else {
    for (std::size_t i = 0; i < shares.size(); ++i) halves[i] = shares[i].mine;
    s_.mac.send_opened(s_.ch, MsgType::RtOutput, halves);
    stats_.opened_bits += shares.size();
  }
}

std::optional<BitVec> Evaluator::output(std::span<const AuthShare> shares, OutputTo to) {
  s_.mac.flush(s_.ch, MsgType::RtAccFlush, "output");
  ++stats_.flushes;
  std::optional<BitVec> out;
  if (to != OutputTo::Alice) open_to(shares, Role::Bob, out);
  if (to != OutputTo::Bob) open_to(shares, Role::Alice, out);
  return out;
}

// ---------------------------------------------------------------------------

EvalResult evaluate(Session& s, const Circuit& c, const BitVec& my_inputs, MaterialStore& m, const EvalOptions& opts) {
  const auto& h = c.header();
  if (my_inputs.size() != h.inputs_of(s.role)) throw UsageError("input length does not match the circuit");
  Evaluator ev(s, m, opts.handshake);
  const auto start = std::chrono::steady_clock::now();

  std::vector<AuthShare> w(h.n_wires);
  for (Role owner : {Role::Alice, Role::Bob}) {
    const auto wires = c.input_wires(owner);
    const auto shares = ev.input(owner, owner == s.role ? &my_inputs : nullptr, wires.size());
    for (std::size_t i = 0; i < wires.size(); ++i) w[wires[i]] = shares[i];
  }

  const auto& gates = c.gates();
  std::vector<std::uint32_t> level(h.n_wires, 0);
  std::vector<std::uint32_t> stamp(h.n_wires, 0);
  std::uint32_t chunk_id = 0;
  std::size_t free_gates = 0;
  for (const Chunk& ch : chunks(c, opts.chunk_size)) {
    ++chunk_id;
    // AND depth inside the chunk; wires from earlier chunks count as level 0.
    auto lv = [&](std::uint32_t wire) { return stamp[wire] == chunk_id ? level[wire] : 0u; };
    std::vector<std::vector<std::size_t>> ands, frees;
    for (std::size_t g = ch.begin; g < ch.end; ++g) {
      const Gate& gt = gates[g];
      const bool unary = gt.kind == GateKind::Inv || gt.kind == GateKind::Eqw;
      std::uint32_t l = unary ? lv(gt.in0) : std::max(lv(gt.in0), lv(gt.in1));
      if (gt.kind == GateKind::And) ++l;
      level[gt.out] = l;
      stamp[gt.out] = chunk_id;
      auto& bucket = gt.kind == GateKind::And ? ands : frees;
      if (bucket.size() <= l) bucket.resize(l + 1);
      bucket[l].push_back(g);
    }
    const std::size_t levels = std::max(ands.size(), frees.size());
    std::vector<AuthShare> xs, ys;
    for (std::size_t l = 0; l < levels; ++l) {
      if (l < ands.size() && !ands[l].empty()) {
        xs.clear();
        ys.clear();
        for (std::size_t g : ands[l]) {
          xs.push_back(w[gates[g].in0]);
          ys.push_back(w[gates[g].in1]);
        }
        const auto zs = ev.and_gates(xs, ys);
        for (std::size_t k = 0; k < zs.size(); ++k) w[gates[ands[l][k]].out] = zs[k];
      }
      if (l < frees.size()) {
        for (std::size_t g : frees[l]) {
          const Gate& gt = gates[g];
          switch (gt.kind) {
            case GateKind::Xor: w[gt.out] = Evaluator::xor_gate(w[gt.in0], w[gt.in1]); break;
            case GateKind::Inv: w[gt.out] = ev.not_gate(w[gt.in0]); break;
            case GateKind::Eqw: w[gt.out] = w[gt.in0]; break;
            case GateKind::And: break;
          }
        }
        free_gates += frees[l].size();
      }
    }
  }

  const std::size_t first = h.first_output_wire();
  EvalResult res;
  res.outputs = ev.output(std::span(w).subspan(first, h.total_outputs()), opts.output_to);
  res.stats = ev.stats();
  res.stats.free_gates = free_gates;
  res.online_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

}  // namespace mac2pc
