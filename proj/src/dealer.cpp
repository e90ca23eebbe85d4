#include "mac2pc/dealer.hpp"

#include <cstring>
#include <filesystem>
#include <fstream>

#include "mac2pc/abit.hpp"
#include "mac2pc/bucket.hpp"
#include "mac2pc/ro.hpp"
#include "mac2pc/wire.hpp"

namespace mac2pc {

DealerConfig DealerConfig::for_circuit(std::size_t and_gates, std::size_t inputs_A, std::size_t inputs_B,
                                       unsigned kappa, unsigned psi) {
  DealerConfig c;
  c.kappa = kappa;
  c.psi = psi;
  c.n_abits_A = and_gates + inputs_A;
  c.n_abits_B = and_gates + inputs_B;
  c.n_aands_A = c.n_aands_B = and_gates;
  c.n_aots_AB = c.n_aots_BA = and_gates;
  return c;
}

std::size_t DealerConfig::aot_bucket(std::size_t count) const {
  return bucket_aot ? *bucket_aot : bucket_size_for(count, psi);
}

std::size_t DealerConfig::aand_bucket(std::size_t count) const {
  return bucket_aand ? *bucket_aand : bucket_size_for(count, psi);
}

std::size_t DealerConfig::abits_owned_total(Role owner) const {
  const bool a = owner == Role::Alice;
  const std::size_t abits = a ? n_abits_A : n_abits_B;
  const std::size_t aands = a ? n_aands_A : n_aands_B;
  return abits + aot_abits_per_side(n_aots_AB, aot_bucket(n_aots_AB)) +
         aot_abits_per_side(n_aots_BA, aot_bucket(n_aots_BA)) + aand_abits(aands, aand_bucket(aands));
}

// ---------------------------------------------------------------------------

namespace {

template <class T>
T take_next(std::vector<T>& v, std::size_t& cursor, const char* what) {
  if (cursor >= v.size()) throw OutOfMaterial(std::string("out of ") + what);
  return v[cursor++];
}

}  // namespace

ABit MaterialStore::take_abit(Role owner) {
  return owner == role ? take_next(abit_own, cur_.abit_own, "aBits") : take_next(abit_key, cur_.abit_key, "aBits");
}

Aand MaterialStore::take_aand(Role owner) {
  return owner == role ? take_next(aand_own, cur_.aand_own, "aANDs") : take_next(aand_key, cur_.aand_key, "aANDs");
}

Aot MaterialStore::take_aot(Role sender) {
  return sender == role ? take_next(aot_send, cur_.aot_send, "aOTs") : take_next(aot_recv, cur_.aot_recv, "aOTs");
}

MaterialStore::Cursors MaterialStore::remaining() const {
  return Cursors{abit_own.size() - cur_.abit_own, abit_key.size() - cur_.abit_key,
                 aand_own.size() - cur_.aand_own, aand_key.size() - cur_.aand_key,
                 aot_send.size() - cur_.aot_send, aot_recv.size() - cur_.aot_recv};
}

// ---------------------------------------------------------------------------
// File format

namespace {

constexpr char kMagic[8] = {'M', 'A', 'C', '2', 'P', 'C', 'M', '\0'};

enum class Section : std::uint8_t { AbitOwn = 1, AbitKey, AandOwn, AandKey, AotSend, AotRecv };

void pack(BitPacker& p, const ABit& a, unsigned kappa) {
  p.bit(a.bit);
  p.block(a.tag, kappa);
}

ABit unpack(BitUnpacker& u, unsigned kappa) {
  ABit a;
  a.bit = u.bit();
  a.tag = u.block(kappa);
  return a;
}

template <class T, class F>
void write_section(ByteWriter& w, Section kind, const std::vector<T>& items, unsigned kappa, F each) {
  BitPacker p;
  for (const T& item : items) each(p, item, kappa);
  const auto bytes = p.bytes();
  w.u8(static_cast<std::uint8_t>(kind));
  w.u64(items.size());
  w.u64(bytes.size());
  w.bytes(bytes);
}

template <class T, class F>
std::vector<T> read_section(ByteReader& r, Section kind, unsigned kappa, std::size_t abits_per_record, F each) {
  if (r.u8() != static_cast<std::uint8_t>(kind)) throw ParseError(0, "material: unexpected section");
  const std::uint64_t count = r.u64();
  const std::uint64_t nbytes = r.u64();
  const std::uint64_t nbits = count * abits_per_record * (1 + kappa);
  if (nbytes != bytes_for_bits(nbits) || nbytes > r.remaining()) throw ParseError(0, "material: bad section size");
  BitUnpacker u(r.bytes(nbytes), nbits);
  std::vector<T> out(count);
  for (auto& item : out) item = each(u, kappa);
  return out;
}

void pack_aand(BitPacker& p, const Aand& t, unsigned k) {
  pack(p, t.x, k);
  pack(p, t.y, k);
  pack(p, t.z, k);
}

Aand unpack_aand(BitUnpacker& u, unsigned k) {
  Aand t;
  t.x = unpack(u, k);
  t.y = unpack(u, k);
  t.z = unpack(u, k);
  return t;
}

void pack_aot(BitPacker& p, const Aot& t, unsigned k) {
  pack(p, t.x0, k);
  pack(p, t.x1, k);
  pack(p, t.c, k);
  pack(p, t.z, k);
}

Aot unpack_aot(BitUnpacker& u, unsigned k) {
  Aot t;
  t.x0 = unpack(u, k);
  t.x1 = unpack(u, k);
  t.c = unpack(u, k);
  t.z = unpack(u, k);
  return t;
}

}  // namespace

std::vector<std::uint8_t> MaterialStore::serialize() const {
  ByteWriter w;
  w.bytes({reinterpret_cast<const std::uint8_t*>(kMagic), 8});
  w.u16(kVersion);
  w.u8(static_cast<std::uint8_t>(role));
  w.u8(0);
  w.u16(static_cast<std::uint16_t>(kappa));
  w.u16(static_cast<std::uint16_t>(psi));
  w.bytes(session_id);
  w.bytes(own_commit);
  w.bytes(peer_commit);
  w.block(delta, 128);
  auto pack_abit = [](BitPacker& p, const ABit& a, unsigned k) { pack(p, a, k); };
  write_section(w, Section::AbitOwn, abit_own, kappa, pack_abit);
  write_section(w, Section::AbitKey, abit_key, kappa, pack_abit);
  write_section(w, Section::AandOwn, aand_own, kappa, pack_aand);
  write_section(w, Section::AandKey, aand_key, kappa, pack_aand);
  write_section(w, Section::AotSend, aot_send, kappa, pack_aot);
  write_section(w, Section::AotRecv, aot_recv, kappa, pack_aot);
  const Digest trailer = hash("MATERIAL", w.data());
  w.bytes(trailer);
  return w.take();
}

MaterialStore MaterialStore::deserialize(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeaderSize + 16 + 32) throw ParseError(0, "material: file too short");
  const auto body = bytes.first(bytes.size() - 32);
  const Digest expect = hash("MATERIAL", body);
  if (!std::equal(expect.begin(), expect.end(), bytes.end() - 32)) {
    throw ProtocolAbort("material", "integrity check failed (file modified or truncated)");
  }
  ByteReader r(body, "material");
  if (std::memcmp(r.bytes(8).data(), kMagic, 8) != 0) throw ParseError(0, "material: bad magic");
  if (r.u16() != kVersion) throw ParseError(0, "material: unsupported version");
  MaterialStore m;
  const std::uint8_t role = r.u8();
  if (role > 1) throw ParseError(0, "material: bad role");
  m.role = static_cast<Role>(role);
  r.u8();
  m.kappa = r.u16();
  m.psi = r.u16();
  if (m.kappa < 1 || m.kappa > kMaxKappa) throw ParseError(0, "material: bad kappa");
  auto copy16 = [&](std::array<std::uint8_t, 16>& dst) {
    const auto b = r.bytes(16);
    std::copy(b.begin(), b.end(), dst.begin());
  };
  copy16(m.session_id);
  copy16(m.own_commit);
  copy16(m.peer_commit);
  m.delta = r.block(128);
  auto unpack_abit = [](BitUnpacker& u, unsigned k) { return unpack(u, k); };
  m.abit_own = read_section<ABit>(r, Section::AbitOwn, m.kappa, 1, unpack_abit);
  m.abit_key = read_section<ABit>(r, Section::AbitKey, m.kappa, 1, unpack_abit);
  m.aand_own = read_section<Aand>(r, Section::AandOwn, m.kappa, 3, unpack_aand);
  m.aand_key = read_section<Aand>(r, Section::AandKey, m.kappa, 3, unpack_aand);
  m.aot_send = read_section<Aot>(r, Section::AotSend, m.kappa, 4, unpack_aot);
  m.aot_recv = read_section<Aot>(r, Section::AotRecv, m.kappa, 4, unpack_aot);
  r.expect_end();
  return m;
}

void MaterialStore::save(const std::string& path, bool overwrite) const {
  if (!overwrite && std::filesystem::exists(path)) {
    throw UsageError("refusing to overwrite existing file " + path + " (use --force)");
  }
  const auto bytes = serialize();
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw UsageError("cannot open " + path + " for writing");
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw std::runtime_error("write to " + path + " failed");
}

MaterialStore MaterialStore::load(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot open material file " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return deserialize(bytes);
}

// ---------------------------------------------------------------------------

KeyCommit commit_delta(const SessionId& sid, const Block& delta, unsigned kappa) {
  ByteWriter w;
  w.bytes(sid);
  w.block(delta, kappa);
  const Digest d = hash(Domain::DeltaCommit, w.data());
  KeyCommit c;
  std::copy_n(d.begin(), c.size(), c.begin());
  return c;
}

SessionId agree_session_id(Session& s) {
  SessionId mine;
  s.rng.fill(mine);
  s.ch.send(MsgType::SessionNonce, {mine.begin(), mine.end()});
  const auto theirs = s.ch.recv(MsgType::SessionNonce);
  if (theirs.size() != mine.size()) throw ProtocolAbort("handshake", "bad session nonce");
  ByteWriter w;
  const bool alice = s.is(Role::Alice);
  w.bytes(alice ? std::span<const std::uint8_t>(mine) : std::span<const std::uint8_t>(theirs));
  w.bytes(alice ? std::span<const std::uint8_t>(theirs) : std::span<const std::uint8_t>(mine));
  const Digest d = hash("SESSION-ID", w.data());
  SessionId sid;
  std::copy_n(d.begin(), sid.size(), sid.begin());
  return sid;
}

MaterialStore deal(Session& s, SeedOtBackend& ot, const DealerConfig& cfg, const SessionId& sid) {
  if (cfg.kappa != s.kappa() || cfg.psi != s.params.psi) throw UsageError("dealer config disagrees with session");
  const unsigned k = s.kappa();
  const Role me = s.role;
  const Role peer = peer_of(me);

  AbitBatch for_a = produce_abits(s, ot, Role::Alice, cfg.abits_owned_total(Role::Alice), k);
  AbitBatch for_b = produce_abits(s, ot, Role::Bob, cfg.abits_owned_total(Role::Bob), k);
  AbitBatch& mine = me == Role::Alice ? for_a : for_b;
  AbitBatch& theirs = me == Role::Alice ? for_b : for_a;
  s.delta = theirs.delta;

  AbitSource src{AbitStream(std::move(mine.halves)), AbitStream(std::move(theirs.halves))};

  MaterialStore m;
  m.role = me;
  m.kappa = k;
  m.psi = cfg.psi;
  m.session_id = sid;
  m.delta = s.delta;

  auto aot_ab = aot_produce(s, Role::Alice, cfg.n_aots_AB, cfg.aot_bucket(cfg.n_aots_AB), src);
  auto aot_ba = aot_produce(s, Role::Bob, cfg.n_aots_BA, cfg.aot_bucket(cfg.n_aots_BA), src);
  auto aand_a = aand_produce(s, Role::Alice, cfg.n_aands_A, cfg.aand_bucket(cfg.n_aands_A), src);
  auto aand_b = aand_produce(s, Role::Bob, cfg.n_aands_B, cfg.aand_bucket(cfg.n_aands_B), src);
  s.mac.flush(s.ch, MsgType::RtAccFlush, "dealer");

  const std::size_t own_abits = me == Role::Alice ? cfg.n_abits_A : cfg.n_abits_B;
  const std::size_t peer_abits = me == Role::Alice ? cfg.n_abits_B : cfg.n_abits_A;
  const auto own = src.take(me, me, own_abits);
  const auto key = src.take(peer, me, peer_abits);
  m.abit_own.assign(own.begin(), own.end());
  m.abit_key.assign(key.begin(), key.end());
  m.aot_send = me == Role::Alice ? std::move(aot_ab) : std::move(aot_ba);
  m.aot_recv = me == Role::Alice ? std::move(aot_ba) : std::move(aot_ab);
  m.aand_own = me == Role::Alice ? std::move(aand_a) : std::move(aand_b);
  m.aand_key = me == Role::Alice ? std::move(aand_b) : std::move(aand_a);

  m.own_commit = commit_delta(sid, s.delta, k);
  s.ch.send(MsgType::StoreCommit, {m.own_commit.begin(), m.own_commit.end()});
  const auto pc = s.ch.recv(MsgType::StoreCommit);
  if (pc.size() != m.peer_commit.size()) throw ProtocolAbort("dealer", "bad key commitment");
  std::copy(pc.begin(), pc.end(), m.peer_commit.begin());
  return m;
}

void material_handshake(Session& s, const MaterialStore& m) {
  if (m.role != s.role) throw UsageError("material file belongs to the other role");
  if (m.kappa != s.kappa() || m.psi != s.params.psi) throw UsageError("material parameters disagree with session");
  Hello hello;
  hello.kappa = static_cast<std::uint16_t>(m.kappa);
  hello.psi = static_cast<std::uint16_t>(m.psi);
  hello.session_id = m.session_id;
  handshake(s.ch, hello);
  ByteWriter w;
  w.bytes(m.own_commit);
  w.bytes(m.peer_commit);
  s.ch.send(MsgType::StoreCommit, w.take());
  const auto payload = s.ch.recv(MsgType::StoreCommit);
  ByteReader r(payload, "handshake");
  const auto their_own = r.bytes(16);
  const auto their_peer = r.bytes(16);
  r.expect_end();
  const bool ok = std::equal(their_own.begin(), their_own.end(), m.peer_commit.begin()) &&
                  std::equal(their_peer.begin(), their_peer.end(), m.own_commit.begin()) &&
                  commit_delta(m.session_id, m.delta, m.kappa) == m.own_commit;
  if (!ok) throw ProtocolAbort("handshake", "global-key commitment mismatch");
  s.delta = m.delta;
}

}  // namespace mac2pc
