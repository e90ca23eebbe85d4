#include "mac2pc/bucket.hpp"

#include <cmath>

#include "mac2pc/wire.hpp"

namespace mac2pc {

std::size_t bucket_size_for(std::size_t ell, unsigned psi) {
  const double lg = ell <= 1 ? 0.0 : std::log2(static_cast<double>(ell));
  std::size_t b = 2;
  while ((lg + 1.0) * static_cast<double>(b - 1) < static_cast<double>(psi)) ++b;
  return b;
}

std::vector<std::uint32_t> send_permutation(Session& s, std::size_t n) {
  auto perm = random_permutation(n, s.rng);
  ByteWriter w;
  w.u64(n);
  for (auto p : perm) w.u32(p);
  s.ch.send(MsgType::CombPerm, w.take());
  return perm;
}

std::vector<std::uint32_t> recv_permutation(Session& s, std::size_t n, const char* phase) {
  const auto payload = s.ch.recv(MsgType::CombPerm);
  ByteReader r(payload, phase);
  if (r.u64() != n) throw ProtocolAbort(phase, "permutation has wrong length");
  std::vector<std::uint32_t> perm(n);
  for (auto& p : perm) p = r.u32();
  r.expect_end();
  if (!is_permutation(perm)) throw ProtocolAbort(phase, "peer sent an invalid permutation");
  return perm;
}

}  // namespace mac2pc
