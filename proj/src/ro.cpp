#include "mac2pc/ro.hpp"

#include <openssl/evp.h>

#include <cstring>
#include <stdexcept>

namespace mac2pc {

namespace {

constexpr std::string_view kTags[] = {
    "EQ-commit", "LaOT-transfer", "LaOT-recommit", "LaAND-U", "ROT", "PRG",
    "ACC",       "ACC-MAC",       "DELTA-COMMIT",  "SEED-OT", "TEST",
};
static_assert(std::size(kTags) == static_cast<std::size_t>(Domain::kCount));

thread_local std::uint64_t t_counts[static_cast<std::size_t>(Domain::kCount)] = {};

const EVP_MD* sha256() {
  static EVP_MD* md = EVP_MD_fetch(nullptr, "SHA256", nullptr);
  if (md == nullptr) throw std::runtime_error("ro: SHA-256 unavailable");
  return md;
}

struct Hasher {
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  ~Hasher() { EVP_MD_CTX_free(ctx); }

  void begin(std::string_view tag) {
    EVP_DigestInit_ex2(ctx, sha256(), nullptr);
    const auto n = static_cast<std::uint32_t>(tag.size());
    const std::uint8_t len[4] = {static_cast<std::uint8_t>(n >> 24), static_cast<std::uint8_t>(n >> 16),
                                 static_cast<std::uint8_t>(n >> 8), static_cast<std::uint8_t>(n)};
    EVP_DigestUpdate(ctx, len, 4);
    EVP_DigestUpdate(ctx, tag.data(), tag.size());
  }
  void update(const void* p, std::size_t n) { EVP_DigestUpdate(ctx, p, n); }
  Digest finish() {
    Digest d;
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, d.data(), &len);
    return d;
  }
};

Hasher& hasher() {
  thread_local Hasher h;
  return h;
}

}  // namespace

std::string_view domain_tag(Domain d) { return kTags[static_cast<std::size_t>(d)]; }

Digest hash(std::string_view tag, std::span<const std::uint8_t> input) {
  Hasher& h = hasher();
  h.begin(tag);
  h.update(input.data(), input.size());
  return h.finish();
}

Digest hash(Domain d, std::span<const std::uint8_t> input) {
  ++t_counts[static_cast<std::size_t>(d)];
  return hash(domain_tag(d), input);
}

Block hash_block(Domain d, std::span<const std::uint8_t> input, unsigned bits) {
  const Digest dg = hash(d, input);
  return Block::from_bytes(dg).masked(bits);
}

Block hash_blocks(Domain d, std::initializer_list<Block> in, unsigned bits) {
  const std::size_t nb = bytes_for_bits(bits);
  std::uint8_t buf[16 * 4];
  if (in.size() > 4) throw UsageError("hash_blocks: at most four blocks");
  std::size_t off = 0;
  for (const Block& b : in) {
    b.to_bytes({buf + off, nb});
    off += nb;
  }
  return hash_block(d, {buf, off}, bits);
}

BitVec expand(std::span<const std::uint8_t> seed, std::size_t out_bits) {
  BitVec out(out_bits);
  auto bytes = std::span<std::uint8_t>(reinterpret_cast<std::uint8_t*>(out.words().data()),
                                       out.words().size() * 8);
  const std::size_t need = bytes_for_bits(out_bits);
  Hasher& h = hasher();
  const std::string_view tag = domain_tag(Domain::Prg);
  std::size_t done = 0;
  for (std::uint64_t ctr = 0; done < need; ++ctr) {
    std::uint8_t c[8];
    std::memcpy(c, &ctr, 8);
    h.begin(tag);
    h.update(seed.data(), seed.size());
    h.update(c, 8);
    const Digest d = h.finish();
    const std::size_t n = std::min(d.size(), need - done);
    std::memcpy(bytes.data() + done, d.data(), n);
    done += n;
    ++t_counts[static_cast<std::size_t>(Domain::Prg)];
  }
  out.trim();
  return out;
}

BitVec mask(const BitVec& key_material, const BitVec& message) {
  const auto kb = key_material.to_bytes();
  const Digest seed = hash(Domain::Prg, kb);
  return message ^ expand(seed, message.size());
}

std::uint64_t HashCounter::get(Domain d) { return t_counts[static_cast<std::size_t>(d)]; }

void HashCounter::reset() {
  for (auto& c : t_counts) c = 0;
}

void MacAccumulator::absorb(const Block& mac) {
  std::uint8_t m[16];
  const std::size_t nb = bytes_for_bits(kappa_);
  mac.masked(kappa_).to_bytes({m, nb});
  const Digest hm = hash(Domain::AccMac, {m, nb});
  std::uint8_t buf[64];
  std::memcpy(buf, state_.data(), 32);
  std::memcpy(buf + 32, hm.data(), 32);
  state_ = hash(Domain::Acc, buf);
  ++count_;
}

}  // namespace mac2pc
