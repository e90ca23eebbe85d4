#include "mac2pc/rng.hpp"

#include <openssl/evp.h>
#include <openssl/rand.h>

#include <cstring>
#include <stdexcept>

namespace mac2pc {

struct Rng::Cipher {
  EVP_CIPHER_CTX* ctx = nullptr;
  ~Cipher() { EVP_CIPHER_CTX_free(ctx); }
};

Rng::Rng(const Seed& seed) : cipher_(std::make_unique<Cipher>()) {
  cipher_->ctx = EVP_CIPHER_CTX_new();
  const std::uint8_t iv[16] = {};
  if (cipher_->ctx == nullptr ||
      EVP_EncryptInit_ex(cipher_->ctx, EVP_aes_128_ctr(), nullptr, seed.data(), iv) != 1) {
    throw std::runtime_error("rng: cipher init failed");
  }
}

namespace {
Rng::Seed seed_from_u64(std::uint64_t s) {
  Rng::Seed out{};
  std::memcpy(out.data(), &s, 8);
  // distinguishes integer seeds from raw 16-byte seeds with a zero tail
  out[15] = 0xA5;
  return out;
}
}  // namespace

Rng::Rng(std::uint64_t seed) : Rng(seed_from_u64(seed)) {}

Rng Rng::from_os() {
  Seed s;
  if (RAND_bytes(s.data(), static_cast<int>(s.size())) != 1) {
    throw std::runtime_error("rng: OS entropy unavailable");
  }
  return Rng(s);
}

Rng::Rng(Rng&&) noexcept = default;
Rng& Rng::operator=(Rng&&) noexcept = default;
Rng::~Rng() = default;

void Rng::refill() {
  static const std::uint8_t zeros[sizeof(buf_)] = {};
  int len = 0;
  EVP_EncryptUpdate(cipher_->ctx, buf_.data(), &len, zeros, static_cast<int>(buf_.size()));
  pos_ = 0;
}

void Rng::fill(std::span<std::uint8_t> out) {
  std::size_t done = 0;
  while (done < out.size()) {
    if (pos_ == buf_.size()) refill();
    const std::size_t n = std::min(out.size() - done, buf_.size() - pos_);
    std::memcpy(out.data() + done, buf_.data() + pos_, n);
    pos_ += n;
    done += n;
  }
}

std::uint64_t Rng::next_u64() {
  if (buf_.size() - pos_ < 8) refill();
  std::uint64_t v;
  std::memcpy(&v, buf_.data() + pos_, 8);
  pos_ += 8;
  return v;
}

bool Rng::next_bit() {
  if (bits_left_ == 0) {
    bitbuf_ = next_u64();
    bits_left_ = 64;
  }
  const bool b = bitbuf_ & 1;
  bitbuf_ >>= 1;
  --bits_left_;
  return b;
}

std::uint64_t Rng::uniform(std::uint64_t bound) {
  if (bound == 0) throw UsageError("rng: uniform bound must be positive");
  // 2^64 mod bound values at the bottom would bias the result
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t v = next_u64();
    if (v >= threshold) return v % bound;
  }
}

double Rng::uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

Block Rng::block(unsigned bits) {
  Block b{next_u64(), next_u64()};
  return b.masked(bits);
}

BitVec Rng::bits(std::size_t n) {
  BitVec v(n);
  fill({reinterpret_cast<std::uint8_t*>(v.words().data()), v.words().size() * 8});
  v.trim();
  return v;
}

Rng Rng::fork() {
  Seed s;
  fill(s);
  return Rng(s);
}

}  // namespace mac2pc
