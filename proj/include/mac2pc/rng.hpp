#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>

#include "mac2pc/bitlinalg.hpp"
#include "mac2pc/block.hpp"

namespace mac2pc {

/// Deterministic generator: AES-128 in counter mode under a 16-byte seed.
/// Every protocol draw and every Monte-Carlo trial goes through this type so
/// that runs are reproducible from a seed.
class Rng {
 public:
  using Seed = std::array<std::uint8_t, 16>;
  using result_type = std::uint64_t;

  explicit Rng(const Seed& seed);
  explicit Rng(std::uint64_t seed);
  static Rng from_os();

  Rng(Rng&&) noexcept;
  Rng& operator=(Rng&&) noexcept;
  ~Rng();

  void fill(std::span<std::uint8_t> out);
  std::uint64_t next_u64();
  bool next_bit();
  /// Uniform in [0, bound), rejection sampled.
  std::uint64_t uniform(std::uint64_t bound);
  double uniform01();
  Block block(unsigned bits);
  BitVec bits(std::size_t n);
  /// Independent child stream.
  Rng fork();

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() { return next_u64(); }

 private:
  void refill();

  struct Cipher;
  std::unique_ptr<Cipher> cipher_;
  std::array<std::uint8_t, 4096> buf_{};
  std::size_t pos_ = sizeof(buf_);
  std::uint64_t bitbuf_ = 0;
  unsigned bits_left_ = 0;
};

}  // namespace mac2pc
