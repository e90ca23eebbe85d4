#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mac2pc/session.hpp"

namespace mac2pc {

/// Smallest B >= 2 with (log2(ell) + 1)(B - 1) >= psi.
std::size_t bucket_size_for(std::size_t ell, unsigned psi);

/// The bucket size used by the command-line benchmark.
inline constexpr std::size_t kDefaultBucketSize = 4;

/// Sampler side draws a uniform permutation of n and sends it; the other
/// side receives and validates it.
std::vector<std::uint32_t> send_permutation(Session& s, std::size_t n);
std::vector<std::uint32_t> recv_permutation(Session& s, std::size_t n, const char* phase);

}  // namespace mac2pc
