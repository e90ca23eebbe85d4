#pragma once

#include <array>
#include <cstdint>

#include "mac2pc/circuit.hpp"

namespace mac2pc {

/// The AES S-box computed from its definition (field inverse followed by
/// the affine map), independent of the circuit construction.
std::array<std::uint8_t, 256> aes_sbox_table();

/// Single S-box: 8 input wires (byte, bit i = coefficient of x^i) to 8
/// output wires.
Circuit aes_sbox_circuit();

/// AES-128 encryption of one block. Bits are little-endian within bytes and
/// bytes in the standard order.
///   plain:      inputs  [key(128) | plaintext(128)]; group 0 Alice, group 1 Bob.
///   shared key: inputs  [K_A(128) || plaintext(128)] from Alice and K_B(128)
///               from Bob; the cipher key is K_A ^ K_B.
/// Output: ciphertext (128).
Circuit aes128_circuit(bool shared_key = false);

}  // namespace mac2pc
