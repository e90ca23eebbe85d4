"""Two-party computation from authenticated bits.

The heavy lifting happens in the compiled ``_core`` module; this package adds
helpers for moving between bytes and the bit lists the core functions use.
Bits inside a byte are taken least significant first, matching the command
line tool and the AES circuit.
"""

from ._core import (
    Circuit,
    OutOfMaterial,
    ParseError,
    ProtocolAbort,
    aes128_circuit,
    bucket_fail_prob,
    bucket_size_for,
    load_bristol,
    log2_alpha_prime,
    parse_bristol,
    plain_eval,
    random_circuit,
    run_local,
    span_fail_exact,
    verify_bounds,
)


def bits_from_bytes(data: bytes) -> list[int]:
    return [(byte >> i) & 1 for byte in data for i in range(8)]


def bytes_from_bits(bits: list[int]) -> bytes:
    out = bytearray((len(bits) + 7) // 8)
    for i, b in enumerate(bits):
        out[i // 8] |= (b & 1) << (i % 8)
    return bytes(out)


def aes128_encrypt(key: bytes, plaintext: bytes, *, kappa: int = 128, psi: int = 40, seed: int = 0) -> bytes:
    """Encrypts one block with Alice holding the key and Bob the plaintext."""
    if len(key) != 16 or len(plaintext) != 16:
        raise ValueError("key and plaintext must be 16 bytes")
    run = run_local(aes128_circuit(), bits_from_bytes(key), bits_from_bytes(plaintext), kappa=kappa, psi=psi, seed=seed)
    return bytes_from_bits(run["out_alice"])


__all__ = [
    "Circuit",
    "OutOfMaterial",
    "ParseError",
    "ProtocolAbort",
    "aes128_circuit",
    "aes128_encrypt",
    "bits_from_bytes",
    "bucket_fail_prob",
    "bucket_size_for",
    "bytes_from_bits",
    "load_bristol",
    "log2_alpha_prime",
    "parse_bristol",
    "plain_eval",
    "random_circuit",
    "run_local",
    "span_fail_exact",
    "verify_bounds",
]
