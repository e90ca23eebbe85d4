import itertools

import pytest

import mac2pc

AND_CIRCUIT = "1 3\n2 1 1\n1 1\n\n2 1 0 1 2 AND\n"


def test_parse_and_plain_eval_truth_table():
    c = mac2pc.parse_bristol(AND_CIRCUIT)
    assert (c.n_gates, c.and_count, c.inputs_alice, c.inputs_bob, c.n_outputs) == (1, 1, 1, 1, 1)
    for a, b in itertools.product((0, 1), repeat=2):
        assert mac2pc.plain_eval(c, [a], [b]) == [a & b]


def test_malformed_circuit_raises_parse_error():
    with pytest.raises(mac2pc.ParseError):
        mac2pc.parse_bristol("1 3\n2 1 1\n1 1\n\n2 1 0 7 2 AND\n")


def test_secure_evaluation_matches_plain_evaluation():
    c = mac2pc.random_circuit(7, 6, 5, 120, 8)
    a = [1, 0, 1, 1, 0, 1]
    b = [0, 1, 1, 0, 1]
    run = mac2pc.run_local(c, a, b, kappa=64, psi=20, seed=3)
    expected = mac2pc.plain_eval(c, a, b)
    assert run["out_alice"] == expected
    assert run["out_bob"] == expected
    assert run["stats_alice"]["and_gates"] == c.and_count


def test_aes_block_matches_reference_vector():
    key = bytes(range(16))
    pt = bytes.fromhex("00112233445566778899aabbccddeeff")
    assert mac2pc.aes128_encrypt(key, pt, kappa=64, psi=20) == bytes.fromhex("69c4e0d86a7b0430d8cdb78070b4c55a")


def test_aes_block_matches_cryptography_oracle():
    algorithms = pytest.importorskip("cryptography.hazmat.primitives.ciphers")
    key = bytes.fromhex("2b7e151628aed2a6abf7158809cf4f3c")
    pt = bytes.fromhex("6bc1bee22e409f96e93d7e117393172a")
    enc = algorithms.Cipher(algorithms.algorithms.AES(key), algorithms.modes.ECB()).encryptor()
    assert mac2pc.aes128_encrypt(key, pt, kappa=64, psi=20, seed=9) == enc.update(pt) + enc.finalize()


def test_wrong_input_length_is_rejected():
    c = mac2pc.parse_bristol(AND_CIRCUIT)
    with pytest.raises(ValueError):
        mac2pc.run_local(c, [1, 0], [1], kappa=64, psi=20)


def test_bit_helpers_round_trip():
    data = bytes([0x01, 0x80, 0xA5])
    bits = mac2pc.bits_from_bytes(data)
    assert bits[0] == 1 and bits[15] == 1
    assert mac2pc.bytes_from_bits(bits) == data


def test_parameter_helpers():
    assert mac2pc.bucket_size_for(1024, 40) == 5
    assert mac2pc.bucket_size_for(2**20, 100) == 6
    assert mac2pc.log2_alpha_prime(6, 2**20) <= -100
    assert mac2pc.span_fail_exact(8, 36) <= 2**-7


def test_verify_bounds_all_hold():
    checks = mac2pc.verify_bounds(2000, 5)
    assert checks and all(c["pass"] for c in checks)
