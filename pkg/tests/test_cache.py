import struct

import pytest

from harmonic_sieve import cache
from harmonic_sieve.engine import classical_sieve, materialize, prime_count
from harmonic_sieve.numberline import SpawnRule, Variant, spawn_construction
from oracles import is_prime

# bound 30: odd numbers 1..29 -> 15 bits; set for 1, 9, 15, 21, 25, 27
HSV1_BOUND_30 = b"HSV1\x01" + (30).to_bytes(8, "little") + bytes([0x91, 0x34, 0, 0, 0, 0, 0, 0])


def expected_payload(bound):
    n_odd = (bound + 1) // 2
    value = sum(1 << i for i in range(n_odd) if not is_prime(2 * i + 1))
    words = -(-n_odd // 64)
    return value.to_bytes(8 * words, "little")


def test_bit_exact_small():
    assert expected_payload(30) == HSV1_BOUND_30[13:]
    assert cache.to_bytes(classical_sieve(30)) == HSV1_BOUND_30


@pytest.mark.parametrize("bound", [2, 3, 127, 128, 129, 130, 1000, 4099])
def test_bit_exact_layout(bound):
    data = cache.to_bytes(classical_sieve(bound))
    magic, version, b = struct.unpack_from("<4sBQ", data)
    assert (magic, version, b) == (b"HSV1", 1, bound)
    assert data[13:] == expected_payload(bound)
    assert len(data) == 13 + 8 * cache.word_count(bound)


def test_round_trip(tmp_path):
    t = classical_sieve(10**5)
    path = cache.write_cache(t, tmp_path / "p.hsv")
    back = cache.read_cache(path)
    assert back == t
    assert prime_count(back) == prime_count(t) == 9592
    assert cache.read_bound(path) == 10**5


@pytest.mark.parametrize(
    "rule, variant, opo",
    [
        (SpawnRule.CASE_I, Variant.FULL, False),
        (SpawnRule.CASE_II, Variant.FULL, False),
        (SpawnRule.CASE_I, Variant.FULL, True),
        (SpawnRule.CASE_I, Variant.ODD_ONLY, False),
        (SpawnRule.CASE_II, Variant.ODD_ONLY, False),
    ],
)
def test_harmonic_cache_bytes_equal_classical(rule, variant, opo):
    bound = 20_011
    h = materialize(spawn_construction(variant, rule, bound, opo))
    assert cache.to_bytes(h) == cache.to_bytes(classical_sieve(bound))


@pytest.mark.parametrize(
    "data, msg",
    [
        (b"HSV", "too short"),
        (b"XSV1\x01" + (30).to_bytes(8, "little") + bytes(8), "magic"),
        (b"HSV1\x02" + (30).to_bytes(8, "little") + bytes(8), "version"),
        (HSV1_BOUND_30[:-1], "expected"),
        (b"HSV1\x01" + (30).to_bytes(8, "little") + bytes([0x90, 0x34]) + bytes(6), "n=1"),
        (b"HSV1\x01" + (30).to_bytes(8, "little") + bytes([0x91, 0xB4]) + bytes(6), "padding"),
        (b"HSV1\x01" + (1).to_bytes(8, "little") + bytes(8), "below 2"),
    ],
)
def test_corrupt_files_rejected(data, msg):
    with pytest.raises(cache.CacheFormatError, match=msg):
        cache.from_bytes(data)
