"""Materialize the harmonic sieve, check it against the classical one, and cache it.

Run: python3 demos/02_sieve_and_cache.py [bound]
"""
import itertools
import sys
import tempfile
import time
from pathlib import Path

from harmonic_sieve import cache
from harmonic_sieve.engine import classical_sieve, materialize, prime_count, primes_iter
from harmonic_sieve.numberline import SpawnRule, Variant, spawn_construction

bound = int(float(sys.argv[1])) if len(sys.argv) > 1 else 10**6

t0 = time.perf_counter()
classical = classical_sieve(bound)
t1 = time.perf_counter()
harmonic = materialize(spawn_construction(Variant.FULL, SpawnRule.CASE_I, bound))
t2 = time.perf_counter()

print(f"bound {bound:,}: classical {t1 - t0:.3f}s, harmonic {t2 - t1:.3f}s")
print("tables identical:", classical == harmonic)
print("prime count:", prime_count(classical))
print("first primes:", list(itertools.islice(primes_iter(classical), 16)))

with tempfile.TemporaryDirectory() as tmp:
    a = cache.write_cache(classical, Path(tmp) / "classical.hsv")
    b = cache.write_cache(harmonic, Path(tmp) / "harmonic.hsv")
    print(f"cache size {a.stat().st_size:,} bytes, byte-identical: {a.read_bytes() == b.read_bytes()}")
    print("reloaded prime count:", prime_count(cache.read_cache(a)))
