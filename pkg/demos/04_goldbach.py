"""Odd numbers as sums of three primes, checked over a range with checkpoints.

Run: python3 demos/04_goldbach.py
"""
import tempfile
from pathlib import Path

from harmonic_sieve.engine import classical_sieve
from harmonic_sieve.goldbach import (
    count_representations,
    decompose_strong_pair,
    decompose_weak,
    three_odds_sum_property,
    verify_range,
)

table = classical_sieve(10**5)
for n in (9, 11, 15, 101, 99_999):
    t = decompose_weak(n, table)
    print(f"{n:>6} = {t.p1} + {t.p2} + {t.p3}   ({count_representations(n, table)} representations)")
print("strong pair for 100:", decompose_strong_pair(100, table))

with tempfile.TemporaryDirectory() as tmp:
    ck = Path(tmp) / "run.ckpt"
    report = verify_range(9, 10**6, checkpoint_path=ck, segment=1 << 16)
    print(f"\nverified {report.verified_count:,} odd numbers in {report.wall_time_s:.2f}s, success={report.success}")
    print("last checkpoint:", ck.read_text().splitlines()[-1])
    # running again resumes from the checkpoint file and does no new work
    again = verify_range(9, 10**6, checkpoint_path=ck, segment=1 << 16)
    print("resumed report identical:", again.without_timing() == report.without_timing())

print("three odd numbers always sum to an odd number > 7:", three_odds_sum_property(10**5, rng_seed=1))
