"""End-to-end acceptance checks; each prints one PASS/FAIL line."""
import re
import time
from pathlib import Path

import numpy as np
import pytest

from harmonic_sieve import cache, plot
from harmonic_sieve.engine import classical_sieve, materialize, prime_count
from harmonic_sieve.equivalence import compare_constructions, powers_of_two_residue
from harmonic_sieve.goldbach import decompose_weak, decompose_weak_batch, three_odds_sum_property, verify_range
from harmonic_sieve.numberline import SpawnRule, Variant, crossers_of, spawn_construction
from oracles import lexmin_triples, trial_primes

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture
def report(capsys):
    def emit(name, ok, seconds, limit=None, detail=""):
        budget = f" (limit {limit:g}s)" if limit else ""
        line = f"{'PASS' if ok else 'FAIL'}  {name}: {seconds:.2f}s{budget} {detail}".rstrip()
        with capsys.disabled():
            print("\n" + line)
        assert ok, line

    return emit


def test_oracle_equivalence(report):
    t0 = time.perf_counter()
    ok = True
    for bound in (10**2, 10**3, 10**4, 10**5):
        harmonic = materialize(spawn_construction(Variant.FULL, SpawnRule.CASE_I, bound))
        classical = classical_sieve(bound)
        trial = set(trial_primes(bound))
        ok &= harmonic == classical
        ok &= harmonic.survivor_set() == classical.survivor_set() == trial
    dt = time.perf_counter() - t0
    report("oracle equivalence B=10^2..10^5", bool(ok) and dt < 5, dt, 5)


def test_case_equivalence(report):
    t0 = time.perf_counter()
    reports = [compare_constructions(v, 10**5) for v in (Variant.FULL, Variant.ODD_ONLY)]
    dt = time.perf_counter() - t0
    ok = all(r.crossed_sets_equal and r.survivor_sets_equal for r in reports)
    report("case I / case II equivalence at 10^5 (full, odd-only)", ok and dt < 10, dt, 10)


def test_powers_of_two_residue(report):
    t0 = time.perf_counter()
    got = powers_of_two_residue(10**6)
    dt = time.perf_counter() - t0
    ok = got == [2**m for m in range(2, 20)]
    report("powers-of-two residue at 10^6", ok and dt < 5, dt, 5, f"[{got[0]}..{got[-1]}]")


def test_weak_goldbach_desk_run(report):
    t0 = time.perf_counter()
    r = verify_range(9, 10**7)
    dt = time.perf_counter() - t0
    ok = r.success and r.failures == [] and r.verified_count == len(range(9, 10**7 + 1, 2))
    report("weak Goldbach verify_range(9, 10^7)", ok and dt < 300, dt, 300, f"verified={r.verified_count}")


def test_decomposition_oracle_agreement(report):
    t0 = time.perf_counter()
    expected = lexmin_triples(10**4)
    table = classical_sieve(10**4)
    ns = np.arange(9, 10**4 + 1, 2)
    ok = all(decompose_weak(int(n), table).primes() == expected[int(n)] for n in ns)
    p1, p2, p3 = decompose_weak_batch(ns, table)
    ok &= list(zip(p1.tolist(), p2.tolist(), p3.tolist())) == [expected[int(n)] for n in ns]
    dt = time.perf_counter() - t0
    report("decomposition = brute-force lexicographic minimum on [9, 10^4]", ok and dt < 30, dt, 30)


def test_corollary_property(report):
    t0 = time.perf_counter()
    ok = three_odds_sum_property(10**6, rng_seed=2024)
    dt = time.perf_counter() - t0
    report("three odd numbers sum to odd > 7 (10^6 samples)", ok and dt < 2, dt, 2)


class _Killed(Exception):
    pass


def test_resume_equivalence(report, tmp_path):
    t0 = time.perf_counter()
    lo, hi, segment = 9, 2 * 10**6, 1 << 14
    ref = verify_range(lo, hi, checkpoint_path=tmp_path / "ref", segment=segment)
    blocks = len(ref.checkpoint_lineage)
    kill_points = sorted(np.random.default_rng(7).choice(np.arange(1, blocks), size=3, replace=False).tolist())

    def kill_at(seq):
        def hook(rec):
            if rec.seq == seq:
                raise _Killed

        return hook

    ck = tmp_path / "resumed"
    for k in kill_points:
        with pytest.raises(_Killed):
            verify_range(lo, hi, checkpoint_path=ck, segment=segment, on_checkpoint=kill_at(k))
    final = verify_range(lo, hi, checkpoint_path=ck, segment=segment)
    ok = final.without_timing() == ref.without_timing()
    dt = time.perf_counter() - t0
    report("resume after kills at blocks " + str(kill_points), ok, dt)


def test_figure_reproduction(report, tmp_path):
    t0 = time.perf_counter()
    ok = True
    for fid in plot.STANDARD_FIGURES:
        out = plot.write_figure(fid, tmp_path)
        svg = out.read_bytes()
        ok &= svg == (GOLDEN / out.name).read_bytes()
        _, cons = plot.figure_setup(fid)
        markers = [int(n) for n in re.findall(rb'class="marker" data-n="(\d+)"', svg)]
        ok &= markers == [n for n in range(2, 41) if crossers_of(cons, n)]
    dt = time.perf_counter() - t0
    report(f"figure reproduction ({len(plot.STANDARD_FIGURES)} golden SVGs)", bool(ok), dt)


def test_cache_round_trip(report, tmp_path):
    t0 = time.perf_counter()
    bound = 10**6
    classical = classical_sieve(bound)
    harmonic = materialize(spawn_construction(Variant.FULL, SpawnRule.CASE_I, bound))
    a = cache.write_cache(classical, tmp_path / "classical.hsv")
    b = cache.write_cache(harmonic, tmp_path / "harmonic.hsv")
    back = cache.read_cache(a)
    ok = prime_count(back) == prime_count(classical) == 78498
    ok &= Path(a).read_bytes() == Path(b).read_bytes()
    dt = time.perf_counter() - t0
    report("HSV1 cache round-trip at 10^6", ok, dt)
