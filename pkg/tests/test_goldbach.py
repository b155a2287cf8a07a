import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from harmonic_sieve.engine import ClassificationTable, Provenance, classical_sieve, materialize
from harmonic_sieve.goldbach import (
    Checkpoint,
    ComplexityError,
    CounterexampleError,
    GoldbachTriple,
    NoTripleFound,
    count_representations,
    decompose_strong_pair,
    decompose_weak,
    decompose_weak_batch,
    read_checkpoints,
    three_odds_sum_property,
    verify_range,
)
from harmonic_sieve.numberline import ConfigError, SpawnRule, Variant, spawn_construction
from oracles import count_triples, lexmin_triples, strong_pairs


@pytest.fixture(scope="module")
def table():
    return classical_sieve(20_000)


@pytest.fixture(scope="module")
def lexmin():
    return lexmin_triples(3001)


def test_weak_examples(table):
    assert decompose_weak(9, table).primes() == (3, 3, 3)
    assert decompose_weak(11, table).primes() == (3, 3, 5)
    assert decompose_weak(15, table).primes() == (3, 5, 7)


def test_strong_examples(table):
    assert decompose_strong_pair(6, table) == (3, 3)
    assert decompose_strong_pair(12, table) == (5, 7)
    assert decompose_strong_pair(26, table) == (3, 23)
    for m in (6, 12, 26, 100, 998):
        assert decompose_strong_pair(m, table) == strong_pairs(m)[0]


def test_strong_pair_none_when_primes_missing():
    # a table that only knows the odd primes 3 and 5
    mask = np.ones(31, dtype=bool)
    mask[[2, 3, 5]] = False
    t = ClassificationTable.from_crossed_mask(mask, Provenance.classical())
    assert decompose_strong_pair(8, t) == (3, 5)
    assert decompose_strong_pair(14, t) is None
    with pytest.raises(NoTripleFound) as exc:
        decompose_weak(21, t)
    assert exc.value.n == 21


@pytest.mark.parametrize("bad", [4, 7, 10, 1])
def test_weak_preconditions(table, bad):
    with pytest.raises(ConfigError):
        decompose_weak(bad, table)


def test_strong_preconditions(table):
    for bad in (4, 7, 2):
        with pytest.raises(ConfigError):
            decompose_strong_pair(bad, table)
    with pytest.raises(ConfigError):
        decompose_weak(20_001, table)


def test_scalar_matches_lexmin_oracle(table, lexmin):
    for n, triple in lexmin.items():
        assert decompose_weak(n, table).primes() == triple


def test_batch_matches_lexmin_oracle(table, lexmin):
    ns = np.array(sorted(lexmin), dtype=np.int64)
    p1, p2, p3 = decompose_weak_batch(ns, table)
    assert list(zip(p1.tolist(), p2.tolist(), p3.tolist())) == [lexmin[n] for n in ns.tolist()]


def test_batch_reports_smallest_failure():
    mask = np.ones(61, dtype=bool)
    mask[[2, 3, 5, 7]] = False  # only 3, 5, 7 known as odd primes
    t = ClassificationTable.from_crossed_mask(mask, Provenance.classical())
    ns = np.arange(9, 61, 2)
    with pytest.raises(NoTripleFound) as exc:
        decompose_weak_batch(ns, t)
    assert exc.value.n == 23  # 21 = 7+7+7 is the last reachable
    assert decompose_weak_batch(np.array([], dtype=np.int64), t)[0].size == 0


def test_determinism_across_tables():
    classical = classical_sieve(5000)
    harmonic = materialize(spawn_construction(Variant.ODD_ONLY, SpawnRule.CASE_I, 5000))
    segmented = classical_sieve(5000, segment_length=64)
    for n in range(9, 5000, 2):
        a = decompose_weak(n, classical)
        assert a == decompose_weak(n, harmonic) == decompose_weak(n, segmented)


def test_triple_check_rejects_bad(table):
    with pytest.raises(AssertionError):
        GoldbachTriple(15, 3, 3, 9).check(table)
    with pytest.raises(AssertionError):
        GoldbachTriple(15, 5, 3, 7).check(table)
    with pytest.raises(AssertionError):
        GoldbachTriple(12, 2, 3, 7).check(table)


def test_count_representations(table):
    assert count_representations(9, table) == 1
    assert count_representations(11, table) == 1
    assert count_triples(23) == 4
    assert count_representations(23, table) == 4
    for n in range(9, 600, 2):
        assert count_representations(n, table) == count_triples(n) >= 1


def test_count_guard():
    big = classical_sieve(10**6 + 3)
    with pytest.raises(ComplexityError):
        count_representations(10**6 + 1, big)
    with pytest.raises(ConfigError):
        count_representations(8, big)


def test_three_odds_property():
    assert three_odds_sum_property(10**6, 42)
    assert three_odds_sum_property(1, 123)
    assert three_odds_sum_property(1000, 0, high=2)  # every sample is 3 + 3 + 3
    with pytest.raises(ConfigError):
        three_odds_sum_property(0)


@settings(max_examples=200)
@given(st.integers(1, 10**9), st.integers(1, 10**9), st.integers(1, 10**9))
def test_corollary_hypothesis(a, b, c):
    s = (2 * a + 1) + (2 * b + 1) + (2 * c + 1)
    assert s % 2 == 1 and s > 7


def test_verify_examples():
    r = verify_range(9, 99)
    assert r.verified_count == 46 and r.failures == [] and r.success
    r = verify_range(9, 9)
    assert r.verified_count == 1 and r.success
    r = verify_range(10, 10)
    assert r.verified_count == 0 and r.success


def test_verify_preconditions(table):
    with pytest.raises(ConfigError):
        verify_range(7, 99)
    with pytest.raises(ConfigError):
        verify_range(99, 9)
    with pytest.raises(ConfigError):
        verify_range(9, 30_000, table=table)


def test_verify_workers_and_segments_agree(table):
    ref = verify_range(9, 19_999, segment=1000, table=table)
    for workers in (1, 2, 4):
        r = verify_range(9, 19_999, segment=1000, workers=workers, table=table)
        assert r.without_timing() == ref.without_timing()
    assert ref.verified_count == len(range(9, 20_000, 2))


def test_checkpoint_file_format(tmp_path, table):
    ck = tmp_path / "run.ckpt"
    r = verify_range(9, 5009, checkpoint_path=ck, segment=500, table=table)
    lines = ck.read_text().splitlines()
    # 2501 odd numbers in blocks of 500: five full blocks and a final one holding 5009
    assert len(lines) == 6
    seq, last_n, count, fp = lines[-1].split(",")
    assert (int(seq), int(last_n), int(count), fp) == (6, 5009, 2501, r.config_fingerprint)
    assert lines[0] == f"1,1007,500,{r.config_fingerprint}"
    assert r.checkpoint_lineage == [[i + 1, 1007 + 1000 * i] for i in range(5)] + [[6, 5009]]


def test_torn_checkpoint_line_ignored(tmp_path):
    ck = tmp_path / "c"
    ck.write_text("1,1007,500,abcdabcdabcdabcd\n2,20")
    assert read_checkpoints(ck) == [Checkpoint(1, 1007, 500, "abcdabcdabcdabcd")]
    ck.write_text("2,1007,500,abcdabcdabcdabcd\n")
    with pytest.raises(ConfigError):
        read_checkpoints(ck)


class Kill(Exception):
    pass


def test_resume_equivalence(tmp_path, table):
    kwargs = dict(segment=256, table=table)
    ref = verify_range(9, 19_999, checkpoint_path=tmp_path / "ref", **kwargs)
    ck = tmp_path / "resumed"

    def kill_at(seq):
        def hook(rec):
            if rec.seq == seq:
                raise Kill

        return hook

    for k in (3, 17, 30):
        with pytest.raises(Kill):
            verify_range(9, 19_999, checkpoint_path=ck, on_checkpoint=kill_at(k), **kwargs)
    final = verify_range(9, 19_999, checkpoint_path=ck, **kwargs)
    assert final.without_timing() == ref.without_timing()
    assert ck.read_text() == (tmp_path / "ref").read_text()
    # resuming a finished run is a no-op
    again = verify_range(9, 19_999, checkpoint_path=ck, **kwargs)
    assert again.without_timing() == ref.without_timing()


def test_resume_after_torn_write(tmp_path, table):
    ck = tmp_path / "c"
    ref = verify_range(9, 4999, checkpoint_path=tmp_path / "ref", segment=300, table=table)
    lines = (tmp_path / "ref").read_text().splitlines(keepends=True)
    ck.write_text("".join(lines[:2]) + lines[2][:7])
    final = verify_range(9, 4999, checkpoint_path=ck, segment=300, table=table)
    assert final.without_timing() == ref.without_timing()
    assert ck.read_text() == (tmp_path / "ref").read_text()


def test_resume_rejects_foreign_checkpoint(tmp_path, table):
    ck = tmp_path / "c"
    verify_range(9, 999, checkpoint_path=ck, segment=100, table=table)
    with pytest.raises(ConfigError, match="another run"):
        verify_range(9, 1999, checkpoint_path=ck, segment=100, table=table)


def test_counterexample_escalates(tmp_path):
    mask = np.ones(101, dtype=bool)
    mask[[2, 3, 5, 7]] = False
    t = ClassificationTable.from_crossed_mask(mask, Provenance.classical())
    ck = tmp_path / "c"
    with pytest.raises(CounterexampleError) as exc:
        verify_range(9, 99, checkpoint_path=ck, segment=4, table=t)
    report = exc.value.report
    assert report.failures == [23] and not report.success
    assert report.verified_count == len(range(9, 23, 2))
    assert isinstance(exc.value.__cause__, NoTripleFound)
    assert (tmp_path / "c.counterexample").read_text() == "23\n"
    assert json.loads((tmp_path / "c.report.json").read_text())["failures"] == [23]
