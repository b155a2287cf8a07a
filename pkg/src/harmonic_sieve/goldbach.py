"""Weak Goldbach decomposition and resumable range verification.

Every search here uses odd primes only.  The triple returned for ``n`` is
the lexicographically smallest ``(p1, p2, p3)`` with ``p1 <= p2 <= p3``:
the smallest odd prime ``p1`` for which ``n - p1`` splits into two odd
primes, then the smallest such split.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import time
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from .engine import ClassificationTable, classical_sieve
from .numberline import ConfigError

log = logging.getLogger(__name__)

DEFAULT_CHECKPOINT_EVERY = 1 << 16
REPRESENTATION_LIMIT = 10**6


class NoTripleFound(Exception):
    def __init__(self, n: int):
        super().__init__(f"no three odd primes sum to {n}")
        self.n = n


class CounterexampleError(Exception):
    def __init__(self, report: "VerificationReport"):
        super().__init__(f"weak Goldbach counterexample at n={report.failures[0]}")
        self.report = report


class ComplexityError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class GoldbachTriple:
    n: int
    p1: int
    p2: int
    p3: int

    def check(self, table: ClassificationTable) -> "GoldbachTriple":
        """Re-assert every invariant against ``table``; returns self."""
        isp = table.odd_prime_mask
        ok = (
            self.n % 2 == 1
            and self.n > 7
            and self.p1 + self.p2 + self.p3 == self.n
            and 2 < self.p1 <= self.p2 <= self.p3
            and isp[self.p1]
            and isp[self.p2]
            and isp[self.p3]
        )
        if not ok:
            raise AssertionError(f"invalid Goldbach triple {self}")
        return self

    def primes(self) -> tuple[int, int, int]:
        return self.p1, self.p2, self.p3


def _require_bound(table: ClassificationTable, n: int) -> None:
    if n > table.bound:
        raise ConfigError(f"{n} exceeds table bound {table.bound}")


def decompose_strong_pair(m: int, table: ClassificationTable) -> tuple[int, int] | None:
    if m % 2 or m < 6:
        raise ConfigError(f"m must be even and >= 6, got {m}")
    _require_bound(table, m)
    isp = table.odd_prime_mask
    for q in range(3, m // 2 + 1, 2):
        if isp[q] and isp[m - q]:
            return q, m - q
    return None


def decompose_weak(n: int, table: ClassificationTable) -> GoldbachTriple:
    if n % 2 == 0 or n <= 7:
        raise ConfigError(f"n must be odd and > 7, got {n}")
    _require_bound(table, n)
    isp = table.odd_prime_mask
    for p1 in range(3, n // 3 + 1, 2):
        if not isp[p1]:
            continue
        pair = decompose_strong_pair(n - p1, table)
        if pair is not None:
            return GoldbachTriple(n, p1, *pair).check(table)
    raise NoTripleFound(n)


def decompose_weak_batch(ns: np.ndarray, table: ClassificationTable) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized :func:`decompose_weak` over an array of odd ``n > 7``.

    Returns ``(p1, p2, p3)`` arrays; raises :class:`NoTripleFound` for the
    smallest ``n`` without a triple.  Unresolved numbers are carried from one
    candidate prime to the next, so the work shrinks as the search goes.
    """
    ns = np.asarray(ns, dtype=np.int64)
    if ns.size == 0:
        empty = np.empty(0, dtype=np.int64)
        return empty, empty.copy(), empty.copy()
    if np.any(ns % 2 == 0) or ns.min() <= 7:
        raise ConfigError("all n must be odd and > 7")
    _require_bound(table, int(ns.max()))
    isp = table.odd_prime_mask
    odd_primes = np.flatnonzero(isp[: int(ns.max()) // 2 + 1])

    p1 = np.zeros(ns.size, dtype=np.int64)
    p2 = np.zeros(ns.size, dtype=np.int64)
    pending = np.arange(ns.size)
    for a in odd_primes.tolist():
        pending = pending[3 * a <= ns[pending]]
        if pending.size == 0:
            break
        m = ns[pending] - a
        found = np.zeros(pending.size, dtype=np.int64)
        open_ = np.arange(pending.size)
        for q in odd_primes.tolist():
            open_ = open_[2 * q <= m[open_]]
            if open_.size == 0:
                break
            hit = isp[m[open_] - q]
            found[open_[hit]] = q
            open_ = open_[~hit]
        done = found > 0
        p1[pending[done]] = a
        p2[pending[done]] = found[done]
        pending = pending[~done]
    missing = np.flatnonzero(p1 == 0)
    if missing.size:
        raise NoTripleFound(int(ns[missing].min()))
    return p1, p2, ns - p1 - p2


def _check_batch(ns, p1, p2, p3, isp) -> None:
    ok = (
        (p1 + p2 + p3 == ns)
        & (p1 > 2)
        & (p1 <= p2)
        & (p2 <= p3)
        & isp[p1]
        & isp[p2]
        & isp[p3]
    )
    if not ok.all():
        bad = int(np.flatnonzero(~ok)[0])
        raise AssertionError(f"invalid triple for n={ns[bad]}: ({p1[bad]}, {p2[bad]}, {p3[bad]})")


def count_representations(n: int, table: ClassificationTable) -> int:
    """Number of multisets ``{p1 <= p2 <= p3}`` of odd primes with sum ``n``."""
    if n % 2 == 0 or n < 9:
        raise ConfigError(f"n must be odd and >= 9, got {n}")
    if n > REPRESENTATION_LIMIT:
        raise ComplexityError(f"count_representations is limited to n <= {REPRESENTATION_LIMIT}, got {n}")
    _require_bound(table, n)
    isp = table.odd_prime_mask
    primes = np.flatnonzero(isp[: n + 1])
    total = 0
    for a in primes[3 * primes <= n].tolist():
        b = primes[(primes >= a) & (2 * primes <= n - a)]
        total += int(isp[n - a - b].sum())
    return total


def three_odds_sum_property(sample_count: int, rng_seed: int = 0, high: int = 1 << 40) -> bool:
    """Seeded check that three odd numbers > 1 always sum to an odd number > 7."""
    if sample_count < 1:
        raise ConfigError("sample_count must be >= 1")
    rng = np.random.default_rng(rng_seed)
    a, b, c = (2 * rng.integers(1, high, size=sample_count, dtype=np.int64) + 1 for _ in range(3))
    s = a + b + c
    return bool(np.all(s % 2 == 1) and np.all(s > 7))


# range verification ---------------------------------------------------------


@dataclass(frozen=True)
class Checkpoint:
    seq: int
    last_n: int
    verified_count: int
    fingerprint: str

    def to_line(self) -> str:
        return f"{self.seq},{self.last_n},{self.verified_count},{self.fingerprint}\n"

    @classmethod
    def from_line(cls, line: str) -> "Checkpoint":
        seq, last_n, count, fp = line.strip().split(",")
        return cls(int(seq), int(last_n), int(count), fp)


def read_checkpoints(path: str | os.PathLike) -> list[Checkpoint]:
    """Parse a checkpoint file, dropping a torn final line."""
    path = Path(path)
    if not path.exists():
        return []
    text = path.read_text()
    lines = text.split("\n")
    # a write interrupted mid-line leaves no trailing newline
    complete = lines[:-1]
    records = [Checkpoint.from_line(ln) for ln in complete if ln.strip()]
    for i, rec in enumerate(records, start=1):
        if rec.seq != i:
            raise ConfigError(f"{path}: checkpoint sequence broken at line {i}")
    return records


def range_fingerprint(lo: int, hi: int, segment: int) -> str:
    cfg = {"task": "weak_goldbach", "lo": lo, "hi": hi, "segment": segment, "format": 1}
    blob = json.dumps(cfg, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


@dataclass
class VerificationReport:
    lo: int
    hi: int
    verified_count: int
    failures: list[int]
    success: bool
    config_fingerprint: str
    checkpoint_lineage: list[list[int]] = field(default_factory=list)
    min_representations: int | None = None
    max_representations: int | None = None
    wall_time_s: float = 0.0

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def without_timing(self) -> dict:
        d = self.to_dict()
        d.pop("wall_time_s")
        return d


def _odd_count(first: int, last: int) -> int:
    return 0 if last < first else (last - first) // 2 + 1


def verify_range(
    lo: int,
    hi: int,
    checkpoint_path: str | os.PathLike | None = None,
    segment: int = DEFAULT_CHECKPOINT_EVERY,
    workers: int = 1,
    table: ClassificationTable | None = None,
    memory_budget: int | None = None,
    on_checkpoint: Callable[[Checkpoint], None] | None = None,
) -> VerificationReport:
    """Find a triple for every odd ``n`` in ``[lo, hi]``.

    Work is cut into blocks of ``segment`` odd numbers.  Blocks may run on
    ``workers`` threads, but results are consumed in order and a checkpoint
    line is appended only when the contiguous verified frontier advances,
    so the file never claims a number that was not checked.  Re-running
    with the same checkpoint file resumes after its last complete record.
    """
    if lo < 9 or hi < lo:
        raise ConfigError(f"need 9 <= lo <= hi, got lo={lo}, hi={hi}")
    if segment < 1:
        raise ConfigError("segment must be >= 1")
    workers = max(1, int(workers or 1))
    t0 = time.perf_counter()
    if table is None:
        table = classical_sieve(hi, memory_budget=memory_budget)
    _require_bound(table, hi)

    fp = range_fingerprint(lo, hi, segment)
    first = lo if lo % 2 else lo + 1
    last = hi if hi % 2 else hi - 1

    history = read_checkpoints(checkpoint_path) if checkpoint_path else []
    for rec in history:
        if rec.fingerprint != fp:
            raise ConfigError(
                f"checkpoint {checkpoint_path} belongs to another run (fingerprint {rec.fingerprint}, expected {fp})"
            )
    start, verified, seq = first, 0, 0
    if history:
        tail = history[-1]
        start, verified, seq = tail.last_n + 2, tail.verified_count, tail.seq
        if (start - first) % (2 * segment) and tail.last_n != last:
            raise ConfigError(f"checkpoint {checkpoint_path} does not sit on a block boundary")
        log.info("resuming from %s at n=%d (seq %d)", checkpoint_path, start, seq)
    lineage = [[r.seq, r.last_n] for r in history]

    blocks = [(s, min(s + 2 * (segment - 1), last)) for s in range(start, last + 1, 2 * segment)]
    isp = table.odd_prime_mask

    def run_block(bounds):
        b_lo, b_hi = bounds
        ns = np.arange(b_lo, b_hi + 1, 2, dtype=np.int64)
        p1, p2, p3 = decompose_weak_batch(ns, table)
        _check_batch(ns, p1, p2, p3, isp)
        return ns.size

    def finish(failures):
        return VerificationReport(
            lo=lo,
            hi=hi,
            verified_count=verified,
            failures=failures,
            success=not failures,
            config_fingerprint=fp,
            checkpoint_lineage=lineage,
            wall_time_s=round(time.perf_counter() - t0, 6),
        )

    if checkpoint_path:
        _drop_torn_tail(Path(checkpoint_path))
    fh = open(checkpoint_path, "a") if checkpoint_path else None
    try:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            queue: deque = deque()
            todo = iter(blocks)
            for b in todo:
                queue.append((b, pool.submit(run_block, b)))
                if len(queue) >= 2 * workers:
                    break
            while queue:
                (b_lo, b_hi), fut = queue.popleft()
                try:
                    verified += fut.result()
                except NoTripleFound as exc:
                    for _, f in queue:
                        f.cancel()
                    verified += _odd_count(b_lo, exc.n - 2)
                    report = finish([exc.n])
                    _persist_counterexample(checkpoint_path, report)
                    raise CounterexampleError(report) from exc
                nxt = next(todo, None)
                if nxt is not None:
                    queue.append((nxt, pool.submit(run_block, nxt)))
                seq += 1
                rec = Checkpoint(seq, b_hi, verified, fp)
                lineage.append([rec.seq, rec.last_n])
                if fh:
                    fh.write(rec.to_line())
                    fh.flush()
                if on_checkpoint:
                    on_checkpoint(rec)
    finally:
        if fh:
            fh.close()

    expected = _odd_count(first, last)
    assert verified == expected, (verified, expected)
    return finish([])


def _drop_torn_tail(path: Path) -> None:
    if not path.exists():
        return
    data = path.read_bytes()
    keep = data.rfind(b"\n") + 1
    if keep != len(data):
        with open(path, "r+b") as fh:
            fh.truncate(keep)


def _persist_counterexample(checkpoint_path, report: VerificationReport) -> None:
    log.critical("weak Goldbach counterexample at n=%d", report.failures[0])
    if checkpoint_path is None:
        return
    base = Path(checkpoint_path)
    base.with_name(base.name + ".counterexample").write_text(f"{report.failures[0]}\n")
    base.with_name(base.name + ".report.json").write_text(report.to_json() + "\n")
