"""Materialize sieve constructions into bit-packed classification tables."""

from __future__ import annotations

import enum
import math
import os
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator

import numpy as np

from .numberline import ConfigError, SieveConstruction, SpawnRule, Variant

DEFAULT_SEGMENT_LENGTH = 1 << 20
DEFAULT_MEMORY_BUDGET = 2 << 30
MEMORY_BUDGET_ENV = "HSV_MEMORY_BUDGET"


class CapacityError(RuntimeError):
    pass


def memory_budget(override: int | None = None) -> int:
    if override is not None:
        return int(override)
    env = os.environ.get(MEMORY_BUDGET_ENV)
    if env:
        try:
            return int(env)
        except ValueError:
            raise ConfigError(f"{MEMORY_BUDGET_ENV} must be an integer byte count, got {env!r}")
    return DEFAULT_MEMORY_BUDGET


def check_capacity(required: int, budget: int | None = None, what: str = "table") -> None:
    limit = memory_budget(budget)
    if required > limit:
        raise CapacityError(
            f"{what} needs about {required} bytes, over the memory budget of {limit} bytes "
            f"(raise it with --memory-budget or {MEMORY_BUDGET_ENV})"
        )


class Verdict(enum.Enum):
    PRIME = "prime"  # not crossed, and decoded by the construction
    COMPOSITE = "composite"  # crossed by at least one term
    UNTOUCHED = "untouched"  # not crossed, outside the decoding scope


@dataclass(frozen=True)
class Provenance:
    kind: str  # "classical" or "harmonic"
    variant: Variant = Variant.FULL
    rule: SpawnRule | None = None
    odd_primes_only: bool = False

    @classmethod
    def classical(cls) -> "Provenance":
        return cls("classical")

    @property
    def survivors_are_all_primes(self) -> bool:
        return self.variant is Variant.FULL and not self.odd_primes_only

    def describe(self) -> dict:
        if self.kind == "classical":
            return {"kind": "classical"}
        return {
            "kind": "harmonic",
            "variant": self.variant.value,
            "rule": self.rule.value if self.rule else "custom",
            "odd_primes_only": self.odd_primes_only,
        }


def odd_index_count(bound: int) -> int:
    # odd index i stands for n = 2*i + 1, so n = 1 .. bound
    return (bound + 1) // 2


def even_index_count(bound: int) -> int:
    # even index i stands for n = 2*i, so n = 0 .. bound
    return bound // 2 + 1


def _pack(bits: np.ndarray) -> np.ndarray:
    packed = np.packbits(bits, bitorder="little")
    pad = (-packed.size) % 8
    if pad:
        packed = np.concatenate([packed, np.zeros(pad, dtype=np.uint8)])
    return packed


def _unpack(packed: np.ndarray, count: int) -> np.ndarray:
    return np.unpackbits(packed, count=count, bitorder="little").astype(bool)


class ClassificationTable:
    """Per-integer crossing flags over ``[2, bound]``.

    Odd and even numbers are packed into separate little-endian bitsets,
    one bit per number, bit set meaning "crossed".  The odd bitset is the
    payload of the HSV1 cache format; its bit for ``n = 1`` is always set
    (1 is not prime) and padding bits past ``bound`` are always clear.
    """

    def __init__(self, bound: int, odd_bits: np.ndarray, even_bits: np.ndarray, provenance: Provenance):
        if bound < 2:
            raise ConfigError(f"bound must be >= 2, got {bound}")
        self.bound = int(bound)
        self.odd_bits = odd_bits
        self.even_bits = even_bits
        self.provenance = provenance
        self.odd_bits.setflags(write=False)
        self.even_bits.setflags(write=False)

    @classmethod
    def from_crossed_mask(cls, crossed: np.ndarray, provenance: Provenance) -> "ClassificationTable":
        """Build from a boolean mask over ``0..bound``; entries 0 and 1 are ignored."""
        bound = crossed.size - 1
        odd = crossed[1::2].copy()
        even = crossed[0::2].copy()
        odd[0] = True
        even[0] = True
        return cls(bound, _pack(odd), _pack(even), provenance)

    def odd_crossed(self) -> np.ndarray:
        """Unpacked crossed flags for n = 1, 3, 5, ... <= bound."""
        return _unpack(self.odd_bits, odd_index_count(self.bound))

    def crossed_mask(self) -> np.ndarray:
        """Unpacked crossed flags over ``0..bound`` (0 and 1 flagged)."""
        mask = np.empty(self.bound + 1, dtype=bool)
        mask[1::2] = self.odd_crossed()
        mask[0::2] = _unpack(self.even_bits, even_index_count(self.bound))
        mask[:2] = True
        return mask

    def scope_mask(self) -> np.ndarray:
        """Numbers the construction can decode as prime."""
        scope = np.zeros(self.bound + 1, dtype=bool)
        p = self.provenance
        if p.kind == "harmonic" and (p.variant is Variant.ODD_ONLY or p.odd_primes_only):
            scope[3::2] = True
        else:
            scope[2:] = True
        return scope

    def survivor_mask(self) -> np.ndarray:
        return self.scope_mask() & ~self.crossed_mask()

    @cached_property
    def odd_prime_mask(self) -> np.ndarray:
        """Read-only lookup over ``0..bound``: True exactly at odd primes."""
        mask = np.zeros(self.bound + 1, dtype=bool)
        mask[1::2] = ~self.odd_crossed()
        mask.setflags(write=False)
        return mask

    def is_crossed(self, n: int) -> bool:
        self._check(n)
        bits, i = (self.odd_bits, n // 2) if n % 2 else (self.even_bits, n // 2)
        return bool((bits[i >> 3] >> (i & 7)) & 1)

    def verdict(self, n: int) -> Verdict:
        if self.is_crossed(n):
            return Verdict.COMPOSITE
        return Verdict.PRIME if self.scope_mask()[n] else Verdict.UNTOUCHED

    def crossed_set(self) -> set[int]:
        m = self.crossed_mask()
        m[:2] = False
        return set(np.flatnonzero(m).tolist())

    def survivor_set(self) -> set[int]:
        return set(np.flatnonzero(self.survivor_mask()).tolist())

    def uncrossed_set(self) -> set[int]:
        m = ~self.crossed_mask()
        return set(np.flatnonzero(m).tolist())

    def counts(self) -> dict:
        crossed = self.crossed_mask()[2:]
        survivors = self.survivor_mask()[2:]
        total = self.bound - 1
        return {
            "crossed": int(crossed.sum()),
            "survivors": int(survivors.sum()),
            "untouched": int(total - crossed.sum() - survivors.sum()),
        }

    def _check(self, n: int) -> None:
        if not 2 <= n <= self.bound:
            raise ValueError(f"n={n} outside [2, {self.bound}]")

    def __eq__(self, other):
        if not isinstance(other, ClassificationTable):
            return NotImplemented
        return (
            self.bound == other.bound
            and np.array_equal(self.odd_bits, other.odd_bits)
            and np.array_equal(self.even_bits, other.even_bits)
        )

    __hash__ = None

    def __repr__(self):
        return f"ClassificationTable(bound={self.bound}, provenance={self.provenance.describe()})"


@dataclass(frozen=True)
class SegmentPlan:
    segment_length: int = DEFAULT_SEGMENT_LENGTH
    base_primes_bound: int = 0

    def __post_init__(self):
        n = self.segment_length
        if n < 64 or n & (n - 1):
            raise ConfigError(f"segment_length must be a power of two >= 64, got {n}")

    @classmethod
    def for_bound(cls, bound: int, segment_length: int = DEFAULT_SEGMENT_LENGTH) -> "SegmentPlan":
        return cls(segment_length, math.isqrt(bound) + (0 if math.isqrt(bound) ** 2 == bound else 1))


def _small_odd_primes(limit: int) -> np.ndarray:
    if limit < 3:
        return np.array([], dtype=np.int64)
    is_p = np.ones(limit + 1, dtype=bool)
    is_p[:2] = False
    is_p[4::2] = False
    for p in range(3, math.isqrt(limit) + 1, 2):
        if is_p[p]:
            is_p[p * p :: 2 * p] = False
    is_p[2] = False
    return np.flatnonzero(is_p).astype(np.int64)


def classical_sieve(
    bound: int,
    segment_length: int = DEFAULT_SEGMENT_LENGTH,
    memory_budget: int | None = None,
) -> ClassificationTable:
    """Segmented odd-only sieve of Eratosthenes.

    Each segment covers ``segment_length`` consecutive odd numbers and is
    sieved by the odd base primes up to ``ceil(sqrt(bound))``.  Output bits
    do not depend on ``segment_length``.
    """
    if bound < 2:
        raise ConfigError(f"bound must be >= 2, got {bound}")
    plan = SegmentPlan.for_bound(bound, segment_length)
    n_odd = odd_index_count(bound)
    check_capacity(n_odd // 4 + plan.segment_length + 64, memory_budget, f"classical sieve to {bound}")

    base = _small_odd_primes(plan.base_primes_bound)
    odd = np.zeros(n_odd, dtype=bool)
    for lo_idx in range(0, n_odd, plan.segment_length):
        hi_idx = min(lo_idx + plan.segment_length, n_odd)
        seg = odd[lo_idx:hi_idx]  # view: n = 2*(lo_idx + j) + 1
        lo_n = 2 * lo_idx + 1
        hi_n = 2 * (hi_idx - 1) + 1
        for p in base.tolist():
            sq = p * p
            if sq > hi_n:
                break
            start = max(sq, -(-lo_n // p) * p)
            if start % 2 == 0:
                start += p
            seg[(start - lo_n) // 2 :: p] = True
    odd[0] = True

    even = np.ones(even_index_count(bound), dtype=bool)
    even[1] = False  # n = 2
    return ClassificationTable(bound, _pack(odd), _pack(even), Provenance.classical())


def materialize(construction: SieveConstruction, memory_budget: int | None = None) -> ClassificationTable:
    """Mark every integer that some term of ``construction`` zero-crosses.

    Each term is applied by striding over its own crossings, so the cost is
    that of a sieve rather than of evaluating every term at every number.
    """
    b = construction.bound
    check_capacity(b + 1 + construction.anchors.nbytes, memory_budget, f"harmonic table to {b}")
    crossed = np.zeros(b + 1, dtype=bool)
    step_factor = 1 if construction.variant is Variant.FULL else 2
    start_factor = 2 if construction.variant is Variant.FULL else 3
    for a in construction.anchors.tolist():
        crossed[start_factor * a :: step_factor * a] = True
    prov = Provenance("harmonic", construction.variant, construction.rule, construction.odd_primes_only)
    return ClassificationTable.from_crossed_mask(crossed, prov)


def _require_prime_survivors(table: ClassificationTable) -> None:
    if not table.provenance.survivors_are_all_primes:
        raise ValueError(
            "table survivors are not the full prime set "
            f"(provenance {table.provenance.describe()}); use a classical or full-variant table"
        )


def primes_iter(table: ClassificationTable, chunk: int = 1 << 16) -> Iterator[int]:
    """Yield the primes of ``table`` in ascending order, one packed chunk at a time."""
    _require_prime_survivors(table)
    yield 2
    n_odd = odd_index_count(table.bound)
    # chunk must be a multiple of 8 so each slice starts on a byte boundary
    chunk -= chunk % 8
    for lo in range(0, n_odd, chunk):
        count = min(chunk, n_odd - lo)
        bits = np.unpackbits(table.odd_bits[lo // 8 : (lo + count + 7) // 8], count=count, bitorder="little")
        for i in np.flatnonzero(bits == 0).tolist():
            yield 2 * (lo + i) + 1


def prime_count(table: ClassificationTable, x: int | None = None) -> int:
    _require_prime_survivors(table)
    if x is None:
        x = table.bound
    if not 2 <= x <= table.bound:
        raise ValueError(f"x={x} outside [2, {table.bound}]")
    crossed = table.odd_crossed()[: odd_index_count(x)]
    return 1 + int(crossed.size - crossed.sum())
