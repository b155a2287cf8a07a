"""Exact integer semantics of periodic sieve terms.

A term anchored at ``a`` zero-crosses the integers where its wave meets the
number line after the anchor: every multiple ``k*a`` with ``k >= 2`` for the
full-period variant, and every odd multiple ``k*a`` with ``k >= 3`` for the
doubled-period (odd-only) variant.  No floating point is involved anywhere
in this module; the sinusoids live in :mod:`harmonic_sieve.plot`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np


class ConfigError(ValueError):
    """Invalid construction or run configuration."""


class Variant(enum.Enum):
    FULL = "full"
    ODD_ONLY = "odd_only"


class SpawnRule(enum.Enum):
    # CASE_I: terms start only at numbers nothing has crossed yet.
    # CASE_II: a term starts at every eligible number.
    CASE_I = "case1"
    CASE_II = "case2"


@dataclass(frozen=True, order=True)
class SieveTerm:
    anchor: int
    variant: Variant = field(default=Variant.FULL, compare=False)

    def __post_init__(self):
        if int(self.anchor) != self.anchor or self.anchor < 2:
            raise ConfigError(f"anchor must be an integer >= 2, got {self.anchor!r}")
        if self.variant is Variant.ODD_ONLY and (self.anchor < 3 or self.anchor % 2 == 0):
            raise ConfigError(f"odd-only terms need an odd anchor >= 3, got {self.anchor}")
        object.__setattr__(self, "anchor", int(self.anchor))

    @property
    def period_units(self) -> int:
        return self.anchor if self.variant is Variant.FULL else 2 * self.anchor

    @property
    def first_crossing(self) -> int:
        return 2 * self.anchor if self.variant is Variant.FULL else 3 * self.anchor

    def crossings(self, bound: int) -> range:
        """All integers ``<= bound`` this term zero-crosses, ascending."""
        return range(self.first_crossing, bound + 1, self.period_units)

    def label(self) -> str:
        return f"{self.anchor} + sin(1/{self.period_units})"


def zero_cross(term: SieveTerm, n: int) -> bool:
    a = term.anchor
    if n % a:
        return False
    q = n // a
    if term.variant is Variant.FULL:
        return q >= 2
    return q >= 3 and q % 2 == 1


def crossing_mask(term: SieveTerm, bound: int) -> np.ndarray:
    """Boolean mask over ``0..bound`` marking the integers ``term`` crosses."""
    mask = np.zeros(bound + 1, dtype=bool)
    mask[term.first_crossing :: term.period_units] = True
    return mask


def eligible_anchors(variant: Variant, bound: int) -> range:
    if variant is Variant.FULL:
        return range(2, bound + 1)
    return range(3, bound + 1, 2)


@dataclass(frozen=True)
class SieveConstruction:
    """A family of sieve terms over ``[2, bound]``.

    ``rule`` is ``None`` for hand-picked term sets (figures, experiments);
    constructions produced by :func:`spawn_construction` always carry their
    rule.  Anchors are kept as an int64 array so that a Case II family over
    millions of numbers does not cost millions of Python objects.
    """

    variant: Variant
    rule: SpawnRule | None
    bound: int
    anchors: np.ndarray
    odd_primes_only: bool = False

    def __post_init__(self):
        if self.bound < 2:
            raise ConfigError(f"bound must be >= 2, got {self.bound}")
        if self.odd_primes_only and self.variant is not Variant.FULL:
            raise ConfigError("odd_primes_only is only meaningful for the full variant")
        anchors = np.asarray(self.anchors, dtype=np.int64)
        if anchors.ndim != 1:
            raise ConfigError("anchors must be one-dimensional")
        if anchors.size:
            if np.any(np.diff(anchors) <= 0):
                raise ConfigError("anchors must be strictly increasing")
            if anchors[0] < 2 or anchors[-1] > self.bound:
                raise ConfigError(f"anchors must lie in [2, {self.bound}]")
            if self.variant is Variant.ODD_ONLY and (anchors[0] < 3 or np.any(anchors % 2 == 0)):
                raise ConfigError("odd-only anchors must be odd and >= 3")
        anchors.setflags(write=False)
        object.__setattr__(self, "anchors", anchors)

    @classmethod
    def custom(cls, variant: Variant, bound: int, anchors: Sequence[int]) -> "SieveConstruction":
        return cls(variant, None, bound, np.array(sorted(set(anchors)), dtype=np.int64))

    def __len__(self) -> int:
        return int(self.anchors.size)

    @property
    def terms(self) -> Iterator[SieveTerm]:
        for a in self.anchors.tolist():
            yield SieveTerm(a, self.variant)

    def anchor_set(self) -> set[int]:
        return set(self.anchors.tolist())

    def describe(self) -> dict:
        return {
            "variant": self.variant.value,
            "rule": self.rule.value if self.rule else "custom",
            "bound": self.bound,
            "odd_primes_only": self.odd_primes_only,
            "anchor_count": len(self),
        }

    def __eq__(self, other):
        if not isinstance(other, SieveConstruction):
            return NotImplemented
        return (
            self.variant is other.variant
            and self.rule is other.rule
            and self.bound == other.bound
            and self.odd_primes_only == other.odd_primes_only
            and np.array_equal(self.anchors, other.anchors)
        )

    __hash__ = None


def spawn_construction(
    variant: Variant,
    rule: SpawnRule,
    bound: int,
    odd_primes_only: bool = False,
) -> SieveConstruction:
    """Spawn terms in ascending order under ``rule``.

    Case I needs to know, at each candidate anchor, whether any earlier term
    has crossed it.  Each accepted term's crossings are written into a mask
    as it is spawned, so the question is a single lookup.  Processing is
    strictly ascending and must stay sequential.

    With ``odd_primes_only`` the anchor-2 term is removed from the finished
    family; it does not change which other anchors were spawned.
    """
    if bound < 2:
        raise ConfigError(f"bound must be >= 2, got {bound}")
    if odd_primes_only and variant is not Variant.FULL:
        raise ConfigError("odd_primes_only is only meaningful for the full variant")

    if rule is SpawnRule.CASE_II:
        anchors = np.fromiter(eligible_anchors(variant, bound), dtype=np.int64)
    else:
        crossed = np.zeros(bound + 1, dtype=bool)
        accepted = []
        for a in eligible_anchors(variant, bound):
            if crossed[a]:
                continue
            accepted.append(a)
            term = SieveTerm(a, variant)
            crossed[term.first_crossing :: term.period_units] = True
        anchors = np.array(accepted, dtype=np.int64)

    if odd_primes_only:
        anchors = anchors[anchors != 2]
    return SieveConstruction(variant, rule, bound, anchors, odd_primes_only)


def crossers_of(construction: SieveConstruction, n: int) -> list[int]:
    if not 2 <= n <= construction.bound:
        raise ValueError(f"n={n} outside [2, {construction.bound}]")
    anchors = construction.anchors
    candidates = anchors[anchors <= n // 2]
    hits = candidates[n % candidates == 0]
    if construction.variant is Variant.ODD_ONLY:
        q = n // hits
        hits = hits[(q >= 3) & (q % 2 == 1)]
    return hits.tolist()
