"""Compare spawning rules and check the power-of-two residue.

Two constructions are called equivalent here when they cross exactly the
same integers and leave exactly the same survivors.  Their anchor sets are
reported separately, since Case II always spawns more terms than Case I.
"""

from __future__ import annotations

import enum
import json
from dataclasses import asdict, dataclass

import numpy as np

from .engine import ClassificationTable, materialize
from .numberline import (
    ConfigError,
    SieveTerm,
    SpawnRule,
    Variant,
    crossing_mask,
    spawn_construction,
)


class AnchorRelation(str, enum.Enum):
    EQUAL = "equal"
    LEFT_SUBSET_OF_RIGHT = "left_subset_of_right"
    INCOMPARABLE = "incomparable"


@dataclass(frozen=True)
class EquivalenceReport:
    bound: int
    left_construction: dict
    right_construction: dict
    crossed_sets_equal: bool
    survivor_sets_equal: bool
    anchor_relation: AnchorRelation
    first_divergence: int | None
    counts: dict

    def __post_init__(self):
        if self.crossed_sets_equal and self.survivor_sets_equal and self.first_divergence is not None:
            raise ValueError("equal tables cannot have a divergence point")

    @property
    def equivalent(self) -> bool:
        return self.crossed_sets_equal and self.survivor_sets_equal

    def to_dict(self) -> dict:
        d = asdict(self)
        d["anchor_relation"] = self.anchor_relation.value
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _anchor_relation(left: set[int], right: set[int]) -> AnchorRelation:
    if left == right:
        return AnchorRelation.EQUAL
    if left <= right:
        return AnchorRelation.LEFT_SUBSET_OF_RIGHT
    return AnchorRelation.INCOMPARABLE


def _first_mismatch(a: np.ndarray, b: np.ndarray) -> int | None:
    diff = np.flatnonzero(a[2:] != b[2:])
    return int(diff[0]) + 2 if diff.size else None


def compare_tables(left: ClassificationTable, right: ClassificationTable) -> tuple[bool, bool, int | None]:
    """Crossed-set equality, survivor-set equality, and the smallest n where either differs."""
    if left.bound != right.bound:
        raise ValueError(f"bounds differ: {left.bound} vs {right.bound}")
    lc, rc = left.crossed_mask(), right.crossed_mask()
    ls, rs = left.survivor_mask(), right.survivor_mask()
    crossed_eq = bool(np.array_equal(lc[2:], rc[2:]))
    survivors_eq = bool(np.array_equal(ls[2:], rs[2:]))
    firsts = [d for d in (_first_mismatch(lc, rc), _first_mismatch(ls, rs)) if d is not None]
    return crossed_eq, survivors_eq, (min(firsts) if firsts else None)


def compare_constructions(
    variant: Variant,
    bound: int,
    odd_primes_only: bool = False,
    memory_budget: int | None = None,
) -> EquivalenceReport:
    """Case I construction on the left, Case II on the right."""
    if bound < 2:
        raise ConfigError(f"bound must be >= 2, got {bound}")
    left = spawn_construction(variant, SpawnRule.CASE_I, bound, odd_primes_only)
    right = spawn_construction(variant, SpawnRule.CASE_II, bound, odd_primes_only)
    lt = materialize(left, memory_budget)
    rt = materialize(right, memory_budget)
    crossed_eq, survivors_eq, first = compare_tables(lt, rt)
    return EquivalenceReport(
        bound=bound,
        left_construction=left.describe(),
        right_construction=right.describe(),
        crossed_sets_equal=crossed_eq,
        survivor_sets_equal=survivors_eq,
        anchor_relation=_anchor_relation(left.anchor_set(), right.anchor_set()),
        first_divergence=first,
        counts={"left": lt.counts(), "right": rt.counts()},
    )


def powers_of_two_residue(bound: int) -> list[int]:
    """Numbers crossed by the anchor-2 term and by no odd-anchored prime term."""
    if bound < 4:
        raise ConfigError(f"bound must be >= 4, got {bound}")
    odd_family = materialize(spawn_construction(Variant.FULL, SpawnRule.CASE_I, bound, odd_primes_only=True))
    by_two = crossing_mask(SieveTerm(2), bound)
    residue = by_two & ~odd_family.crossed_mask()
    return np.flatnonzero(residue).tolist()


def signature(term: SieveTerm, bound: int) -> bytes:
    """The term's zero-cross pattern on ``[2, bound]``, as comparable bytes."""
    return np.packbits(crossing_mask(term, bound)[2:]).tobytes()


def reduction_identity_check(bound: int, variant: Variant, anchor_limit: int = 50) -> bool:
    """Same zero-cross behaviour on ``[2, bound]`` iff same anchor.

    Only anchors whose first crossing falls inside the bound take part;
    beyond that every term is silent and the patterns say nothing.
    """
    if bound < 2:
        raise ConfigError(f"bound must be >= 2, got {bound}")
    if variant is Variant.FULL:
        anchors = range(2, min(anchor_limit, bound // 2) + 1)
    else:
        anchors = range(3, min(anchor_limit, bound // 3) + 1, 2)
    sigs = {a: signature(SieveTerm(a, variant), bound) for a in anchors}
    for a in anchors:
        for b in anchors:
            if (sigs[a] == sigs[b]) != (a == b):
                return False
    return True


def caseii_conservative(variant: Variant, bound: int) -> bool:
    """Every term spawned at a non-prime anchor crosses only already-crossed numbers."""
    case1 = spawn_construction(variant, SpawnRule.CASE_I, bound)
    crossed = materialize(case1).crossed_mask()
    extra = sorted(spawn_construction(variant, SpawnRule.CASE_II, bound).anchor_set() - case1.anchor_set())
    for c in extra:
        t = SieveTerm(c, variant)
        if not crossed[t.first_crossing :: t.period_units].all():
            return False
    return True
