"""Periodic-function ("harmonic") sieve toolkit with exact integer zero-crossings."""

from .engine import (
    CapacityError,
    ClassificationTable,
    SegmentPlan,
    Verdict,
    classical_sieve,
    materialize,
    prime_count,
    primes_iter,
)
from .equivalence import (
    AnchorRelation,
    EquivalenceReport,
    compare_constructions,
    powers_of_two_residue,
    reduction_identity_check,
)
from .goldbach import (
    CounterexampleError,
    GoldbachTriple,
    NoTripleFound,
    VerificationReport,
    count_representations,
    decompose_strong_pair,
    decompose_weak,
    three_odds_sum_property,
    verify_range,
)
from .numberline import (
    ConfigError,
    SieveConstruction,
    SieveTerm,
    SpawnRule,
    Variant,
    crossers_of,
    spawn_construction,
    zero_cross,
)

__version__ = "0.1.0"
