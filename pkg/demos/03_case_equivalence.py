"""Spawning terms only at primes (Case I) or at every candidate (Case II)
crosses exactly the same numbers, while Case II uses many more terms.

Run: python3 demos/03_case_equivalence.py
"""
from harmonic_sieve.equivalence import compare_constructions, powers_of_two_residue
from harmonic_sieve.numberline import Variant

for variant in (Variant.FULL, Variant.ODD_ONLY):
    r = compare_constructions(variant, 10**5)
    print(f"{variant.value:>8}: equivalent={r.equivalent} anchors={r.anchor_relation.value} "
          f"terms {r.left_construction['anchor_count']} vs {r.right_construction['anchor_count']}")

# dropping only the anchor-2 wave leaves the powers of two uncrossed in Case I
print("\nuncrossed without the 2-wave:", powers_of_two_residue(1000))

# ... but Case II still has the anchor-4 wave, so the two rules now disagree
r = compare_constructions(Variant.FULL, 1000, odd_primes_only=True)
print("odd-primes-only first divergence:", r.first_divergence)
