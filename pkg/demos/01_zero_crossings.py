"""Each sieve term is a sine wave anchored at a; it crosses zero on multiples of a.

Run: python3 demos/01_zero_crossings.py
"""
from harmonic_sieve.numberline import SieveTerm, Variant, crossers_of, spawn_construction, SpawnRule, zero_cross
from harmonic_sieve.plot import waveform_value

full3 = SieveTerm(3)
odd3 = SieveTerm(3, Variant.ODD_ONLY)
print(f"{full3.label():>20}  crosses", [n for n in range(2, 31) if zero_cross(full3, n)])
print(f"{odd3.label():>20}  crosses", [n for n in range(2, 31) if zero_cross(odd3, n)])

# the integer predicate agrees with the actual wave value
for n in (6, 9, 10):
    print(f"  wave at x={n}: {waveform_value(full3, float(n)):+.3f}  crossing={zero_cross(full3, n)}")

# which anchors knock out each number once the prime-anchored terms are spawned
cons = spawn_construction(Variant.FULL, SpawnRule.CASE_I, 30)
print("\nanchors:", cons.anchors.tolist())
for n in (12, 29, 30):
    print(f"  n={n:2d} crossed by", crossers_of(cons, n) or "nothing (prime)")
