"""
Walks, barriers and the reflection map
======================================

A walk starts at ``x`` and moves by ``s = sqrt(t/n)`` per toss.  Positions
are kept as exact lattice offsets, so "did the walk touch 0" never depends on
floating-point rounding.
"""

from fractions import Fraction

from mirrorwalk import IntervalSet, Side, WalkConfig
from mirrorwalk.bijection import crossing_sequence, phi_box, psi_box, verify_bijection
from mirrorwalk.walk import classify, partial_sums, reflect_chain

# A half-line walk with step 1/2.
cfg = WalkConfig(0.5, 0.5, 2)
print("step:", cfg.step)
for omega in [(1, 1), (1, -1), (-1, 1)]:
    print(omega, partial_sums(omega, cfg), classify(omega, cfg))

# 0.3 - 3 * 0.1 is not zero in floats, but the lattice sees the exact hit.
hit = WalkConfig("0.3", Fraction(3, 100), 3)
print("\n0.3 - 0.1 - 0.1 - 0.1 in floats:", 0.3 - 0.1 - 0.1 - 0.1)
print("classified:", classify((-1, -1, -1), hit))

# %%
# Reflecting target sets
# ----------------------
# Two reflections compose to a translation by twice the level gap.
U = IntervalSet.of((Fraction(1, 5), Fraction(3, 5)))
print("\nU =", U.as_floats())
print("through 0:", reflect_chain(U, [0]).as_floats())
print("through 0 then -1:", reflect_chain(U, [0, -1]).as_floats())

# %%
# Block negation
# --------------
# In a box of width 1 with unit steps, the path below hits 0 at toss 1 and
# 1 at toss 3.  Negating the tosses after the first hit up to the second
# one sends the endpoint to the twice-reflected image of the target.
box = WalkConfig(0.5, 4, 4, 1)
omega = (-1, 1, 1, -1)
idx = crossing_sequence(omega, box, 2, Side.LOWER)
image = phi_box(omega, box, 2, Side.LOWER)
print("\ncrossings:", idx, "image:", image, "back:", psi_box(image, box, 2, Side.LOWER))

# %%
# Exhaustive check
# ----------------
# Every forbidden path of length 12 is paired with exactly one image path.
cfg = WalkConfig(Fraction(1, 2), Fraction(12, 16), 12, 1)
U = IntervalSet.of((Fraction(1, 5), Fraction(4, 5)))
for side in Side:
    counts = [verify_bijection(cfg, U, m, side) for m in range(1, 7)]
    print(side.value, [(r.forbidden_count, r.image_count, r.mismatch_count) for r in counts])

# With the barrier off the lattice, reflecting through 0 itself (rather than
# the first lattice point at or below 0) misses some endpoints.
off = WalkConfig(Fraction(3, 10), Fraction(8, 9), 8)
U = IntervalSet.of((Fraction(1, 4), Fraction(7, 20)))
for levels in ("lattice", "paper"):
    r = verify_bijection(off, U, 1, levels=levels)
    print(f"{levels:8s} forbidden={r.forbidden_count} image={r.image_count} mismatches={r.mismatch_count}")
