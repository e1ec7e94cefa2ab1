"""
Counting surviving paths three ways
===================================

Brute force enumerates all ``2^n`` toss sequences, the lattice DP drops
absorbed states after every step, and the image sum adds and subtracts
binomial tails.  All three give the same integers.
"""

import random
from fractions import Fraction

from mirrorwalk import IntervalSet, WalkConfig
from mirrorwalk.counting import (
    brute_force_count,
    dp_count,
    exact_probability,
    image_sum_count,
    nominal_image_sum,
)
from mirrorwalk.suites import random_count_case

rng = random.Random(1)
print(f"{'n':>3} {'mode':>9} {'brute':>7} {'dp':>7} {'images':>7} {'nominal':>8}")
for _ in range(8):
    cfg, U = random_count_case(rng, 16)
    row = (
        brute_force_count(cfg, U).count,
        dp_count(cfg, U).count,
        image_sum_count(cfg, U).count,
        nominal_image_sum(cfg, U),
    )
    print(f"{cfg.n:3d} {cfg.boundary.value:>9} {row[0]:7d} {row[1]:7d} {row[2]:7d} {row[3]:8d}")

# The "nominal" column reflects through 0 and L themselves.  It agrees with the
# others only when those barriers sit on the lattice, as in this box with s = 1/4.
cfg = WalkConfig(0.5, 1, 16, 1)
U = IntervalSet.of((0.2, 0.8))
print("\nlattice-aligned box:", brute_force_count(cfg, U).count, nominal_image_sum(cfg, U))

# %%
# Exact probabilities
# -------------------
# Probabilities are ratios of survivor counts, returned as Fractions.
print("\n", exact_probability(WalkConfig(0.5, 0.5, 2), 1.2, 1.6))
big = WalkConfig(1, 1, 2000)
p = exact_probability(big, 0.5, 1.5)
print(f"n=2000: {float(p):.10f} (denominator has {len(str(p.denominator))} digits)")

# Cells that avoid lattice points partition the survivors exactly.
edges = [Fraction(0), Fraction(1, 3), Fraction(5, 7), Fraction(3, 2), Fraction(10**9)]
parts = [exact_probability(big, a, b) for a, b in zip(edges, edges[1:])]
print("sum over cells:", sum(parts))
