"""
Stirling, Bernoulli and the image-term envelope
===============================================

Swapping the limit in ``n`` with the infinite image sum needs every image
term to sit under one summable function of ``m``.  We fit a Gaussian
envelope from exact terms and also evaluate the rational majorant, whose
denominator turns negative for large ``|m|``.
"""

from mirrorwalk.bounds import bernoulli_check, envelope_check, stirling_bounds, stirling_sweep
from mirrorwalk.errors import DomainError
from mirrorwalk.walk import WalkConfig

for n in (1, 10, 1000):
    b = stirling_bounds(n)
    print(f"n={n}: {b.lower:.6f} <= ln n! = {b.log_factorial:.6f} <= {b.upper:.6f}")
sweep = stirling_sweep(10**6)
print("violations up to 1e6:", sweep.violations, " smallest lower gap:", f"{sweep.min_lower_gap:.2e}")

print("\nbernoulli(1, 2):", bernoulli_check(1, 2))
try:
    bernoulli_check(-0.5, 3)
except DomainError as exc:
    print("bernoulli(-0.5, 3):", exc)

# %%
# Envelope for alpha_{m,n}
# ------------------------
rep = envelope_check(WalkConfig(0.5, 1, 100, 1), 0.2, 0.8, [100, 1000, 10_000])
print(f"\nC = {rep.C:.4f}, c = {rep.c:.4f}, sum over m = {rep.envelope_sum:.4f}")
print(f"{'m':>3} {'n':>6} {'alpha':>10} {'envelope':>10} {'denominator':>12}")
for r in rep.rows:
    if r.n == 10_000 and abs(r.m) <= 3:
        print(f"{r.m:3d} {r.n:6d} {r.alpha:10.3e} {rep.envelope(r.m):10.3e} {r.denominator:12.3e}")
print("rows with a non-positive printed denominator:", len(rep.flagged))
for n, M, diff, tail in rep.truncation:
    print(f"n={n}: |full - truncated at |m|<={M}| = {diff:.2e} <= tail {tail:.2e}")
