"""
Finite-n probabilities against their limits
===========================================

Exact survivor probabilities approach the heat-kernel ratio, but not
monotonically.  Two lattice effects of size ``O(s) = O(n^-1/2)`` come and go
with ``n``:

* a target endpoint that lands on a reachable lattice site is excluded from
  an open interval (or fully included in a closed one);
* a barrier that falls between lattice sites is felt at the nearest site
  beyond it, so the effective box is slightly wider.
"""

from mirrorwalk.counting import exact_probability
from mirrorwalk.kernels import limit_probability
from mirrorwalk.walk import WalkConfig

ns = (100, 400, 1600, 6400)

lim = limit_probability("half-line", 1, 1, 0.5, 1.5)
print(f"half-line limit {lim:.10f}")
print(f"{'n':>5} {'open':>9} {'closed':>9} {'midpoint':>9} {'endpoint on lattice':>20}")
for n in ns:
    cfg = WalkConfig(1, 1, n)
    o = float(exact_probability(cfg, 0.5, 1.5))
    c = float(exact_probability(cfg, 0.5, 1.5, closed=True))
    j = cfg.j_at_or_below(0.5)
    on = cfg.compare(j, 0.5) == 0 and (j - n) % 2 == 0
    print(f"{n:5d} {abs(o - lim):9.5f} {abs(c - lim):9.5f} {abs((o + c) / 2 - lim):9.6f} {str(on):>20}")

# Averaging the open and closed values gives endpoints half weight, and the
# error then falls like 1/n.  The box below has both barriers off the lattice
# for most n, and its error wanders with the barrier overshoot.
lim = limit_probability("box", 0.5, 0.1, 0.2, 0.4, L=1)
print(f"\nbox limit {lim:.10f}")
for n in range(100, 6401, 700):
    cfg = WalkConfig(0.5, 0.1, n, 1)
    over = float(-cfg.position(cfg.lower_barrier)) / cfg.step
    err = abs(float(exact_probability(cfg, 0.2, 0.4)) - lim)
    print(f"{n:5d} error {err:.5f}  overshoot below 0 = {over:.2f} steps")
