"""
Rejection sampling and the forced coin
======================================

Rejection sampling keeps only paths that never touch the boundary; the
survivors are uniform, which is exactly the law behind the exact counts.
The forced coin instead flips any toss that would leave the domain.  It
never rejects, but it is a different process.
"""

from mirrorwalk.montecarlo import chi_square_test, histogram_table, run_trials, total_variation
from mirrorwalk.walk import WalkConfig

cfg = WalkConfig(1, 1, 100)
batch = run_trials(cfg, 1_000_000, seed=0, workers=4)
print("accepted", batch.accepted, "of", batch.trials)
chi = chi_square_test(batch, cfg)
print(f"chi2 = {chi.statistic:.1f} on {chi.dof} dof, p = {chi.p_value:.3f}")

print(f"\n{'endpoint':>9} {'count':>7} {'p_hat':>8} {'exact':>8} {'z':>6}")
for e, c, p, q, z in histogram_table(batch, cfg)[::6]:
    print(f"{e:9.2f} {c:7d} {p:8.5f} {q:8.5f} {z:6.2f}")

# The batch depends only on the seed, not on how trials are split up.
again = run_trials(cfg, 1_000_000, seed=0, workers=1, block_size=9_999)
print("\nidentical across workers and blocks:", again == batch)

# %%
# Forced moves
# ------------
wide = WalkConfig(1, 1, 200)
forced = run_trials(wide, 1_000_000, seed=1, sampler="forced")
uniform = run_trials(wide, 1_000_000, seed=1)
print("total variation forced vs uniform survivors:", round(total_variation(forced, uniform), 4))
print("chi-square of forced vs survivor law, p =", chi_square_test(forced, wide).p_value)
