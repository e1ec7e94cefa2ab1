"""Self-checks run by ``mirrorwalk verify``.

Each suite returns a list of :class:`Check` rows.  Sizes are kept small enough
for a CI run; the full-size versions live in the test suite.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List

import numpy as np

from . import bijection, bounds, counting, kernels, montecarlo
from .errors import DomainError
from .walk import IntervalSet, Side, WalkConfig


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    passed: bool
    detail: str = ""


def lattice_aligned_configs(n: int) -> List[WalkConfig]:
    """Box and half-line walks whose boundaries are lattice points (step 1/4)."""
    t = Fraction(n, 16)
    return [
        WalkConfig(Fraction(1, 2), t, n),
        WalkConfig(Fraction(3, 4), t, n),
        WalkConfig(Fraction(1, 2), t, n, 1),
        WalkConfig(Fraction(1, 4), t, n, Fraction(3, 2)),
    ]


def bijection_suite(n_max: int = 12) -> List[Check]:
    checks = []
    for n in range(1, n_max + 1):
        failures, nominal_mismatch, bad_union = [], 0, []
        for cfg in lattice_aligned_configs(n):
            targets = [IntervalSet.of((Fraction(1, 8), Fraction(3, 8)))]
            if cfg.is_box:
                targets.append(IntervalSet.of((Fraction(1, 8), cfg.L - Fraction(1, 8))))
                sides, ms = (Side.LOWER, Side.UPPER), range(1, n + 1)
            else:
                targets.append(IntervalSet.of((Fraction(1, 8), 3)))
                sides, ms = (Side.LOWER,), (1,)
            for U in targets:
                for side in sides:
                    for m in ms:
                        rep = bijection.verify_bijection(cfg, U, m, side)
                        if not rep.ok:
                            failures.append((cfg, U, m, side))
                        nominal_mismatch += bijection.verify_bijection(cfg, U, m, side, levels="paper").mismatch_count
            if cfg.is_box:
                bad_union += bijection.union_intersection_failures(cfg)
        checks.append(Check("bijection", f"phi/psi bijective n={n}", not failures, f"{len(failures)} failing cases"))
        checks.append(Check("bijection", f"nominal levels n={n}", nominal_mismatch == 0, f"{nominal_mismatch} mismatches"))
        checks.append(Check("bijection", f"union/intersection identity n={n}", not bad_union, f"failing m: {bad_union}"))
    return checks


def counting_suite(n_max: int = 12, trials: int = 50, seed: int = 0) -> List[Check]:
    rng = random.Random(seed)
    bad = 0
    for _ in range(trials):
        cfg, U = random_count_case(rng, min(n_max, 16))
        bf = counting.brute_force_count(cfg, U).count
        if not bf == counting.dp_count(cfg, U).count == counting.image_sum_count(cfg, U).count:
            bad += 1
    return [Check("counting", "brute = dp = images", bad == 0, f"{bad}/{trials} disagreements")]


def random_count_case(rng: random.Random, n_max: int):
    n = rng.randint(1, n_max)
    t = Fraction(rng.randint(1, 60), 20)
    if rng.random() < 0.5:
        L = Fraction(rng.randint(2, 60), 20)
        x = Fraction(rng.randint(1, int(L * 20) - 1), 20)
        hi = L
    else:
        L = None
        x = Fraction(rng.randint(1, 60), 20)
        hi = x + 3
    a = Fraction(rng.randint(0, 999), 1000) * hi
    b = a + Fraction(rng.randint(1, 1000), 1000) * (hi - a)
    return WalkConfig(x, t, n, L), IntervalSet.of((a, b))


def kernels_suite(tol: float = 1e-10) -> List[Check]:
    grid = [i / 10 for i in range(1, 10)]
    worst = {c: 0.0 for c in kernels.CONVENTIONS}
    for conv in kernels.CONVENTIONS:
        for t in (0.02, 0.1, 0.5, 2.0):
            for x in grid:
                worst[conv] = max(worst[conv], max(kernels.poisson_check(t, x, y, 1.0, convention=conv) for y in grid))
    matching = [c for c, w in worst.items() if w <= tol]
    edge = max(
        abs(kernels.box_kernel_images(t, x, y, 1.0)) for t in (0.02, 0.5) for x in grid for y in (0.0, 1.0)
    )
    return [
        Check("kernels", "poisson summation (half)", worst["half"] <= tol, f"max discrepancy {worst['half']:.3e}"),
        Check("kernels", "printed exponent (unit) differs", worst["unit"] > tol, f"max discrepancy {worst['unit']:.3e}"),
        Check("kernels", "matching convention found", bool(matching), f"matching: {matching}"),
        Check("kernels", "boundary vanishing", edge <= tol, f"max |K| at boundary {edge:.3e}"),
    ]


def bounds_suite() -> List[Check]:
    sweep = bounds.stirling_sweep(10**6)
    rng = np.random.default_rng(0)
    bern_ok, domain_ok = True, True
    for x, r in zip(rng.uniform(-0.99, 10, 2000), rng.uniform(1, 50, 2000)):
        try:
            bern_ok &= bounds.bernoulli_check(x, r)
            domain_ok &= 1 + r * x > 0
        except DomainError:
            domain_ok &= 1 + r * x <= 0
    env = bounds.envelope_check(WalkConfig(0.5, 1, 100, 1), 0.2, 0.8, [100, 1000, 10000])
    flagged = sum(not r.bound_valid for r in env.rows)
    return [
        Check("bounds", "stirling n<=1e6", sweep.violations == 0, f"min lower gap {sweep.min_lower_gap:.3e}"),
        Check("bounds", "bernoulli on guarded domain", bool(bern_ok and domain_ok), "2000 random points"),
        Check("bounds", "gaussian envelope fit", env.success, f"C={env.C:.4g} c={env.c:.4g} sum={env.envelope_sum:.4g}"),
        Check("bounds", "printed-bound rows flagged", True, f"{flagged} rows with non-positive denominator"),
    ]


def montecarlo_suite(seed: int = 0, trials: int = 200_000) -> List[Check]:
    cfg = WalkConfig(1, 1, 50)
    batch = montecarlo.run_trials(cfg, trials, seed)
    again = montecarlo.run_trials(cfg, trials, seed, workers=4, block_size=10_000)
    chi = montecarlo.chi_square_test(batch, cfg)
    return [
        Check("montecarlo", "chi-square vs exact (alpha=0.001)", not chi.rejects(0.001), f"p={chi.p_value:.4f}"),
        Check("montecarlo", "deterministic across workers", batch.histogram == again.histogram, f"seed={seed}"),
    ]


SUITES: Dict[str, Callable[..., List[Check]]] = {
    "bijection": bijection_suite,
    "counting": counting_suite,
    "kernels": kernels_suite,
    "bounds": bounds_suite,
    "montecarlo": montecarlo_suite,
}


def run_suites(names, n_max: int = 12, seed: int = 0, tol: float = 1e-10) -> List[Check]:
    out = []
    for name in names:
        if name == "bijection":
            out += bijection_suite(n_max)
        elif name == "counting":
            out += counting_suite(n_max, seed=seed)
        elif name == "kernels":
            out += kernels_suite(tol)
        elif name == "bounds":
            out += bounds_suite()
        elif name == "montecarlo":
            out += montecarlo_suite(seed)
        else:
            raise KeyError(name)
    return out
