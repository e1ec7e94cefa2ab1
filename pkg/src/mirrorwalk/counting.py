"""Exact path counts: brute force, lattice DP, and the method of images.

All counts are Python integers.  The image-sum counter works in lattice-offset
space: the walk moves by one offset per toss, so the first forbidden offset it
reaches below 0 is always the same integer ``j0`` and reflecting through it is
exact.  When 0 and ``L`` themselves lie on the lattice the reflection levels
coincide with ``0, -L, -2L, ...`` and the sum is the textbook image formula
(:func:`nominal_image_sum`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Tuple

import numpy as np

from .errors import CostGuardError, InvalidInputError, NoSurvivorError
from .walk import IntervalSet, WalkConfig, as_interval_set, exact

MAX_BRUTE_FORCE_N = 24
MAX_DP_N = 100_000
_ROW_CACHE_N = 20_000
_CHUNK = 1 << 16


@dataclass(frozen=True)
class PathCount:
    count: int
    n: int

    def __post_init__(self):
        if not 0 <= self.count <= (1 << self.n):
            raise InvalidInputError(f"count {self.count} outside [0, 2^{self.n}]")

    @property
    def normalized(self) -> Fraction:
        return Fraction(self.count, 1 << self.n)

    def __float__(self) -> float:
        return self.count / (1 << self.n)

    def __int__(self) -> int:
        return self.count


# -- binomial helpers -------------------------------------------------------


@lru_cache(maxsize=8)
def _binomial_row(n: int) -> Tuple[int, ...]:
    row = [1] * (n + 1)
    c = 1
    for k in range(n):
        c = c * (n - k) // (k + 1)
        row[k + 1] = c
    return tuple(row)


def span_count(n: int, jmin: int, jmax: int) -> int:
    """Number of length-n toss sequences whose final offset lies in ``[jmin, jmax]``."""
    jmin, jmax = max(jmin, -n), min(jmax, n)
    if (jmin - n) % 2:
        jmin += 1
    if jmin > jmax:
        return 0
    kmin, kmax = (n + jmin) // 2, (n + jmax) // 2
    if n <= _ROW_CACHE_N:
        row = _binomial_row(n)
        return sum(row[kmin : kmax + 1])
    c = math.comb(n, kmin)
    total = c
    for k in range(kmin, kmax):
        c = c * (n - k) // (k + 1)
        total += c
    return total


def _spans(cfg: WalkConfig, U: IntervalSet, bound: int) -> List[Tuple[int, int]]:
    out = []
    for lo, hi in U.intervals:
        jmin, jmax = cfg.open_span(lo, hi, bound)
        if jmin <= jmax:
            out.append((jmin, jmax))
    return out


# -- counters ---------------------------------------------------------------


def brute_force_count(cfg: WalkConfig, U, constrained: bool = True) -> PathCount:
    """Enumerate every toss sequence.  Oracle for the other counters."""
    if cfg.n > MAX_BRUTE_FORCE_N:
        raise CostGuardError(f"brute force refused for n={cfg.n} > {MAX_BRUTE_FORCE_N}")
    U = as_interval_set(U)
    n = cfg.n
    total = 0
    low, up = cfg.lower_barrier, cfg.upper_barrier
    shifts = np.arange(n, dtype=np.int64)
    for start in range(0, 1 << n, _CHUNK):
        codes = np.arange(start, min(1 << n, start + _CHUNK), dtype=np.int64)
        T = 2 * ((codes[:, None] >> shifts) & 1) - 1
        J = np.cumsum(T, axis=1)
        keep = cfg.lattice_mask(J[:, -1], U)
        if constrained:
            keep &= (J > low).all(axis=1)
            if up is not None:
                keep &= (J < up).all(axis=1)
        total += int(keep.sum())
    return PathCount(total, n)


def endpoint_counts(cfg: WalkConfig, constrained: bool = True) -> Tuple[np.ndarray, List[int]]:
    """Lattice DP over offsets; returns ``(offsets, counts)`` after ``n`` tosses.

    With ``constrained`` the states at or beyond a barrier are dropped after every
    step, so the result counts surviving paths by endpoint.
    """
    if cfg.n > MAX_DP_N:
        raise CostGuardError(f"DP refused for n={cfg.n} > {MAX_DP_N}")
    n = cfg.n
    if constrained:
        jlo = max(-n, cfg.lower_barrier + 1)
        jhi = n if cfg.upper_barrier is None else min(n, cfg.upper_barrier - 1)
    else:
        jlo, jhi = -n, n
    size = jhi - jlo + 1
    if size <= 0:
        return np.zeros(0, dtype=np.int64), []
    cur = np.zeros(size, dtype=object)
    cur[-jlo] = 1
    for _ in range(n):
        nxt = np.zeros(size, dtype=object)
        nxt[1:] += cur[:-1]
        nxt[:-1] += cur[1:]
        cur = nxt
    return np.arange(jlo, jhi + 1, dtype=np.int64), [int(c) for c in cur]


def dp_count(cfg: WalkConfig, U, constrained: bool = True) -> PathCount:
    U = as_interval_set(U)
    js, counts = endpoint_counts(cfg, constrained)
    if not counts:
        return PathCount(0, cfg.n)
    mask = cfg.lattice_mask(js, U)
    return PathCount(sum(c for c, keep in zip(counts, mask) if keep), cfg.n)


def unconstrained_count(cfg: WalkConfig, U) -> PathCount:
    """``|P_n(U)|``: sum of binomials over lattice endpoints in ``U``."""
    U = as_interval_set(U)
    return PathCount(sum(span_count(cfg.n, a, b) for a, b in _spans(cfg, U, cfg.n)), cfg.n)


def constrained_span_count(cfg: WalkConfig, jmin: int, jmax: int) -> int:
    """Surviving paths ending at an offset in ``[jmin, jmax]``, by lattice images."""
    n = cfg.n
    low = cfg.lower_barrier
    jmin = max(jmin, low + 1)
    if cfg.is_box:
        jmax = min(jmax, cfg.upper_barrier - 1)
    jmax = min(jmax, n)
    if jmin > jmax:
        return 0
    if not cfg.is_box:
        return span_count(n, jmin, jmax) - span_count(n, 2 * low - jmax, 2 * low - jmin)
    width = cfg.upper_barrier - low
    rmin, rmax = 2 * low - jmax, 2 * low - jmin
    # beyond |m| > M every shifted span misses [-n, n]
    M = (n + max(abs(jmin), abs(jmax), abs(rmin), abs(rmax))) // (2 * width) + 1
    total = 0
    for m in range(-M, M + 1):
        d = 2 * m * width
        total += span_count(n, jmin + d, jmax + d) - span_count(n, rmin + d, rmax + d)
    return total


def image_sum_count(cfg: WalkConfig, U) -> PathCount:
    """Surviving paths ending in ``U`` via the alternating image sum.

    Reflects through the lattice barriers, so the result equals the brute-force
    count for every ``n``.
    """
    U = as_interval_set(U).intersect(cfg.domain())
    bound = cfg.n + 2 * abs(cfg.lower_barrier) + 2
    total = sum(constrained_span_count(cfg, a, b) for a, b in _spans(cfg, U, bound))
    return PathCount(total, cfg.n)


def nominal_image_sum(cfg: WalkConfig, U) -> int:
    """The image sum with reflections through 0 and translates ``2mL +- U``.

    Agrees with :func:`image_sum_count` when 0 and ``L`` are lattice points.
    Otherwise the walk overshoots the boundary and the signed sum can be off,
    even negative, so a plain int is returned.
    """
    U = as_interval_set(U).intersect(cfg.domain())
    n = cfg.n
    if not cfg.is_box:
        return unconstrained_count(cfg, U).count - unconstrained_count(cfg, U.reflect(0)).count
    L = cfg.L
    reach = n * cfg.step + float(abs(cfg.x)) + 2 * float(L)
    reach += max((float(abs(e)) for iv in U.intervals for e in iv), default=0.0)
    M = int(math.ceil(reach / (2 * float(L)))) + 1
    total = 0
    for m in range(-M, M + 1):
        total += unconstrained_count(cfg, U.shift(2 * m * L)).count
        total -= unconstrained_count(cfg, U.reflect(m * L)).count
    return total


def _check_inside_domain(cfg: WalkConfig, a, b) -> None:
    if a < 0 or (cfg.is_box and b > cfg.L) or not a < b:
        raise InvalidInputError(f"(a, b) = ({a}, {b}) must be a non-empty subinterval of the domain")


def exact_probability(cfg: WalkConfig, a, b, method: str = "images", closed: bool = False) -> Fraction:
    """Uniform-survivor probability that ``S_n`` lies in ``(a, b)``.

    ``closed=True`` evaluates ``a <= S_n <= b`` instead.  ``method`` is
    ``"images"`` (default, fast) or ``"dp"``.
    """
    a, b = exact(a, allow_inf=True), exact(b, allow_inf=True)
    _check_inside_domain(cfg, a, b)
    n = cfg.n
    span = cfg.closed_span if closed else cfg.open_span
    bound = n + 2 * abs(cfg.lower_barrier) + 2
    jmin, jmax = span(a, b, bound)
    full_lo, full_hi = cfg.lower_barrier + 1, (cfg.upper_barrier - 1 if cfg.is_box else n)
    if method == "images":
        num = constrained_span_count(cfg, jmin, jmax)
        den = constrained_span_count(cfg, full_lo, full_hi)
    elif method == "dp":
        js, counts = endpoint_counts(cfg, constrained=True)
        num = sum(c for j, c in zip(js, counts) if jmin <= j <= jmax)
        den = sum(counts)
    else:
        raise InvalidInputError(f"unknown method {method!r}")
    if den == 0:
        raise NoSurvivorError(f"no toss sequence of length {n} survives the constraint")
    return Fraction(num, den)


def endpoint_distribution(cfg: WalkConfig) -> Tuple[np.ndarray, List[Fraction]]:
    """Exact survivor distribution of the final offset (DP)."""
    js, counts = endpoint_counts(cfg, constrained=True)
    total = sum(counts)
    if total == 0:
        raise NoSurvivorError(f"no toss sequence of length {cfg.n} survives the constraint")
    keep = [i for i, c in enumerate(counts) if c]
    return js[keep], [Fraction(counts[i], total) for i in keep]


def survivor_count(cfg: WalkConfig) -> int:
    full_hi = cfg.upper_barrier - 1 if cfg.is_box else cfg.n
    return constrained_span_count(cfg, cfg.lower_barrier + 1, full_hi)
