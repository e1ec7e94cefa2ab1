"""Walk configurations, toss sequences, partial sums and reflected interval sets.

Positions are always of the form ``x + j*s`` with an integer lattice offset
``j`` and step ``s = sqrt(t/n)``.  Inputs ``x``, ``t`` and ``L`` are held as
exact rationals, so ``s**2`` is rational and every comparison between a lattice
position and a rational threshold can be decided exactly by comparing squares.
Nothing that decides path membership goes through floating point.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from decimal import Decimal
from fractions import Fraction
from functools import cached_property
from numbers import Rational
from typing import Iterable, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import InvalidInputError

__all__ = [
    "Boundary",
    "Side",
    "Direction",
    "WalkConfig",
    "IntervalSet",
    "Classification",
    "as_tosses",
    "exact",
    "offsets",
    "partial_sums",
    "classify",
    "reflect",
    "reflect_chain",
    "in_target",
]

Real = Union[int, float, Fraction, Decimal, str]
Endpoint = Union[Fraction, float]  # float only for +-inf
Tosses = Tuple[int, ...]


class Boundary(enum.Enum):
    HALF_LINE = "half-line"
    BOX = "box"


class Side(enum.Enum):
    LOWER = "lower"
    UPPER = "upper"

    @property
    def other(self) -> "Side":
        return Side.UPPER if self is Side.LOWER else Side.LOWER


class Direction(enum.Enum):
    AT_OR_BELOW = "at-or-below"
    AT_OR_ABOVE = "at-or-above"


def exact(value: Real, allow_inf: bool = False) -> Endpoint:
    """Convert a user number to an exact rational.

    Floats are read through their shortest ``repr`` so that ``0.1`` means
    1/10, matching what a user typing decimals intends.  Strings accept
    anything :class:`fractions.Fraction` does (``"0.25"``, ``"1/3"``,
    ``"1e-3"``) plus ``"inf"``/``"-inf"``.
    """
    if isinstance(value, (bool, np.bool_)):
        raise InvalidInputError(f"not a number: {value!r}")
    if isinstance(value, np.integer):
        value = int(value)
    elif isinstance(value, np.floating):
        value = float(value)
    if isinstance(value, str):
        low = value.strip().lower()
        if low in ("inf", "+inf", "infinity", "+infinity"):
            value = math.inf
        elif low in ("-inf", "-infinity"):
            value = -math.inf
        else:
            try:
                return Fraction(low)
            except (ValueError, ZeroDivisionError) as exc:
                raise InvalidInputError(f"cannot parse number {value!r}") from exc
    if isinstance(value, float):
        if math.isnan(value):
            raise InvalidInputError("NaN is not a valid coordinate")
        if math.isinf(value):
            if not allow_inf:
                raise InvalidInputError("infinite value not allowed here")
            return value
        return Fraction(repr(value))
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, Decimal):
        if not value.is_finite():
            if value.is_nan() or not allow_inf:
                raise InvalidInputError(f"invalid value {value!r}")
            return math.inf if value > 0 else -math.inf
        return Fraction(value)
    raise InvalidInputError(f"not a number: {value!r}")


def _sign(v) -> int:
    return (v > 0) - (v < 0)


@dataclass(frozen=True)
class WalkConfig:
    """A coin-toss walk started at ``x`` with ``n`` tosses of size ``sqrt(t/n)``.

    ``L=None`` is the half-line ``(0, inf)``; otherwise the walk lives in the
    box ``(0, L)``.
    """

    x: Fraction
    t: Fraction
    n: int
    L: Optional[Fraction] = None

    def __post_init__(self):
        object.__setattr__(self, "x", exact(self.x))
        object.__setattr__(self, "t", exact(self.t))
        if self.L is not None:
            object.__setattr__(self, "L", exact(self.L))
        if isinstance(self.n, bool) or not isinstance(self.n, (int, np.integer)):
            raise InvalidInputError(f"n must be an integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        if self.n < 1:
            raise InvalidInputError("n must be >= 1")
        if self.t <= 0:
            raise InvalidInputError("t must be > 0")
        if self.L is None:
            if self.x <= 0:
                raise InvalidInputError("half-line walk needs x > 0")
        else:
            if self.L <= 0:
                raise InvalidInputError("box width L must be > 0")
            if not 0 < self.x < self.L:
                raise InvalidInputError("box walk needs 0 < x < L")

    @classmethod
    def half_line(cls, x: Real, t: Real, n: int) -> "WalkConfig":
        return cls(x, t, n)

    @classmethod
    def box(cls, x: Real, t: Real, n: int, L: Real) -> "WalkConfig":
        return cls(x, t, n, L)

    @property
    def boundary(self) -> Boundary:
        return Boundary.HALF_LINE if self.L is None else Boundary.BOX

    @property
    def is_box(self) -> bool:
        return self.L is not None

    def with_n(self, n: int) -> "WalkConfig":
        return replace(self, n=n)

    @cached_property
    def step_squared(self) -> Fraction:
        return self.t / self.n

    @cached_property
    def step(self) -> float:
        return math.sqrt(self.step_squared)

    def position(self, j):
        """Float position of lattice offset(s) ``j`` (scalar or array)."""
        if np.ndim(j):
            return float(self.x) + np.asarray(j) * self.step
        return float(self.x) + j * self.step

    # -- exact lattice comparisons ------------------------------------------

    def compare(self, j: int, c: Endpoint) -> int:
        """Sign of ``(x + j*s) - c``, decided exactly."""
        if isinstance(c, float):
            if c == math.inf:
                return -1
            if c == -math.inf:
                return 1
            c = exact(c)
        d = c - self.x
        if j == 0:
            return _sign(-d)
        if j > 0:
            if d <= 0:
                return 1
            return _sign(j * j * self.step_squared - d * d)
        if d >= 0:
            return -1
        return -_sign(j * j * self.step_squared - d * d)

    def _estimate(self, c: Fraction) -> int:
        return math.floor(float(c - self.x) / self.step)

    def j_at_or_below(self, c: Endpoint) -> int:
        """Largest ``j`` with ``x + j*s <= c`` (``c`` finite)."""
        c = exact(c)
        j = self._estimate(c)
        while self.compare(j, c) > 0:
            j -= 1
        while self.compare(j + 1, c) <= 0:
            j += 1
        return j

    def j_at_or_above(self, c: Endpoint) -> int:
        """Smallest ``j`` with ``x + j*s >= c`` (``c`` finite)."""
        c = exact(c)
        j = self._estimate(c) + 1
        while self.compare(j, c) < 0:
            j += 1
        while self.compare(j - 1, c) >= 0:
            j -= 1
        return j

    def open_span(self, lo: Endpoint, hi: Endpoint, bound: Optional[int] = None) -> Tuple[int, int]:
        """Inclusive range ``(jmin, jmax)`` of offsets with ``lo < x + j*s < hi``.

        Clipped to ``[-bound, bound]`` (default ``n``); empty when ``jmin > jmax``.
        """
        bound = self.n if bound is None else bound
        jmin = -bound if lo == -math.inf else max(-bound, self.j_at_or_below(lo) + 1)
        jmax = bound if hi == math.inf else min(bound, self.j_at_or_above(hi) - 1)
        return jmin, jmax

    def closed_span(self, lo: Endpoint, hi: Endpoint, bound: Optional[int] = None) -> Tuple[int, int]:
        """Like :meth:`open_span` but for ``lo <= x + j*s <= hi``."""
        bound = self.n if bound is None else bound
        jmin = -bound if lo == -math.inf else max(-bound, self.j_at_or_above(lo))
        jmax = bound if hi == math.inf else min(bound, self.j_at_or_below(hi))
        return jmin, jmax

    @cached_property
    def lower_barrier(self) -> int:
        """First forbidden offset below the start: the largest ``j`` with ``x + j*s <= 0``."""
        return self.j_at_or_below(0)

    @cached_property
    def upper_barrier(self) -> Optional[int]:
        """Smallest ``j`` with ``x + j*s >= L`` (box only)."""
        if self.L is None:
            return None
        return self.j_at_or_above(self.L)

    @property
    def barriers_on_lattice(self) -> bool:
        """True when the walk can land exactly on 0 (and on L in a box)."""
        if self.compare(self.lower_barrier, 0) != 0:
            return False
        return self.L is None or self.compare(self.upper_barrier, self.L) == 0

    def interior(self, j: int) -> bool:
        if j <= self.lower_barrier:
            return False
        return self.upper_barrier is None or j < self.upper_barrier

    def domain(self) -> "IntervalSet":
        return IntervalSet.of((0, math.inf if self.L is None else self.L))

    def lattice_in(self, j: int, U: "IntervalSet") -> bool:
        """Exact test of ``x + j*s`` in the open set ``U``."""
        return any(self.compare(j, lo) > 0 and self.compare(j, hi) < 0 for lo, hi in U.intervals)

    def lattice_mask(self, js: np.ndarray, U: "IntervalSet") -> np.ndarray:
        """Vectorised :meth:`lattice_in` over an integer array of offsets."""
        js = np.asarray(js)
        bound = int(np.abs(js).max()) if js.size else 0
        mask = np.zeros(js.shape, dtype=bool)
        for lo, hi in U.intervals:
            jmin, jmax = self.open_span(lo, hi, bound)
            if jmin <= jmax:
                mask |= (js >= jmin) & (js <= jmax)
        return mask


@dataclass(frozen=True)
class IntervalSet:
    """Finite union of disjoint open intervals, sorted by left endpoint."""

    intervals: Tuple[Tuple[Endpoint, Endpoint], ...] = ()

    def __post_init__(self):
        items = []
        for pair in self.intervals:
            if len(pair) != 2:
                raise InvalidInputError(f"interval must be a (lo, hi) pair, got {pair!r}")
            lo, hi = exact(pair[0], allow_inf=True), exact(pair[1], allow_inf=True)
            if not lo < hi:
                raise InvalidInputError(f"empty or inverted interval ({lo}, {hi})")
            items.append((lo, hi))
        items.sort(key=lambda p: p[0])
        merged = []
        for lo, hi in items:
            # open intervals that merely touch stay separate: the shared point is excluded
            if merged and lo < merged[-1][1]:
                plo, phi = merged[-1]
                merged[-1] = (plo, max(phi, hi))
            else:
                merged.append((lo, hi))
        object.__setattr__(self, "intervals", tuple(merged))

    @classmethod
    def of(cls, *pairs) -> "IntervalSet":
        return cls(tuple(pairs))

    @classmethod
    def empty(cls) -> "IntervalSet":
        return cls(())

    @classmethod
    def real_line(cls) -> "IntervalSet":
        return cls(((-math.inf, math.inf),))

    def __bool__(self) -> bool:
        return bool(self.intervals)

    def __iter__(self):
        return iter(self.intervals)

    def __len__(self) -> int:
        return len(self.intervals)

    def __contains__(self, y) -> bool:
        return any(lo < y < hi for lo, hi in self.intervals)

    @property
    def measure(self):
        return sum((hi - lo for lo, hi in self.intervals), Fraction(0))

    def reflect(self, level: Real) -> "IntervalSet":
        lam2 = 2 * exact(level)
        return IntervalSet(tuple((lam2 - hi, lam2 - lo) for lo, hi in self.intervals))

    def shift(self, delta: Real) -> "IntervalSet":
        d = exact(delta)
        return IntervalSet(tuple((lo + d, hi + d) for lo, hi in self.intervals))

    def intersect(self, other: "IntervalSet") -> "IntervalSet":
        out = []
        for a, b in self.intervals:
            for c, d in other.intervals:
                lo, hi = max(a, c), min(b, d)
                if lo < hi:
                    out.append((lo, hi))
        return IntervalSet(tuple(out))

    def as_floats(self):
        return [(float(lo), float(hi)) for lo, hi in self.intervals]

    def __repr__(self) -> str:
        body = " U ".join(f"({lo}, {hi})" for lo, hi in self.intervals) or "{}"
        return f"IntervalSet[{body}]"


def as_interval_set(U) -> IntervalSet:
    """Accept an IntervalSet, a single ``(a, b)`` pair, or a list of pairs."""
    if isinstance(U, IntervalSet):
        return U
    U = tuple(U)
    if len(U) == 2 and not isinstance(U[0], (tuple, list)):
        return IntervalSet.of(U)
    return IntervalSet(U)


@dataclass(frozen=True)
class Classification:
    """``index``/``side`` are ``None`` for an allowed path."""

    index: Optional[int] = None
    side: Optional[Side] = None

    @property
    def allowed(self) -> bool:
        return self.index is None

    @property
    def forbidden(self) -> bool:
        return self.index is not None


def as_tosses(omega: Iterable[int], n: Optional[int] = None) -> Tosses:
    seq = tuple(int(w) for w in omega)
    if any(w not in (-1, 1) for w in seq):
        raise InvalidInputError("tosses must be +1 (heads) or -1 (tails)")
    if n is not None and len(seq) != n:
        raise InvalidInputError(f"expected {n} tosses, got {len(seq)}")
    return seq


def offsets(omega: Sequence[int], cfg: WalkConfig) -> Tuple[int, ...]:
    """Lattice offsets ``j_k = omega_1 + ... + omega_k`` for ``k = 1..n``."""
    seq = as_tosses(omega, cfg.n)
    out, j = [], 0
    for w in seq:
        j += w
        out.append(j)
    return tuple(out)


def partial_sums(omega: Sequence[int], cfg: WalkConfig) -> Tuple[float, ...]:
    x, s = float(cfg.x), cfg.step
    return tuple(x + j * s for j in offsets(omega, cfg))


def classify(omega: Sequence[int], cfg: WalkConfig) -> Classification:
    low, up = cfg.lower_barrier, cfg.upper_barrier
    for k, j in enumerate(offsets(omega, cfg), start=1):
        if j <= low:
            return Classification(k, Side.LOWER)
        if up is not None and j >= up:
            return Classification(k, Side.UPPER)
    return Classification()


def reflect(U: IntervalSet, level: Real) -> IntervalSet:
    """``{y : 2*level - y in U}``."""
    return as_interval_set(U).reflect(level)


def reflect_chain(U: IntervalSet, levels: Sequence[Real]) -> IntervalSet:
    """Reflect through ``levels[0]``, then ``levels[1]``, and so on."""
    if len(levels) == 0:
        raise InvalidInputError("reflect_chain needs at least one level")
    out = as_interval_set(U)
    for lam in levels:
        out = out.reflect(lam)
    return out


def in_target(omega: Sequence[int], cfg: WalkConfig, U) -> bool:
    j = offsets(omega, cfg)[-1]
    return cfg.lattice_in(j, as_interval_set(U))
