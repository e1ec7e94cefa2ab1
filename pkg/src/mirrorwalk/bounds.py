"""Stirling and Bernoulli inequalities and the image-term envelope.

``alpha(m, n)`` and ``beta(m, n)`` are the normalised unconstrained counts of
the image intervals ``(2mL + a, 2mL + b)`` and ``(2mL - b, 2mL - a)``.  Passing
``n -> infinity`` inside the image sum needs an ``n``-independent summable
majorant for these.  :func:`envelope_check` fits a Gaussian one,
``C exp(-c m^2)``, from exact terms.  It also evaluates the rational majorant
``1 / ((1 - d^2/(2t))^2 (1 - d^2/t))`` with ``d = 2mL + a - x`` and flags
every ``m`` where its denominator is not positive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import gammaln

from .counting import unconstrained_count
from .errors import DomainError, InvalidInputError
from .walk import IntervalSet, WalkConfig, exact

_LOG_SQRT_2PI = 0.5 * math.log(2 * math.pi)
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class StirlingBounds:
    lower: float
    upper: float
    log_factorial: float

    @property
    def holds(self) -> bool:
        return self.lower <= self.log_factorial <= self.upper


def stirling_bounds(n: int) -> StirlingBounds:
    """Natural logs of ``sqrt(2 pi) n^(n+1/2) e^-n``, ``n!`` and ``e n^(n+1/2) e^-n``."""
    if n < 1:
        raise InvalidInputError("n must be >= 1")
    core = (n + 0.5) * math.log(n) - n
    return StirlingBounds(_LOG_SQRT_2PI + core, 1.0 + core, math.lgamma(n + 1))


@dataclass(frozen=True)
class StirlingSweep:
    n_max: int
    violations: int
    min_lower_gap: float
    min_upper_gap: float
    worst_rounding: float


def stirling_sweep(n_max: int) -> StirlingSweep:
    """Check both bounds for every ``n`` in ``1..n_max`` in log space.

    A bound counts as violated only if the gap is below a generous
    floating-point error estimate (``16 eps |ln n!|``), so the sweep can never
    pass on rounding luck.
    """
    n = np.arange(1, n_max + 1, dtype=float)
    core = (n + 0.5) * np.log(n) - n
    actual = gammaln(n + 1)
    lower_gap = actual - (_LOG_SQRT_2PI + core)
    upper_gap = (1.0 + core) - actual
    slack = 16 * _EPS * np.maximum(np.abs(actual), 1.0)
    # n = 1: upper bound is attained (1! = e * 1 * e^-1), so allow an exact tie
    bad = (lower_gap <= slack) | (upper_gap < -slack)
    return StirlingSweep(
        n_max,
        int(bad.sum()),
        float(lower_gap.min()),
        float(upper_gap.min()),
        float(slack.max()),
    )


def bernoulli_check(x: float, r: float) -> bool:
    """Whether ``1/(1+x)^r <= 1/(1+rx)``; raises :class:`DomainError` when ``1 + rx <= 0``."""
    x, r = float(x), float(r)
    if not x > -1:
        raise InvalidInputError("need x > -1")
    if not r >= 1:
        raise InvalidInputError("need r >= 1")
    if 1 + r * x <= 0:
        raise DomainError(f"1 + r*x = {1 + r * x!r} <= 0: right-hand side undefined or negative")
    # compare logs: r*log1p(x) >= log1p(r*x), allowing a few ulps of rounding
    lhs = r * math.log1p(x)
    rhs = math.log1p(r * x)
    return lhs >= rhs - 8 * _EPS * max(1.0, abs(lhs), abs(rhs))


@dataclass(frozen=True)
class AlphaBeta:
    alpha: Fraction
    beta: Fraction


def _image_intervals(cfg: WalkConfig, a, b, m: int) -> Tuple[IntervalSet, IntervalSet]:
    L = cfg.L
    a, b = exact(a), exact(b)
    return IntervalSet.of((2 * m * L + a, 2 * m * L + b)), IntervalSet.of((2 * m * L - b, 2 * m * L - a))


def alpha_beta_terms(cfg: WalkConfig, a, b, m: int, n: Optional[int] = None) -> AlphaBeta:
    """Exact ``|P_n((2mL+a, 2mL+b))| / 2^n`` and ``|P_n((2mL-b, 2mL-a))| / 2^n``."""
    if not cfg.is_box:
        raise InvalidInputError("alpha/beta terms are defined for box walks")
    cfg = cfg if n is None else cfg.with_n(n)
    ua, ub = _image_intervals(cfg, a, b, m)
    return AlphaBeta(unconstrained_count(cfg, ua).normalized, unconstrained_count(cfg, ub).normalized)


def _log_term(count_fraction: Fraction) -> float:
    # math.log on big ints avoids float underflow of tiny probabilities
    if count_fraction == 0:
        return -math.inf
    return math.log(count_fraction.numerator) - math.log(count_fraction.denominator)


def printed_bound_denominator(d: float, t: float) -> float:
    """``(1 - d^2/(2t))^2 (1 - d^2/t)``."""
    return (1 - d * d / (2 * t)) ** 2 * (1 - d * d / t)


def reachable_m(cfg: WalkConfig, a, b) -> range:
    """Every ``m`` whose alpha or beta interval can contain a lattice endpoint."""
    L, x = float(cfg.L), float(cfg.x)
    reach = cfg.n * cfg.step + abs(x) + abs(float(a)) + abs(float(b))
    M = int(math.ceil(reach / (2 * L))) + 1
    return range(-M, M + 1)


@dataclass(frozen=True)
class EnvelopeRow:
    m: int
    n: int
    alpha: float
    beta: float
    log_alpha: float
    log_beta: float
    paper_bound: float
    denominator: float
    bound_valid: bool
    beta_denominator: float
    beta_bound_valid: bool


@dataclass
class EnvelopeReport:
    C: float
    c: float
    envelope_sum: float
    success: bool
    rows: List[EnvelopeRow] = field(default_factory=list)
    truncation: List[Tuple[int, int, float, float]] = field(default_factory=list)

    @property
    def flagged(self) -> List[EnvelopeRow]:
        return [r for r in self.rows if not r.bound_valid or not r.beta_bound_valid]

    def envelope(self, m) -> float:
        return self.C * math.exp(-self.c * m * m)

    def envelope_tail(self, M: int) -> float:
        """``sum_{|m| > M} C exp(-c m^2)``."""
        return 2 * _gauss_sum(self.C, self.c, M + 1)


def _gauss_sum(C: float, c: float, start: int) -> float:
    total, m = 0.0, start
    while True:
        term = C * math.exp(-c * m * m)
        total += term
        if term < 1e-300 or (m > start and term < 1e-18 * total):
            return total
        m += 1


def envelope_check(cfg: WalkConfig, a, b, n_list: Sequence[int], truncation_M: int = 2) -> EnvelopeReport:
    """Fit ``alpha, beta <= C exp(-c m^2)`` uniformly over ``n_list``.

    ``C`` is the largest term observed; ``c`` the largest rate consistent with
    every nonzero term at ``m != 0``.  The fit succeeds when ``c > 0``.  For each
    ``n`` the report also compares the image sum truncated at ``|m| <= M`` to the
    full sum and records the envelope tail that must dominate the difference.
    """
    if not cfg.is_box:
        raise InvalidInputError("envelope check is defined for box walks")
    t, x, L = float(cfg.t), float(cfg.x), float(cfg.L)
    rows: List[EnvelopeRow] = []
    per_n = {}
    for n in n_list:
        c_n = cfg.with_n(n)
        terms = {}
        for m in reachable_m(c_n, a, b):
            ab = alpha_beta_terms(c_n, a, b, m)
            terms[m] = ab
            d_a = 2 * m * L + float(a) - x
            d_b = 2 * m * L - float(b) - x
            den = printed_bound_denominator(d_a, t)
            den_b = printed_bound_denominator(d_b, t)
            rows.append(
                EnvelopeRow(
                    m=m,
                    n=n,
                    alpha=float(ab.alpha),
                    beta=float(ab.beta),
                    log_alpha=_log_term(ab.alpha),
                    log_beta=_log_term(ab.beta),
                    paper_bound=1 / den if den != 0 else math.inf,
                    denominator=den,
                    bound_valid=den > 0,
                    beta_denominator=den_b,
                    beta_bound_valid=den_b > 0,
                )
            )
        per_n[n] = terms

    logs = {}
    for r in rows:
        best = max(r.log_alpha, r.log_beta)
        logs[r.m] = max(logs.get(r.m, -math.inf), best)
    log_C = max(logs.values())
    rates = [(log_C - lg) / (m * m) for m, lg in logs.items() if m != 0 and lg > -math.inf]
    c = min(rates) if rates else math.inf
    C = math.exp(log_C)
    success = c > 0 and math.isfinite(log_C)
    env_sum = _gauss_sum(C, c, 1) * 2 + C if success and math.isfinite(c) else (C if success else math.inf)

    report = EnvelopeReport(C=C, c=c, envelope_sum=env_sum, success=success, rows=rows)
    for n, terms in per_n.items():
        full = sum((ab.alpha - ab.beta for ab in terms.values()), Fraction(0))
        trunc = sum((ab.alpha - ab.beta for m, ab in terms.items() if abs(m) <= truncation_M), Fraction(0))
        tail = 2 * report.envelope_tail(truncation_M) if success and math.isfinite(c) else 0.0
        report.truncation.append((n, truncation_M, float(abs(full - trunc)), tail))
    return report
