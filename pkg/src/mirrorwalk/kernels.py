"""Free, half-line and interval Dirichlet heat kernels.

``gauss(t, x, y)`` is the transition density of Brownian motion run for time
``t``, i.e. the kernel of ``u_t = u_yy / 2``.  The interval kernel has two
evaluations: an image sum of Gaussians (fast for small ``t``) and a sine series
(fast for large ``t``).  The Gaussian's Fourier transform puts the factor
``exp(-m^2 pi^2 t / (2 L^2))`` on mode ``m``; the series can also be evaluated
with ``exp(-m^2 pi^2 t / L^2)`` (the ``u_t = u_yy`` normalisation) via
``convention="unit"``.  :func:`poisson_check` measures which of the two matches
the image sum.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import ndtr

from .errors import DegenerateLimitError, InvalidInputError

CONVENTIONS = ("half", "unit")
DEFAULT_TOL = 1e-15
_MAX_TERMS = 10_000_000


class KernelKind(enum.Enum):
    GAUSS = "gauss"
    HALF_LINE = "half-line"
    BOX_IMAGES = "k-images"
    BOX_SERIES = "k-series"


def _check_t(t) -> float:
    t = float(t)
    if not t > 0:
        raise InvalidInputError("t must be > 0")
    return t


def _check_box(t, x, y, L):
    t = _check_t(t)
    L = float(L)
    if not L > 0:
        raise InvalidInputError("L must be > 0")
    x = float(x)
    if not 0 < x < L:
        raise InvalidInputError("x must lie strictly inside (0, L)")
    y = np.asarray(y, dtype=float)
    if np.any((y < 0) | (y > L)):
        raise InvalidInputError("y must lie in [0, L]")
    return t, x, y, L


def _decay(t: float, L: float, convention: str) -> float:
    if convention == "half":
        return math.pi**2 * t / (2 * L * L)
    if convention == "unit":
        return math.pi**2 * t / (L * L)
    raise InvalidInputError(f"convention must be one of {CONVENTIONS}")


def _scalar(v):
    return float(v) if np.ndim(v) == 0 else v


# -- truncation -------------------------------------------------------------


def images_tail_bound(t: float, L: float, M: int) -> float:
    """Upper bound on the dropped image terms ``|m| > M`` for ``x, y`` in ``[0, L]``.

    Every dropped Gaussian sits at distance at least ``(2|m| - 2) L`` from ``x``;
    the resulting series is dominated by a geometric one.
    """
    q = math.exp(-(8 * M + 4) * L * L / (2 * t))
    return 4 * math.exp(-((2 * M * L) ** 2) / (2 * t)) / (math.sqrt(2 * math.pi * t) * (1 - q))


def series_tail_bound(t: float, L: float, M: int, convention: str = "half") -> float:
    """Upper bound on ``(2/L) sum_{m > M} exp(-m^2 c)`` with the convention's decay ``c``."""
    c = _decay(t, L, convention)
    q = math.exp(-(2 * M + 3) * c)
    return (2 / L) * math.exp(-((M + 1) ** 2) * c) / (1 - q)


def images_terms(t, L, tol: float = DEFAULT_TOL) -> int:
    t, L = _check_t(t), float(L)
    M = 1
    while images_tail_bound(t, L, M) > tol:
        M += 1
    return M


def series_terms(t, L, tol: float = DEFAULT_TOL, convention: str = "half") -> int:
    t, L = _check_t(t), float(L)
    c = _decay(t, L, convention)
    # start near the answer: exp(-M^2 c) ~ tol
    M = max(1, int(math.sqrt(max(0.0, -math.log(tol * L / 2)) / c)) - 2)
    while M > 1 and series_tail_bound(t, L, M - 1, convention) <= tol:
        M -= 1
    while series_tail_bound(t, L, M, convention) > tol:
        M += 1
        if M > _MAX_TERMS:
            raise InvalidInputError("series needs too many terms; use the image form for this t")
    return M


# -- kernels ----------------------------------------------------------------


def gauss(t, x, y):
    """``exp(-(y - x)^2 / (2t)) / sqrt(2 pi t)``."""
    t = _check_t(t)
    y = np.asarray(y, dtype=float)
    return _scalar(np.exp(-((y - float(x)) ** 2) / (2 * t)) / math.sqrt(2 * math.pi * t))


def halfline_kernel(t, x, y):
    """Absorbed at 0: ``gauss(t, x, y) - gauss(t, x, -y)``."""
    if not float(x) > 0:
        raise InvalidInputError("half-line kernel needs x > 0")
    y = np.asarray(y, dtype=float)
    if np.any(y < 0):
        raise InvalidInputError("half-line kernel needs y >= 0")
    return _scalar(gauss(t, x, y) - gauss(t, x, -y))


def box_kernel_images(t, x, y, L, M: Optional[int] = None, tol: float = DEFAULT_TOL):
    """``sum_{|m| <= M} gauss(t, x, y + 2mL) - gauss(t, x, -y + 2mL)``."""
    t, x, y, L = _check_box(t, x, y, L)
    M = images_terms(t, L, tol) if M is None else int(M)
    if M < 1:
        raise InvalidInputError("M must be >= 1")
    ms = np.arange(-M, M + 1, dtype=float)
    yy = y[..., None]
    two_mL = 2 * ms * L
    norm = 1 / math.sqrt(2 * math.pi * t)
    direct = np.exp(-((yy + two_mL - x) ** 2) / (2 * t))
    mirror = np.exp(-((-yy + two_mL - x) ** 2) / (2 * t))
    return _scalar(norm * (direct - mirror).sum(axis=-1))


def box_kernel_series(
    t,
    x,
    y,
    L,
    M: Optional[int] = None,
    tol: float = DEFAULT_TOL,
    convention: str = "half",
    symmetric: bool = False,
):
    """``(1/L) sum_{|m| <= M} sin(m pi x/L) sin(m pi y/L) exp(-m^2 c)``.

    The ``m`` and ``-m`` summands coincide and ``m = 0`` vanishes, so by
    default the sum runs over ``m = 1..M`` with a factor ``2/L``;
    ``symmetric=True`` sums the two-sided form literally.
    """
    t, x, y, L = _check_box(t, x, y, L)
    c = _decay(t, L, convention)
    M = series_terms(t, L, tol, convention) if M is None else int(M)
    if M < 1:
        raise InvalidInputError("M must be >= 1")
    yy = y[..., None]
    if symmetric:
        ms = np.concatenate([np.arange(-M, 0), np.arange(1, M + 1)]).astype(float)
        terms = np.sin(ms * math.pi * x / L) * np.sin(ms * math.pi * yy / L) * np.exp(-ms * ms * c)
        return _scalar(terms.sum(axis=-1) / L)
    ms = np.arange(1, M + 1, dtype=float)
    terms = np.sin(ms * math.pi * x / L) * np.sin(ms * math.pi * yy / L) * np.exp(-ms * ms * c)
    return _scalar(2 * terms.sum(axis=-1) / L)


def poisson_check(t, x, y, L, tol: float = 1e-15, convention: str = "half") -> float:
    """``|images - series|`` with both truncations chosen from ``tol``."""
    return abs(
        float(box_kernel_images(t, x, y, L, tol=tol))
        - float(box_kernel_series(t, x, y, L, tol=tol, convention=convention))
    )


# -- integrals and limits ---------------------------------------------------


def _phi_diff(upper, lower):
    """``Phi(upper) - Phi(lower)`` without cancellation in the right tail."""
    upper, lower = np.asarray(upper, dtype=float), np.asarray(lower, dtype=float)
    right = lower >= 0
    return np.where(right, ndtr(-lower) - ndtr(-upper), ndtr(upper) - ndtr(lower))


@dataclass(frozen=True)
class KernelSpec:
    kind: KernelKind
    t: float
    x: float
    L: Optional[float] = None
    M: Optional[int] = None
    convention: str = "half"
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        object.__setattr__(self, "kind", KernelKind(self.kind))
        _check_t(self.t)
        if self.kind in (KernelKind.BOX_IMAGES, KernelKind.BOX_SERIES):
            if self.L is None:
                raise InvalidInputError("box kernels need L")
            _check_box(self.t, self.x, 0.0, self.L)
        if self.kind is KernelKind.HALF_LINE and not float(self.x) > 0:
            raise InvalidInputError("half-line kernel needs x > 0")
        if self.convention not in CONVENTIONS:
            raise InvalidInputError(f"convention must be one of {CONVENTIONS}")

    @property
    def domain(self):
        if self.kind is KernelKind.GAUSS:
            return (-math.inf, math.inf)
        if self.kind is KernelKind.HALF_LINE:
            return (0.0, math.inf)
        return (0.0, float(self.L))

    def __call__(self, y):
        return evaluate(self, y)


def evaluate(spec: KernelSpec, y):
    if spec.kind is KernelKind.GAUSS:
        return gauss(spec.t, spec.x, y)
    if spec.kind is KernelKind.HALF_LINE:
        return halfline_kernel(spec.t, spec.x, y)
    if spec.kind is KernelKind.BOX_IMAGES:
        return box_kernel_images(spec.t, spec.x, y, spec.L, spec.M, spec.tol)
    return box_kernel_series(spec.t, spec.x, y, spec.L, spec.M, spec.tol, spec.convention)


def kernel_cdf(spec: KernelSpec, a, b) -> float:
    """Closed-form ``integral_a^b kernel(y) dy``."""
    a, b = float(a), float(b)
    lo, hi = spec.domain
    if not (lo <= a < b <= hi):
        raise InvalidInputError(f"(a, b) = ({a}, {b}) must lie inside the domain {spec.domain}")
    t, x = float(spec.t), float(spec.x)
    rt = math.sqrt(t)
    if spec.kind is KernelKind.GAUSS:
        return float(_phi_diff((b - x) / rt, (a - x) / rt))
    if spec.kind is KernelKind.HALF_LINE:
        return float(_phi_diff((b - x) / rt, (a - x) / rt) - _phi_diff((-a - x) / rt, (-b - x) / rt))
    L = float(spec.L)
    if spec.kind is KernelKind.BOX_IMAGES:
        M = images_terms(t, L, spec.tol) if spec.M is None else spec.M
        ms = np.arange(-M, M + 1, dtype=float)
        direct = _phi_diff((b + 2 * ms * L - x) / rt, (a + 2 * ms * L - x) / rt)
        mirror = _phi_diff((2 * ms * L - a - x) / rt, (2 * ms * L - b - x) / rt)
        return float((direct - mirror).sum())
    c = _decay(t, L, spec.convention)
    M = series_terms(t, L, spec.tol / (1 + L), spec.convention) if spec.M is None else spec.M
    ms = np.arange(1, M + 1, dtype=float)
    integral = L / (ms * math.pi) * (np.cos(ms * math.pi * a / L) - np.cos(ms * math.pi * b / L))
    return float((2 / L) * (np.sin(ms * math.pi * x / L) * np.exp(-ms * ms * c) * integral).sum())


def limit_probability(mode: str, x, t, a, b, L=None, kind: Optional[KernelKind] = None, convention: str = "half") -> float:
    """Limit of the survivor probability of ``(a, b)``: kernel mass of ``(a, b)`` over that of the domain.

    ``mode`` is ``"half-line"`` or ``"box"``; box limits use the image form
    unless ``kind`` says otherwise.
    """
    if mode == "half-line":
        spec = KernelSpec(KernelKind.HALF_LINE, t, x)
    elif mode == "box":
        spec = KernelSpec(kind or KernelKind.BOX_IMAGES, t, x, L, convention=convention)
    else:
        raise InvalidInputError(f"mode must be 'half-line' or 'box', got {mode!r}")
    den = kernel_cdf(spec, *spec.domain)
    if not den > 1e-300:
        raise DegenerateLimitError(f"domain mass {den!r} is too small to normalise")
    return kernel_cdf(spec, a, b) / den
