"""Reflection maps between forbidden paths and reflected-target paths.

``phi`` negates the tosses on alternating blocks ``(i_1, i_2], (i_3, i_4], ...``
delimited by the greedy boundary-crossing indices of the original walk; ``psi``
applies the same block negation, driven by the crossing levels of the image
walk.  Two sets of image levels are supported:

``"lattice"``
    The levels the walk actually reaches: the first forbidden lattice offsets
    below 0 and above ``L``, spaced by the lattice width of the box.  The maps
    are then exact bijections for every ``n``.
``"paper"``
    The nominal levels ``0, -L, -2L, ...`` (or ``L, 2L, ...``).  These agree
    with the lattice levels only when the boundaries sit on the lattice; for
    other configurations some sequences overshoot, and
    :func:`verify_bijection` reports them as mismatches.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import CostGuardError, InvalidInputError, PreconditionError
from .walk import (
    Direction,
    IntervalSet,
    Side,
    WalkConfig,
    as_interval_set,
    as_tosses,
    offsets,
    reflect_chain,
)

MAX_EXHAUSTIVE_N = 24
_CHUNK = 1 << 16

LEVEL_MODES = ("lattice", "paper")


# -- scalar maps ------------------------------------------------------------


def _threshold(cfg: WalkConfig, level, direction: Direction) -> int:
    if direction is Direction.AT_OR_BELOW:
        return cfg.j_at_or_below(level)
    return cfg.j_at_or_above(level)


def _greedy(js: Sequence[int], thresholds: Sequence[Tuple[int, bool]]) -> Optional[Tuple[int, ...]]:
    """1-based indices i_1 < i_2 < ... with ``j_{i_r} <= thr`` (below) or ``>= thr``."""
    found, k = [], 0
    for thr, below in thresholds:
        while k < len(js):
            j = js[k]
            k += 1
            if (j <= thr) if below else (j >= thr):
                found.append(k)
                break
        else:
            return None
    return tuple(found)


def first_crossing(
    omega: Sequence[int],
    cfg: WalkConfig,
    level,
    direction: Direction = Direction.AT_OR_BELOW,
    from_index: int = 0,
) -> Optional[int]:
    """Smallest ``k > from_index`` with ``S_k <= level`` (or ``>= level``)."""
    js = offsets(omega, cfg)
    if not 0 <= from_index <= cfg.n:
        raise InvalidInputError(f"from_index must lie in 0..{cfg.n}")
    thr = _threshold(cfg, level, Direction(direction))
    below = Direction(direction) is Direction.AT_OR_BELOW
    for k in range(from_index + 1, cfg.n + 1):
        j = js[k - 1]
        if (j <= thr) if below else (j >= thr):
            return k
    return None


def _check_m(cfg: WalkConfig, m: int, side: Side) -> None:
    if not 1 <= m <= cfg.n:
        raise InvalidInputError(f"m must lie in 1..{cfg.n}")
    if not cfg.is_box and (m > 1 or side is Side.UPPER):
        raise InvalidInputError("half-line walks only have a single lower crossing (m=1, Lower)")


def domain_thresholds(cfg: WalkConfig, m: int, first_side: Side) -> List[Tuple[int, bool]]:
    """Alternating boundary thresholds ``(j, below)`` starting on ``first_side``."""
    out, side = [], first_side
    for _ in range(m):
        if side is Side.LOWER:
            out.append((cfg.lower_barrier, True))
        else:
            out.append((cfg.upper_barrier, False))
        side = side.other
    return out


def image_thresholds(cfg: WalkConfig, m: int, first_side: Side, levels: str = "lattice") -> List[Tuple[int, bool]]:
    """Crossing thresholds of the image walk (levels ``0, -L, ...`` or ``L, 2L, ...``)."""
    if levels not in LEVEL_MODES:
        raise InvalidInputError(f"levels must be one of {LEVEL_MODES}")
    if levels == "lattice":
        if first_side is Side.LOWER:
            width = (cfg.upper_barrier - cfg.lower_barrier) if cfg.is_box else 0
            return [(cfg.lower_barrier - r * width, True) for r in range(m)]
        width = cfg.upper_barrier - cfg.lower_barrier
        return [(cfg.upper_barrier + r * width, False) for r in range(m)]
    if first_side is Side.LOWER:
        return [(cfg.j_at_or_below(-r * (cfg.L or 0)), True) for r in range(m)]
    return [(cfg.j_at_or_above((r + 1) * cfg.L), False) for r in range(m)]


def reflection_levels(cfg: WalkConfig, m: int, first_side: Side) -> List:
    """Nominal reflection levels ``(0, -L, ..., -(m-1)L)`` or ``(L, 2L, ..., mL)``."""
    if first_side is Side.LOWER:
        return [-r * (cfg.L or 0) for r in range(m)]
    return [(r + 1) * cfg.L for r in range(m)]


def crossing_sequence(omega: Sequence[int], cfg: WalkConfig, m: int, first_side: Side = Side.LOWER) -> Optional[Tuple[int, ...]]:
    """Greedy alternating boundary hits ``i_1 < ... < i_m``, or ``None``.

    ``first_side=LOWER`` tests membership of the lower-first forbidden family
    (``S <= 0`` first, then ``S >= L``, ...); ``UPPER`` the mirror family.
    """
    first_side = Side(first_side)
    _check_m(cfg, m, first_side)
    return _greedy(offsets(omega, cfg), domain_thresholds(cfg, m, first_side))


def negate_blocks(omega: Sequence[int], indices: Sequence[int]) -> Tuple[int, ...]:
    """Star the tosses in ``(i_1, i_2], (i_3, i_4], ...`` (last block runs to ``n``)."""
    out = list(omega)
    bounds = list(indices) + [len(out)]
    for r in range(0, len(indices), 2):
        lo, hi = bounds[r], bounds[r + 1]
        out[lo:hi] = [-w for w in out[lo:hi]]
    return tuple(out)


def phi_half_line(omega: Sequence[int], cfg: WalkConfig) -> Tuple[int, ...]:
    seq = as_tosses(omega, cfg.n)
    i1 = first_crossing(seq, cfg, 0, Direction.AT_OR_BELOW)
    if i1 is None:
        raise PreconditionError("walk never reaches 0; phi is undefined")
    return negate_blocks(seq, (i1,))


def phi_box(omega: Sequence[int], cfg: WalkConfig, m: int, first_side: Side = Side.LOWER) -> Tuple[int, ...]:
    seq = as_tosses(omega, cfg.n)
    idx = crossing_sequence(seq, cfg, m, first_side)
    if idx is None:
        raise PreconditionError(f"no {m}-fold alternating crossing sequence")
    return negate_blocks(seq, idx)


def psi_box(
    omega: Sequence[int],
    cfg: WalkConfig,
    m: int,
    first_side: Side = Side.LOWER,
    levels: str = "lattice",
) -> Tuple[int, ...]:
    """Inverse of :func:`phi_box` on the reflected-target paths."""
    seq = as_tosses(omega, cfg.n)
    first_side = Side(first_side)
    _check_m(cfg, m, first_side)
    idx = _greedy(offsets(seq, cfg), image_thresholds(cfg, m, first_side, levels))
    if idx is None:
        raise PreconditionError("image walk lacks the required crossings; psi is undefined")
    return negate_blocks(seq, idx)


def psi_half_line(omega: Sequence[int], cfg: WalkConfig) -> Tuple[int, ...]:
    return psi_box(omega, cfg, 1, Side.LOWER)


# -- exhaustive verification ------------------------------------------------


def enumerate_tosses(n: int, start: int = 0, stop: Optional[int] = None) -> np.ndarray:
    """Rows ``start..stop-1`` of all ``2**n`` toss sequences; bit k of the row id is toss k+1."""
    stop = (1 << n) if stop is None else stop
    codes = np.arange(start, stop, dtype=np.int64)
    bits = (codes[:, None] >> np.arange(n, dtype=np.int64)) & 1
    return (2 * bits - 1).astype(np.int8)


def encode(tosses: np.ndarray) -> np.ndarray:
    n = tosses.shape[1]
    return ((tosses > 0).astype(np.int64) << np.arange(n, dtype=np.int64)).sum(axis=1)


def greedy_indices(J: np.ndarray, thresholds: Sequence[Tuple[int, bool]]):
    """Vectorised :func:`_greedy`; returns ``(indices, exists)`` per prefix length.

    ``indices[:, r]`` is the 1-based r-th crossing (``n+1`` when absent) and
    ``exists[:, r]`` says whether the first ``r+1`` crossings all exist.
    """
    rows, n = J.shape
    cols = np.arange(n)
    prev = np.zeros(rows, dtype=np.int64)
    idx = np.full((rows, len(thresholds)), n + 1, dtype=np.int64)
    ok = np.zeros((rows, len(thresholds)), dtype=bool)
    alive = np.ones(rows, dtype=bool)
    for r, (thr, below) in enumerate(thresholds):
        hit = (J <= thr) if below else (J >= thr)
        hit &= cols[None, :] >= prev[:, None]
        found = hit.any(axis=1) & alive
        first = hit.argmax(axis=1) + 1
        idx[:, r] = np.where(found, first, n + 1)
        ok[:, r] = found
        alive = found
        prev = np.where(found, first, n + 1)
    return idx, ok


def negate_blocks_array(T: np.ndarray, idx: np.ndarray) -> np.ndarray:
    rows, n = T.shape
    m = idx.shape[1]
    cols = np.arange(1, n + 1)[None, :]
    flip = np.zeros(T.shape, dtype=bool)
    bounds = np.concatenate([idx, np.full((rows, 1), n, dtype=np.int64)], axis=1)
    for r in range(0, m, 2):
        flip |= (cols > bounds[:, r : r + 1]) & (cols <= bounds[:, r + 1 : r + 2])
    return np.where(flip, -T, T).astype(np.int8)


def _image_mask(cfg: WalkConfig, U: IntervalSet, m: int, side: Side, levels: str, jn: np.ndarray) -> np.ndarray:
    if levels == "paper":
        return cfg.lattice_mask(jn, reflect_chain(U, reflection_levels(cfg, m, side)))
    # undo the chain of lattice reflections in reverse order, then test against U
    back = jn.astype(np.int64)
    for thr, _ in reversed(image_thresholds(cfg, m, side, "lattice")):
        back = 2 * thr - back
    return cfg.lattice_mask(back, U)


@dataclass
class BijectionReport:
    n: int
    m: int
    side: Side
    levels: str
    forbidden_count: int = 0
    image_count: int = 0
    phi_outside_image: int = 0
    psi_outside_forbidden: int = 0
    roundtrip_failures: int = 0
    injective: bool = True
    mismatches: List[Tuple[int, ...]] = field(default_factory=list)

    @property
    def mismatch_count(self) -> int:
        return len(self.mismatches)

    @property
    def ok(self) -> bool:
        return self.injective and not self.mismatches and self.forbidden_count == self.image_count


def verify_bijection(
    cfg: WalkConfig,
    U,
    m: int = 1,
    side: Side = Side.LOWER,
    levels: str = "lattice",
    max_n: int = MAX_EXHAUSTIVE_N,
) -> BijectionReport:
    """Enumerate all ``2**n`` paths and check phi/psi between the forbidden set and its image."""
    side = Side(side)
    _check_m(cfg, m, side)
    if levels not in LEVEL_MODES:
        raise InvalidInputError(f"levels must be one of {LEVEL_MODES}")
    if cfg.n > min(max_n, MAX_EXHAUSTIVE_N):
        raise CostGuardError(f"exhaustive enumeration refused for n={cfg.n} > {min(max_n, MAX_EXHAUSTIVE_N)}")
    U = as_interval_set(U)
    n = cfg.n
    dom = domain_thresholds(cfg, m, side)
    img = image_thresholds(cfg, m, side, levels)
    report = BijectionReport(n=n, m=m, side=side, levels=levels)
    bad_codes, phi_codes = [], []
    for start in range(0, 1 << n, _CHUNK):
        T = enumerate_tosses(n, start, min(1 << n, start + _CHUNK))
        codes = np.arange(start, start + len(T), dtype=np.int64)
        J = np.cumsum(T, axis=1, dtype=np.int64)

        idx, ok = greedy_indices(J, dom)
        in_F = ok[:, -1] & cfg.lattice_mask(J[:, -1], U)
        in_img = _image_mask(cfg, U, m, side, levels, J[:, -1])
        report.forbidden_count += int(in_F.sum())
        report.image_count += int(in_img.sum())

        # forward: F -> image
        TF = T[in_F]
        PF = negate_blocks_array(TF, idx[in_F])
        JP = np.cumsum(PF, axis=1, dtype=np.int64)
        lands = _image_mask(cfg, U, m, side, levels, JP[:, -1])
        back_idx, back_ok = greedy_indices(JP, img)
        back = negate_blocks_array(PF, back_idx)
        round_ok = back_ok[:, -1] & (back == TF).all(axis=1)
        phi_codes.append(encode(PF))
        report.phi_outside_image += int((~lands).sum())
        report.roundtrip_failures += int((~round_ok).sum())
        bad_codes.append(codes[in_F][~lands | ~round_ok])

        # backward: image -> F
        TI = T[in_img]
        JI = J[in_img]
        pidx, pok = greedy_indices(JI, img)
        QI = negate_blocks_array(TI, pidx)
        JQ = np.cumsum(QI, axis=1, dtype=np.int64)
        fidx, fok = greedy_indices(JQ, dom)
        lands_F = pok[:, -1] & fok[:, -1] & cfg.lattice_mask(JQ[:, -1], U)
        again = negate_blocks_array(QI, fidx)
        round2 = lands_F & (again == TI).all(axis=1)
        report.psi_outside_forbidden += int((~lands_F).sum())
        report.roundtrip_failures += int((lands_F & ~round2).sum())
        bad_codes.append(codes[in_img][~lands_F | ~round2])

    all_phi = np.concatenate(phi_codes) if phi_codes else np.zeros(0, dtype=np.int64)
    report.injective = len(np.unique(all_phi)) == len(all_phi)
    bad = np.unique(np.concatenate(bad_codes)) if bad_codes else np.zeros(0, dtype=np.int64)
    report.mismatches = [tuple(int(w) for w in row) for row in enumerate_tosses_codes(bad, n)]
    return report


def enumerate_tosses_codes(codes: np.ndarray, n: int) -> np.ndarray:
    codes = np.asarray(codes, dtype=np.int64)
    bits = (codes[:, None] >> np.arange(n, dtype=np.int64)) & 1
    return (2 * bits - 1).astype(np.int8)


def forbidden_family_masks(cfg: WalkConfig, U=None, m_max: Optional[int] = None, max_n: int = MAX_EXHAUSTIVE_N):
    """Boolean membership of every path in the lower-first and upper-first families.

    Returns ``(lower, upper)`` arrays of shape ``(2**n, m_max)``; column ``m-1``
    is membership for ``m`` alternating crossings, intersected with ``P_n(U)``.
    """
    if not cfg.is_box:
        raise InvalidInputError("crossing families need a box configuration")
    if cfg.n > min(max_n, MAX_EXHAUSTIVE_N):
        raise CostGuardError(f"exhaustive enumeration refused for n={cfg.n}")
    n = cfg.n
    m_max = n if m_max is None else m_max
    U = IntervalSet.real_line() if U is None else as_interval_set(U)
    T = enumerate_tosses(n)
    J = np.cumsum(T, axis=1, dtype=np.int64)
    target = cfg.lattice_mask(J[:, -1], U)[:, None]
    _, low = greedy_indices(J, domain_thresholds(cfg, m_max, Side.LOWER))
    _, up = greedy_indices(J, domain_thresholds(cfg, m_max, Side.UPPER))
    return low & target, up & target


def union_intersection_failures(cfg: WalkConfig, U=None, max_n: int = MAX_EXHAUSTIVE_N) -> List[int]:
    """Values of ``m`` in ``1..n-1`` where ``F0_m & FL_m != F0_{m+1} | FL_{m+1}``."""
    low, up = forbidden_family_masks(cfg, U, max_n=max_n)
    failures = []
    for m in range(1, cfg.n):
        lhs = low[:, m - 1] & up[:, m - 1]
        rhs = low[:, m] | up[:, m]
        if not np.array_equal(lhs, rhs):
            failures.append(m)
    return failures
