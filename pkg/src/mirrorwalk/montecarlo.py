"""Samplers for the constrained walk and empirical endpoint distributions.

Two processes are simulated:

* rejection: fair tosses, discard any path that leaves the open domain.  The
  accepted paths are uniform over survivors, which is the measure in which the
  exact counts of :mod:`mirrorwalk.counting` are probabilities.
* forced: whenever a toss would leave the domain the opposite toss is taken with
  probability one.  Paths always survive, but their law differs from the
  survivor measure; :func:`total_variation` quantifies the gap.

Randomness comes from a counter-based Philox stream keyed by the seed.  Trial
``i`` owns a fixed window of that stream, so a batch is bit-identical however it
is split into blocks or spread across workers.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy import stats

from .counting import endpoint_distribution
from .errors import DegenerateDomainError, InvalidInputError, NoSurvivorError
from .walk import WalkConfig, as_interval_set, classify

SAMPLERS = ("rejection", "forced")
BLOCK_SIZE = 1 << 15
_U64 = (1 << 64) - 1


# -- substreams -------------------------------------------------------------


def _words_per_trial(n: int) -> int:
    # whole Philox blocks (4 x 64 bits) per trial keep trial windows block aligned
    return 4 * (-(-n // 256))


def _check_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed <= _U64:
        raise InvalidInputError("seed must be an unsigned 64-bit integer")
    return seed


def substream(seed: int, trial_index: int, n: int) -> np.random.Philox:
    """Bit generator positioned at the start of ``trial_index``'s window."""
    w = _words_per_trial(n)
    counter = np.array([trial_index * w // 4, 0, 0, 0], dtype=np.uint64)
    return np.random.Philox(key=_check_seed(seed), counter=counter)


def block_tosses(seed: int, start: int, stop: int, n: int) -> np.ndarray:
    """Proposed tosses for trials ``start..stop-1`` as an ``int8`` array of +-1."""
    w = _words_per_trial(n)
    raw = substream(seed, start, n).random_raw((stop - start) * w)
    bits = np.unpackbits(raw.reshape(stop - start, w).view(np.uint8), axis=1, bitorder="little")
    return (2 * bits[:, :n].astype(np.int8) - 1).astype(np.int8)


def trial_tosses(seed: int, trial_index: int, n: int) -> Tuple[int, ...]:
    """Proposed tosses of a single trial (same bits the batch samplers use)."""
    return tuple(int(v) for v in block_tosses(seed, trial_index, trial_index + 1, n)[0])


# -- single-path samplers ---------------------------------------------------


def _check_forced_domain(cfg: WalkConfig) -> None:
    if cfg.is_box and cfg.upper_barrier - cfg.lower_barrier <= 2:
        raise DegenerateDomainError("box admits a single lattice site; both moves are blocked")


def _forced_from(cfg: WalkConfig, proposals) -> Tuple[int, ...]:
    j, out = 0, []
    for w in proposals:
        if not cfg.interior(j + w):
            w = -w
        j += w
        out.append(w)
    return tuple(out)


def sample_rejection(cfg: WalkConfig, rng: np.random.Generator) -> Optional[Tuple[int, ...]]:
    """``n`` fair tosses, or ``None`` if the path leaves the domain."""
    omega = tuple(int(v) for v in 2 * rng.integers(0, 2, size=cfg.n) - 1)
    return omega if classify(omega, cfg).allowed else None


def sample_forced(cfg: WalkConfig, rng: np.random.Generator) -> Tuple[int, ...]:
    """Fair tosses except that a toss leaving the domain is replaced by its opposite."""
    _check_forced_domain(cfg)
    return _forced_from(cfg, (int(v) for v in 2 * rng.integers(0, 2, size=cfg.n) - 1))


# -- batches ----------------------------------------------------------------


@dataclass
class TrialBatch:
    trials: int
    seed: int
    sampler: str
    accepted: int = 0
    histogram: Dict[int, int] = field(default_factory=dict)

    def positions(self, cfg: WalkConfig) -> Dict[float, int]:
        return {float(cfg.position(j)): c for j, c in sorted(self.histogram.items())}


def _run_block(cfg: WalkConfig, seed: int, start: int, stop: int, sampler: str) -> np.ndarray:
    n = cfg.n
    T = block_tosses(seed, start, stop, n)
    low, up = cfg.lower_barrier, cfg.upper_barrier
    if sampler == "rejection":
        J = np.cumsum(T, axis=1, dtype=np.int32)
        alive = (J > low).all(axis=1)
        if up is not None:
            alive &= (J < up).all(axis=1)
        ends = J[alive, -1]
    else:
        cur = np.zeros(len(T), dtype=np.int32)
        for k in range(n):
            w = T[:, k].astype(np.int32)
            prop = cur + w
            blocked = prop <= low
            if up is not None:
                blocked |= prop >= up
            cur += np.where(blocked, -w, w)
        ends = cur
    return np.bincount(ends + n, minlength=2 * n + 1)


def run_trials(
    cfg: WalkConfig,
    trials: int,
    seed: int = 0,
    sampler: str = "rejection",
    workers: int = 1,
    block_size: int = BLOCK_SIZE,
) -> TrialBatch:
    """Simulate ``trials`` independent paths and histogram the final offsets."""
    if trials < 1:
        raise InvalidInputError("trials must be >= 1")
    if sampler not in SAMPLERS:
        raise InvalidInputError(f"sampler must be one of {SAMPLERS}")
    seed = _check_seed(seed)
    if sampler == "forced":
        _check_forced_domain(cfg)
    bounds = [(s, min(trials, s + block_size)) for s in range(0, trials, block_size)]
    if workers > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda b: _run_block(cfg, seed, b[0], b[1], sampler), bounds))
    else:
        parts = [_run_block(cfg, seed, a, b, sampler) for a, b in bounds]
    counts = np.sum(parts, axis=0)
    hist = {int(i) - cfg.n: int(c) for i, c in enumerate(counts) if c}
    return TrialBatch(trials, seed, sampler, int(counts.sum()), hist)


@dataclass(frozen=True)
class Estimate:
    p_hat: float
    std_err: float
    accepted: int


def empirical_probability(cfg: WalkConfig, U, sampler: str = "rejection", trials: int = 100_000, seed: int = 0) -> Estimate:
    """Fraction of accepted paths ending in ``U`` with its binomial standard error."""
    batch = run_trials(cfg, trials, seed, sampler)
    if batch.accepted == 0:
        raise NoSurvivorError("no trial survived")
    U = as_interval_set(U)
    js = np.array(sorted(batch.histogram), dtype=np.int64)
    mask = cfg.lattice_mask(js, U)
    hits = sum(batch.histogram[int(j)] for j in js[mask])
    p = hits / batch.accepted
    return Estimate(p, math.sqrt(p * (1 - p) / batch.accepted), batch.accepted)


def histogram_table(batch: TrialBatch, cfg: WalkConfig) -> List[Tuple[float, int, float, float, float]]:
    """Rows ``(endpoint, count, p_hat, exact_p, z_score)`` against the survivor law."""
    if batch.accepted == 0:
        raise NoSurvivorError("no trial survived")
    js, probs = endpoint_distribution(cfg)
    exact_p = {int(j): float(p) for j, p in zip(js, probs)}
    rows = []
    for j in sorted(set(exact_p) | set(batch.histogram)):
        c = batch.histogram.get(j, 0)
        p = exact_p.get(j, 0.0)
        sd = math.sqrt(batch.accepted * p * (1 - p))
        z = (c - batch.accepted * p) / sd if sd > 0 else (0.0 if c == 0 else math.inf)
        rows.append((float(cfg.position(j)), c, c / batch.accepted, p, z))
    return rows


@dataclass(frozen=True)
class ChiSquareResult:
    statistic: float
    dof: int
    p_value: float
    bins: int

    def rejects(self, alpha: float) -> bool:
        return self.p_value < alpha


def chi_square_test(batch: TrialBatch, cfg: WalkConfig, min_expected: float = 5.0) -> ChiSquareResult:
    """Goodness of fit of the accepted endpoints to the exact survivor law.

    Adjacent lattice sites are pooled until each bin expects ``min_expected``
    counts; a trailing light bin joins its neighbour.
    """
    js, probs = endpoint_distribution(cfg)
    expected = np.array([float(p) for p in probs]) * batch.accepted
    observed = np.array([batch.histogram.get(int(j), 0) for j in js], dtype=float)
    if observed.sum() != batch.accepted:
        raise InvalidInputError("sample has endpoints outside the survivor support")
    obs_bins, exp_bins = [], []
    o_acc = e_acc = 0.0
    for o, e in zip(observed, expected):
        o_acc += o
        e_acc += e
        if e_acc >= min_expected:
            obs_bins.append(o_acc)
            exp_bins.append(e_acc)
            o_acc = e_acc = 0.0
    if e_acc > 0 or o_acc > 0:
        if exp_bins:
            obs_bins[-1] += o_acc
            exp_bins[-1] += e_acc
        else:
            obs_bins.append(o_acc)
            exp_bins.append(e_acc)
    obs_bins, exp_bins = np.array(obs_bins), np.array(exp_bins)
    stat = float(((obs_bins - exp_bins) ** 2 / exp_bins).sum())
    dof = len(obs_bins) - 1
    p = float(stats.chi2.sf(stat, dof)) if dof > 0 else 1.0
    return ChiSquareResult(stat, dof, p, len(obs_bins))


def total_variation(a: TrialBatch, b: TrialBatch) -> float:
    """Distance between the two empirical endpoint laws (accepted paths only)."""
    if a.accepted == 0 or b.accepted == 0:
        raise NoSurvivorError("an empty batch has no endpoint law")
    keys = set(a.histogram) | set(b.histogram)
    return 0.5 * sum(abs(a.histogram.get(j, 0) / a.accepted - b.histogram.get(j, 0) / b.accepted) for j in keys)
