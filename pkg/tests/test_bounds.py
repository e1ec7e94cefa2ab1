import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mirrorwalk.bounds import (
    alpha_beta_terms,
    bernoulli_check,
    envelope_check,
    printed_bound_denominator,
    reachable_m,
    stirling_bounds,
    stirling_sweep,
)
from mirrorwalk.counting import image_sum_count
from mirrorwalk.errors import DomainError, InvalidInputError
from mirrorwalk.kernels import KernelSpec, kernel_cdf
from mirrorwalk.walk import IntervalSet, WalkConfig

BOX = WalkConfig(0.5, 1, 100, 1)


def test_stirling_examples():
    b = stirling_bounds(1)
    assert b.lower == pytest.approx(0.5 * math.log(2 * math.pi) - 1, abs=1e-15)
    assert b.upper == 0 and b.log_factorial == 0 and b.holds
    b = stirling_bounds(10)
    assert b.log_factorial == pytest.approx(math.log(3628800), rel=1e-15)
    assert b.lower < b.log_factorial < b.upper
    with pytest.raises(InvalidInputError):
        stirling_bounds(0)


@pytest.mark.parametrize("n", [2, 17, 1000, 123_457, 10**6])
def test_stirling_against_high_precision(n):
    b = stirling_bounds(n)
    with mpmath.workdps(40):
        lf = mpmath.loggamma(n + 1)
        lower = mpmath.log(mpmath.sqrt(2 * mpmath.pi)) + (n + mpmath.mpf(1) / 2) * mpmath.log(n) - n
        assert lower < lf < lower - mpmath.log(mpmath.sqrt(2 * mpmath.pi)) + 1
        assert b.log_factorial == pytest.approx(float(lf), rel=1e-14)
        assert b.lower == pytest.approx(float(lower), rel=1e-14)


def test_stirling_sweep():
    sweep = stirling_sweep(10**6)
    assert sweep.violations == 0
    # the smallest lower gap (at n = 10^6) still dwarfs the rounding allowance
    assert sweep.min_lower_gap > 1.5 * sweep.worst_rounding


def test_bernoulli_examples():
    assert bernoulli_check(1, 2)
    assert bernoulli_check(0, 7.5)
    with pytest.raises(DomainError):
        bernoulli_check(-0.5, 3)
    with pytest.raises(DomainError):
        bernoulli_check(-0.5, 2)  # 1 + rx = 0 exactly
    with pytest.raises(InvalidInputError):
        bernoulli_check(-1, 2)
    with pytest.raises(InvalidInputError):
        bernoulli_check(0.5, 0.5)


@given(st.floats(-0.9, 10), st.floats(1, 50))
def test_bernoulli_sweep(x, r):
    if 1 + r * x > 0:
        assert bernoulli_check(x, r)
    else:
        with pytest.raises(DomainError):
            bernoulli_check(x, r)


def test_alpha_zero_beyond_reach():
    cfg = BOX.with_n(50)  # reach n * s = sqrt(50) ~ 7.07
    ab = alpha_beta_terms(cfg, 0.2, 0.8, 6)
    assert ab.alpha == 0 and ab.beta == 0
    assert all(alpha_beta_terms(cfg, 0.2, 0.8, m).alpha == 0 for m in (-9, 9))
    assert any(alpha_beta_terms(cfg, 0.2, 0.8, m).alpha > 0 for m in reachable_m(cfg, 0.2, 0.8))


def test_alpha_zero_approaches_gaussian_mass():
    ab = alpha_beta_terms(BOX, 0.2, 0.8, 0, n=10_000)
    assert abs(float(ab.alpha) - kernel_cdf(KernelSpec("gauss", 1, 0.5), 0.2, 0.8)) < 0.01


@pytest.mark.parametrize("m", [-3, -1, 0, 2, 4])
def test_beta_is_alpha_with_reflected_interval(m):
    cfg = WalkConfig("0.37", "0.8", 120, "1.3")
    a, b = Fraction(1, 5), Fraction(9, 10)
    assert alpha_beta_terms(cfg, a, b, m).beta == alpha_beta_terms(cfg, -b, -a, m).alpha


@pytest.mark.parametrize("n", [10, 100, 1000])
def test_alpha_sum_at_most_one(n):
    cfg = BOX.with_n(n)
    ms = reachable_m(cfg, 0.2, 0.8)
    assert sum(alpha_beta_terms(cfg, 0.2, 0.8, m).alpha for m in ms) <= 1
    assert sum(alpha_beta_terms(cfg, 0.2, 0.8, m).beta for m in ms) <= 1


def test_image_terms_reproduce_exact_count_on_lattice():
    # 0 and L are lattice points (s = 1/10), so the alpha - beta sum is the survivor count
    cfg = WalkConfig(0.5, 1, 100, 1)
    total = sum(
        alpha_beta_terms(cfg, 0.2, 0.8, m).alpha - alpha_beta_terms(cfg, 0.2, 0.8, m).beta
        for m in reachable_m(cfg, 0.2, 0.8)
    )
    assert total == image_sum_count(cfg, IntervalSet.of((0.2, 0.8))).normalized


def test_printed_denominator():
    assert printed_bound_denominator(0, 1) == 1
    assert printed_bound_denominator(1, 1) == 0
    assert printed_bound_denominator(2.5, 1) < 0


def test_envelope_check_example():
    rep = envelope_check(BOX, 0.2, 0.8, [100, 1000, 10_000])
    assert rep.success and rep.c > 0 and math.isfinite(rep.envelope_sum)
    assert 0 < rep.C <= 1
    for r in rep.rows:
        for val in (r.alpha, r.beta):
            if val > 0:
                assert val <= rep.envelope(r.m) * (1 + 1e-12)
    # every non-positive denominator is flagged, nothing else
    for r in rep.rows:
        assert r.bound_valid == (printed_bound_denominator(2 * r.m + 0.2 - 0.5, 1.0) > 0)
    assert {(r.m, r.n) for r in rep.flagged} == {
        (r.m, r.n) for r in rep.rows if r.denominator <= 0 or r.beta_denominator <= 0
    }
    assert rep.flagged
    for n, M, diff, tail in rep.truncation:
        assert diff <= tail


def test_envelope_requires_box():
    with pytest.raises(InvalidInputError):
        envelope_check(WalkConfig(1, 1, 10), 0.2, 0.8, [10])
    with pytest.raises(InvalidInputError):
        alpha_beta_terms(WalkConfig(1, 1, 10), 0.2, 0.8, 0)
