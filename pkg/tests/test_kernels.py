import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from mirrorwalk.errors import DegenerateLimitError, InvalidInputError
from mirrorwalk.kernels import (
    KernelKind,
    KernelSpec,
    box_kernel_images,
    box_kernel_series,
    evaluate,
    gauss,
    halfline_kernel,
    images_tail_bound,
    images_terms,
    kernel_cdf,
    limit_probability,
    poisson_check,
    series_terms,
)

GRID = [i / 10 for i in range(1, 10)]
T_GRID = (0.02, 0.1, 0.5, 2.0)


def mp_box(t, x, y, L):
    # 40-digit image sum: independent of the float implementation
    with mpmath.workdps(40):
        t, x, y, L = (mpmath.mpf(v) for v in (t, x, y, L))
        g = lambda u: mpmath.exp(-((u - x) ** 2) / (2 * t)) / mpmath.sqrt(2 * mpmath.pi * t)
        return float(mpmath.nsum(lambda m: g(y + 2 * m * L) - g(-y + 2 * m * L), [-mpmath.inf, mpmath.inf]))


def test_gauss_examples():
    assert gauss(1, 0, 0) == pytest.approx(1 / math.sqrt(2 * math.pi), rel=1e-15)
    with mpmath.workdps(30):
        oracle = float(mpmath.npdf(2))
    assert gauss(1, 0, 2) == pytest.approx(oracle, rel=1e-14)
    assert gauss(1, 0, 2) == pytest.approx(0.0539909665, abs=1e-10)
    with pytest.raises(InvalidInputError):
        gauss(0, 0, 0)


@given(st.floats(0.01, 10), st.floats(-5, 5), st.floats(-5, 5))
def test_gauss_symmetric(t, x, y):
    assert gauss(t, x, y) == gauss(t, y, x)


def test_halfline_examples():
    assert halfline_kernel(1, 1, 1) == pytest.approx(0.3449513139, abs=1e-10)
    for t in (0.1, 1, 7):
        for x in (0.2, 1, 3):
            assert halfline_kernel(t, x, 0) == 0
    ys = np.linspace(0.01, 6, 200)
    assert np.all(halfline_kernel(0.7, 0.4, ys) > 0)
    with pytest.raises(InvalidInputError):
        halfline_kernel(1, 1, -0.1)


def test_box_images_vanish_at_zero_for_every_M():
    for M in (1, 2, 5, 9):
        assert box_kernel_images(0.3, 0.4, 0.0, 1.0, M) == 0


def test_box_forms_match_high_precision_oracle():
    for t, x, y in [(0.1, 0.3, 0.7), (0.02, 0.5, 0.5), (2.0, 0.2, 0.9), (0.5, 0.85, 0.15)]:
        ref = mp_box(t, x, y, 1)
        assert box_kernel_images(t, x, y, 1) == pytest.approx(ref, rel=1e-12, abs=1e-15)
        assert box_kernel_series(t, x, y, 1) == pytest.approx(ref, rel=1e-12, abs=1e-15)


def test_images_independent_of_M_past_truncation():
    M0 = images_terms(0.5, 1.0)
    base = box_kernel_images(0.5, 0.3, 0.6, 1.0, M0)
    for M in (M0 + 1, M0 + 5, 40):
        assert abs(box_kernel_images(0.5, 0.3, 0.6, 1.0, M) - base) <= images_tail_bound(0.5, 1.0, M0)


def test_series_examples():
    assert abs(box_kernel_series(0.3, 0.4, 1.0, 1.0)) < 1e-15
    assert box_kernel_series(0.3, 0.2, 0.7, 1.0) == box_kernel_series(0.3, 0.7, 0.2, 1.0)
    for conv, c in (("half", math.pi**2 * 5 / 2), ("unit", math.pi**2 * 5)):
        one = 2 * math.sin(math.pi * 0.3) * math.sin(math.pi * 0.6) * math.exp(-c)
        assert box_kernel_series(5, 0.3, 0.6, 1, convention=conv) == pytest.approx(one, rel=1e-8)


def test_symmetric_series_equals_one_sided():
    ys = np.linspace(0, 1.3, 27)
    a = box_kernel_series(0.07, 0.4, ys, 1.3, M=60, symmetric=True)
    b = box_kernel_series(0.07, 0.4, ys, 1.3, M=60)
    assert np.allclose(a, b, rtol=1e-13, atol=1e-15)


def test_invalid_domains():
    with pytest.raises(InvalidInputError):
        box_kernel_images(0.1, 1.2, 0.5, 1)
    with pytest.raises(InvalidInputError):
        box_kernel_series(0.1, 0.5, 1.5, 1)
    with pytest.raises(InvalidInputError):
        box_kernel_series(0.1, 0.5, 0.5, 1, convention="bogus")
    with pytest.raises(InvalidInputError):
        KernelSpec("k-images", 1, 0.5)


def test_poisson_examples():
    assert poisson_check(0.1, 0.3, 0.7, 1) <= 1e-12
    assert poisson_check(0.01, 0.5, 0.5, 1) <= 1e-10
    assert images_terms(0.01, 1, 1e-15) < 3 < 20 < series_terms(0.01, 1, 1e-15)
    assert poisson_check(0.4, 0.3, 0.0, 1) == 0


def test_poisson_grid_half_convention_matches():
    worst = max(poisson_check(t, x, y, 1) for t in T_GRID for x in GRID for y in GRID)
    assert worst <= 1e-10
    # the exponent without the 1/2 is the u_t = u_yy kernel and does not match
    unit = max(poisson_check(t, x, y, 1, convention="unit") for t in T_GRID for x in GRID for y in GRID)
    assert unit > 1e-2


def test_boundary_vanishing_and_positivity_on_grid():
    for t in T_GRID:
        for x in GRID:
            for form in (box_kernel_images, box_kernel_series):
                assert abs(form(t, x, 0.0, 1.0)) < 1e-14
                assert abs(form(t, x, 1.0, 1.0)) < 1e-14
                assert np.all(np.asarray(form(t, x, GRID, 1.0)) > 0)


def test_kernel_symmetry_on_grid():
    for t in T_GRID:
        K = np.array([box_kernel_images(t, x, GRID, 1.0) for x in GRID])
        assert np.allclose(K, K.T, rtol=1e-12, atol=1e-15)


def heat_residual(conv, diffusivity, h=1e-3):
    # central differences; error is O(h^2), so very small t (sharp peaks) is left out
    K = lambda t, y: box_kernel_series(t, 0.35, y, 1.0, convention=conv)
    worst, scale = 0.0, 0.0
    for t in (0.1, 0.2, 0.6):
        for y in (0.2, 0.45, 0.7):
            k_t = (K(t + h, y) - K(t - h, y)) / (2 * h)
            k_yy = (K(t, y + h) - 2 * K(t, y) + K(t, y - h)) / h**2
            worst = max(worst, abs(k_t - diffusivity * k_yy))
            scale = max(scale, abs(k_t))
    return worst / scale


@pytest.mark.parametrize("conv, diffusivity, wrong", [("half", 0.5, 1.0), ("unit", 1.0, 0.5)])
def test_heat_equation_finite_differences(conv, diffusivity, wrong):
    assert heat_residual(conv, diffusivity) <= 1e-4
    assert heat_residual(conv, wrong) > 0.1


def test_kernel_cdf_examples():
    spec = KernelSpec("half-line", 1, 1)
    assert kernel_cdf(spec, 0, math.inf) == pytest.approx(math.erf(1 / math.sqrt(2)), abs=1e-15)
    quad_val, _ = quad(lambda y: halfline_kernel(1, 1, y), 0, np.inf, epsabs=1e-12)
    assert kernel_cdf(spec, 0, math.inf) == pytest.approx(quad_val, abs=1e-10)
    assert kernel_cdf(KernelSpec("gauss", 2.5, 0.3), -math.inf, math.inf) == 1
    with pytest.raises(InvalidInputError):
        kernel_cdf(spec, -1, 1)


def test_series_total_mass_formula():
    t, x, L = 0.1, 0.3, 1.0
    odd = np.arange(1, 400, 2)
    formula = 4 / math.pi * np.sum(np.sin(odd * math.pi * x / L) * np.exp(-odd**2 * math.pi**2 * t / (2 * L**2)) / odd)
    spec = KernelSpec("k-series", t, x, L)
    assert kernel_cdf(spec, 0, L) == pytest.approx(formula, abs=1e-12)
    q, _ = quad(lambda y: box_kernel_series(t, x, y, L), 0, L, epsabs=1e-12)
    assert kernel_cdf(spec, 0, L) == pytest.approx(q, abs=1e-10)


@pytest.mark.parametrize("kind", ["gauss", "half-line", "k-images", "k-series"])
def test_kernel_cdf_matches_quadrature(kind):
    spec = KernelSpec(kind, 0.3, 0.45, None if kind in ("gauss", "half-line") else 1.1)
    for a, b in [(0.05, 0.3), (0.2, 0.9), (0.5, 1.05)]:
        q, _ = quad(lambda y: float(evaluate(spec, y)), a, b, epsabs=1e-13)
        assert kernel_cdf(spec, a, b) == pytest.approx(q, abs=1e-10)


def test_kernel_cdf_far_tail_is_not_cancelled():
    # both CDF values round to 1; the difference must still carry relative accuracy
    spec = KernelSpec("gauss", 1, 0)
    with mpmath.workdps(30):
        oracle = float(mpmath.ncdf(-9) - mpmath.ncdf(-10))
    assert kernel_cdf(spec, 9, 10) == pytest.approx(oracle, rel=1e-12)


def test_limit_probability_examples():
    assert limit_probability("half-line", 1, 1, 0, math.inf) == 1
    assert limit_probability("box", 0.4, 0.2, 0, 1, L=1) == pytest.approx(1, abs=1e-15)
    assert limit_probability("box", 0.5, 0.3, 0, 0.5, L=1) == pytest.approx(0.5, abs=1e-14)
    p = limit_probability("half-line", 1, 1, 0.5, 1.5)
    num, _ = quad(lambda y: halfline_kernel(1, 1, y), 0.5, 1.5, epsabs=1e-13)
    den, _ = quad(lambda y: halfline_kernel(1, 1, y), 0, np.inf, epsabs=1e-13)
    assert p == pytest.approx(num / den, abs=1e-10)


def test_limit_probability_box_forms_agree():
    a = limit_probability("box", 0.5, 0.1, 0.2, 0.4, L=1)
    b = limit_probability("box", 0.5, 0.1, 0.2, 0.4, L=1, kind=KernelKind.BOX_SERIES)
    assert a == pytest.approx(b, abs=1e-12)


def test_degenerate_limit():
    with pytest.raises(DegenerateLimitError):
        limit_probability("box", 0.5, 200, 0.2, 0.4, L=1)
    with pytest.raises(InvalidInputError):
        limit_probability("strip", 0.5, 1, 0.2, 0.4)


@settings(max_examples=60, deadline=None)
@given(st.floats(0.005, 3), st.floats(0.02, 0.98), st.floats(0.0, 1.0))
def test_images_and_series_agree(t, x, y):
    assert box_kernel_images(t, x, y, 1.0) == pytest.approx(box_kernel_series(t, x, y, 1.0), abs=1e-12)
