import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mirrorwalk.bijection import (
    crossing_sequence,
    first_crossing,
    phi_box,
    phi_half_line,
    psi_box,
    psi_half_line,
    reflection_levels,
    union_intersection_failures,
    verify_bijection,
)
from mirrorwalk.errors import CostGuardError, InvalidInputError, PreconditionError
from mirrorwalk.walk import Direction, IntervalSet, Side, WalkConfig, classify, in_target, offsets, reflect_chain


def all_tosses(n):
    return itertools.product((-1, 1), repeat=n)


def test_first_crossing_examples():
    cfg = WalkConfig(0.5, 1, 4)
    assert first_crossing((-1, 1, 1, 1), cfg, 0, Direction.AT_OR_BELOW) == 1
    assert first_crossing((1, 1, 1, 1), cfg, 0, Direction.AT_OR_BELOW) is None
    assert first_crossing((1, 1, -1, -1), cfg, 1.5, Direction.AT_OR_ABOVE) == 2
    assert first_crossing((-1, 1, -1, 1), cfg, 0, Direction.AT_OR_BELOW, from_index=1) == 3


def test_crossing_sequence_examples():
    cfg = WalkConfig(0.5, 4, 4, 1)  # s = 1
    assert crossing_sequence((-1, 1, 1, -1), cfg, 2, Side.LOWER) == (1, 3)
    assert crossing_sequence((-1, 1, 1, -1), cfg, 1, Side.LOWER) == (1,)
    assert crossing_sequence((1, -1, -1, 1), cfg, 2, Side.UPPER) == (1, 3)
    # stays inside: no crossings at any m
    inside = WalkConfig(0.5, Fraction(4, 100), 4, 1)  # s = 0.1
    for m in range(1, 5):
        assert crossing_sequence((1, -1, 1, -1), inside, m) is None


def test_crossing_sequence_m1_is_first_crossing():
    cfg = WalkConfig(Fraction(1, 2), Fraction(6, 16), 6, 1)
    for omega in all_tosses(6):
        cs = crossing_sequence(omega, cfg, 1, Side.LOWER)
        fc = first_crossing(omega, cfg, 0, Direction.AT_OR_BELOW)
        assert (cs[0] if cs else None) == fc


def test_phi_half_line_example():
    cfg = WalkConfig(0.5, 1, 4)
    image = phi_half_line((-1, 1, 1, 1), cfg)
    assert image == (-1, -1, -1, -1)
    U = IntervalSet.of((1.2, 1.6))
    assert in_target((-1, 1, 1, 1), cfg, U)
    assert in_target(image, cfg, reflect_chain(U, [0]))


def test_phi_half_line_crossing_at_last_index_is_identity():
    cfg = WalkConfig(1, 1, 4)  # offsets 1, 0, -1, -2: first reaches 0 at toss 4
    assert phi_half_line((1, -1, -1, -1), cfg) == (1, -1, -1, -1)


def test_phi_requires_crossing():
    cfg = WalkConfig(0.5, 1, 4)
    with pytest.raises(PreconditionError):
        phi_half_line((1, 1, 1, 1), cfg)
    with pytest.raises(PreconditionError):
        phi_box((1, 1, -1, -1), WalkConfig(0.5, 0.04, 4, 1), 1)


def test_phi_box_example():
    cfg = WalkConfig(0.5, 4, 4, 1)
    image = phi_box((-1, 1, 1, -1), cfg, 2, Side.LOWER)
    assert image == (-1, -1, -1, -1)
    assert offsets(image, cfg)[-1] == -4  # S_4 = -3.5
    assert psi_box(image, cfg, 2, Side.LOWER) == (-1, 1, 1, -1)


def test_half_line_rejects_box_only_arguments():
    cfg = WalkConfig(0.5, 1, 4)
    with pytest.raises(InvalidInputError):
        crossing_sequence((1, 1, 1, 1), cfg, 2)
    with pytest.raises(InvalidInputError):
        crossing_sequence((1, 1, 1, 1), cfg, 1, Side.UPPER)
    with pytest.raises(InvalidInputError):
        crossing_sequence((1, 1, 1, 1), WalkConfig(0.5, 1, 4, 1), 5)


def test_reflection_levels():
    cfg = WalkConfig(0.5, 1, 4, 2)
    assert reflection_levels(cfg, 3, Side.LOWER) == [0, -2, -4]
    assert reflection_levels(cfg, 2, Side.UPPER) == [2, 4]


def test_verify_bijection_examples():
    rep = verify_bijection(WalkConfig(0.5, 1, 4), IntervalSet.of((1.2, 1.6)), 1)
    assert rep.forbidden_count == rep.image_count and rep.mismatch_count == 0 and rep.ok
    rep = verify_bijection(WalkConfig(0.5, 0.5, 2), IntervalSet.of((1.9, 2.1)), 1)
    assert rep.forbidden_count == rep.image_count == 0


def test_verify_bijection_box_all_m_n12():
    cfg = WalkConfig(0.5, Fraction(12, 16), 12, 1)  # s = 1/4
    U = IntervalSet.of((Fraction(1, 5), Fraction(4, 5)))
    for side in Side:
        for m in range(1, 13):
            rep = verify_bijection(cfg, U, m, side)
            assert rep.ok, (m, side, rep)
            assert rep.roundtrip_failures == rep.phi_outside_image == rep.psi_outside_forbidden == 0


def test_cost_guard():
    with pytest.raises(CostGuardError):
        verify_bijection(WalkConfig(0.5, 1, 30), IntervalSet.of((0, 1)), max_n=24)


@pytest.mark.parametrize("n", range(1, 11))
def test_scalar_maps_roundtrip_exhaustively(n):
    # a lattice-aligned box and an off-lattice one
    for cfg in (WalkConfig(Fraction(1, 2), Fraction(n, 16), n, 1), WalkConfig(Fraction(3, 10), Fraction(n, 9), n, Fraction(17, 10))):
        for omega in all_tosses(n):
            for side in Side:
                for m in range(1, n + 1):
                    if crossing_sequence(omega, cfg, m, side) is None:
                        continue
                    image = phi_box(omega, cfg, m, side)
                    assert psi_box(image, cfg, m, side) == omega


def test_half_line_maps_injective_and_inverse():
    n = 10
    cfg = WalkConfig(Fraction(7, 10), Fraction(n, 7), n)
    seen = {}
    for omega in all_tosses(n):
        if classify(omega, cfg).allowed:
            continue
        image = phi_half_line(omega, cfg)
        assert psi_half_line(image, cfg) == omega
        assert image not in seen
        seen[image] = omega


def test_reflected_endpoint_matches_image_interval_on_lattice():
    # with the barrier on a lattice point the reflected endpoint equals the mirror point exactly
    n = 8
    cfg = WalkConfig(Fraction(1, 2), Fraction(n, 16), n)
    for omega in all_tosses(n):
        if classify(omega, cfg).allowed:
            continue
        j_end = offsets(omega, cfg)[-1]
        j_img = offsets(phi_half_line(omega, cfg), cfg)[-1]
        assert cfg.position(j_end) + cfg.position(j_img) == 0


def test_nominal_levels_report_mismatches_off_lattice():
    # barrier at 0 is not on the lattice: the nominal mirror misses some endpoints
    cfg = WalkConfig(Fraction(3, 10), Fraction(8, 9), 8)  # s = 1/3
    # endpoint 0.3 mirrors to -0.3 about 0 but to -11/30 about the lattice barrier -1/30
    U = IntervalSet.of((Fraction(1, 4), Fraction(7, 20)))
    lattice = verify_bijection(cfg, U, 1, levels="lattice")
    paper = verify_bijection(cfg, U, 1, levels="paper")
    assert lattice.ok
    assert paper.mismatch_count > 0
    assert all(len(w) == 8 for w in paper.mismatches)


@settings(max_examples=40, deadline=None)
@given(
    st.integers(1, 9),
    st.fractions(min_value=Fraction(1, 20), max_value=Fraction(19, 20), max_denominator=20),
    st.fractions(min_value=Fraction(1, 10), max_value=3, max_denominator=10),
    st.fractions(min_value=0, max_value=Fraction(19, 20), max_denominator=20),
    st.fractions(min_value=Fraction(1, 20), max_value=1, max_denominator=20),
)
def test_lattice_bijection_holds_for_random_boxes(n, x, t, a, w):
    cfg = WalkConfig(x, t, n, 1)
    U = IntervalSet.of((a, min(a + w, Fraction(1))) if a + w > a else (a, 1))
    for side in Side:
        for m in range(1, n + 1):
            assert verify_bijection(cfg, U, m, side).ok


@pytest.mark.parametrize("n", range(1, 11))
def test_union_intersection_identity(n):
    for cfg in (WalkConfig(Fraction(1, 2), Fraction(n, 16), n, 1), WalkConfig(Fraction(3, 10), Fraction(n, 9), n, Fraction(17, 10))):
        assert union_intersection_failures(cfg) == []
        assert union_intersection_failures(cfg, IntervalSet.of((Fraction(1, 5), Fraction(1, 2)))) == []
