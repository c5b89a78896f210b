import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from brouncker import cfcore
from brouncker.cfcore import CfSpec, constant, convergents, eval_backward, eval_forward, equivalence_transform
from brouncker.errors import DivisionByZeroDenominator, NonPositiveElement, NotConverged, ZeroParameter
from brouncker.logderiv import laplace_x_sech
from brouncker.representations import y_fraction, y_gamma
from brouncker.domain import DomainPoint


def brouncker_one():
    return CfSpec(1.0, lambda n: (2 * n - 1) ** 2, constant(2.0))


def test_brouncker_one_is_four_over_pi():
    ev = eval_forward(brouncker_one(), 1e-6)
    assert ev.converged and ev.method == cfcore.FORWARD
    assert abs(ev.value - 4 / math.pi) <= ev.err_estimate
    assert ev.err_estimate <= 1e-6


def test_zero_numerators_truncate():
    cf = CfSpec(2.5, constant(0.0), constant(3.0))
    assert eval_backward(cf, 5) == 2.5
    assert list(convergents(cf, 3)) == [2.5] * 4


def test_y_two_two_against_gamma():
    cf = CfSpec(2.0, lambda n: 4 * (2 * n - 1) ** 2 - 1, constant(4.0))
    ev = eval_forward(cf, 1e-9)
    assert abs(ev.value - y_gamma(DomainPoint(2.0, 2.0))) <= ev.err_estimate


def test_backward_one_level():
    s = 1.0
    cf = CfSpec(s, constant(1.0), constant(2 * s))
    assert eval_backward(cf, 1) == pytest.approx(1.5, abs=0)


def test_backward_brackets_four_over_pi():
    lo, hi = sorted((eval_backward(brouncker_one(), 200), eval_backward(brouncker_one(), 201)))
    assert lo < 4 / math.pi < hi


@pytest.mark.parametrize("s,r", [(1.0, 1.0), (0.3, 0.7), (4.0, 2.5), (12.0, 5.0)])
def test_backward_matches_forward_convergents(s, r):
    cf = y_fraction(DomainPoint(s, r))
    forward = list(convergents(cf, 200))
    for k in range(1, 201):
        assert eval_backward(cf, k) == pytest.approx(forward[k], rel=1e-13)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.05, 40.0), st.floats(0.51, 8.0))
def test_even_and_odd_convergents_bracket(s, r):
    conv = list(convergents(y_fraction(DomainPoint(s, r)), 500))
    even, odd = conv[0::2], conv[1::2]
    slack = 1e-14 * conv[-1]
    assert all(b >= a - slack for a, b in zip(even, even[1:]))
    assert all(b <= a + slack for a, b in zip(odd, odd[1:]))
    assert max(even) <= min(odd) + slack


def test_bracket_contains_value_with_block_phase():
    # slow enough that the numpy block phase does the work
    ev = eval_forward(y_fraction(DomainPoint(1.0, 2.0)), 1e-5)
    assert ev.iterations > 256
    assert abs(ev.value - y_gamma(DomainPoint(1.0, 2.0))) <= ev.err_estimate


def test_rescaling_preserves_quotients():
    # huge numerators force many rescalings; compare with an unscaled Fraction-free reference
    cf = CfSpec(3.0, lambda n: 1e40 * n * n, lambda n: 1e20 + 0 * n)
    conv = list(convergents(cf, 60))
    for k in (5, 20, 60):
        assert conv[k] == pytest.approx(eval_backward(cf, k), rel=1e-15)


def test_block_phase_rescaling_matches_scalar():
    cf = y_fraction(DomainPoint(0.4, 3.0))
    ev = eval_forward(cf, 1e-300, max_depth=3000)
    conv = list(convergents(cf, ev.iterations))
    lo, hi = sorted(conv[-2:])
    assert ev.value == pytest.approx(0.5 * (lo + hi), rel=1e-13)


def test_non_positive_element_raises():
    cf = CfSpec(1.0, lambda n: 5.5 - n, constant(1.0))
    with pytest.raises(NonPositiveElement):
        eval_forward(cf, 1e-300, max_depth=100)


def test_not_converged_is_reported_and_optionally_raised():
    cf = brouncker_one()
    ev = eval_forward(cf, 1e-14, max_depth=100)
    assert not ev.converged and ev.iterations == 100
    with pytest.raises(NotConverged) as info:
        eval_forward(cf, 1e-14, max_depth=100, strict=True)
    assert info.value.best.value == ev.value


def test_depth_cap_from_environment(monkeypatch):
    monkeypatch.setenv("BROUNCKER_MAX_DEPTH", "300")
    ev = eval_forward(brouncker_one(), 1e-14)
    assert ev.iterations == 300 and not ev.converged


def test_converged_implies_err_within_tol():
    for tol in (1e-3, 1e-6, 1e-9):
        ev = eval_forward(y_fraction(DomainPoint(5.0, 1.5)), tol)
        assert ev.converged and 0 <= ev.err_estimate <= tol


def test_division_by_zero_denominator():
    cf = CfSpec(1.0, constant(1.0), lambda n: 0.0 * n)
    with pytest.raises(DivisionByZeroDenominator):
        eval_backward(cf, 3)


def test_lentz_agrees_with_forward():
    cf = y_fraction(DomainPoint(6.0, 1.3))
    lentz = cfcore.eval_lentz(cf, 1e-14)
    assert lentz.method == cfcore.LENTZ
    assert lentz.value == pytest.approx(eval_forward(cf, 1e-13).value, rel=1e-12)


def test_identity_equivalence_transform():
    cf = brouncker_one()
    same = equivalence_transform(cf, constant(1.0), 1.0)
    n = np.arange(1, 50)
    assert same.b0 == cf.b0
    assert np.array_equal(same.elements(1, 50)[0], cf.elements(1, 50)[0])
    assert np.array_equal(same.elements(1, 50)[1], cf.elements(1, 50)[1])
    assert len(n) == 49


def test_equivalence_transform_halved_example():
    # 1/(2 + K((n^2 pi^2/4)/2)) becomes 1/(4 + K(n^2 pi^2/4)) with all levels doubled
    base = CfSpec(2.0, lambda n: n * n * math.pi**2 / 4, constant(2.0))
    scaled = equivalence_transform(base, constant(2.0), 2.0)
    assert scaled.b0 == 4.0
    a, b = scaled.elements(1, 20)
    n = np.arange(1, 20)
    assert np.allclose(a, 4 * n * n * math.pi**2 / 4, rtol=1e-15)
    assert np.all(b == 4.0)
    top = eval_forward(base, 1e-12).value
    bottom = eval_forward(scaled, 1e-12).value
    assert 1 / top == pytest.approx(2 / bottom, rel=1e-11)


def test_equivalence_transform_shifted_argument():
    # phi/r + K(n^2/(phi/r)) scaled by r at every level is phi + K(n^2 r^2/phi)
    phi, r = 5.0, 3.0
    unit = CfSpec(phi / r, lambda n: n * n, constant(phi / r))
    target = CfSpec(phi, lambda n: r * r * n * n, constant(phi))
    scaled = equivalence_transform(unit, constant(r), r)
    ours = list(convergents(scaled, 50))
    theirs = list(convergents(target, 50))
    base = list(convergents(unit, 50))
    for k in range(51):
        assert ours[k] == pytest.approx(theirs[k], rel=1e-13)
        assert ours[k] == pytest.approx(r * base[k], rel=1e-13)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.2, 30.0), st.floats(0.55, 6.0), st.floats(0.1, 10.0))
def test_unit_leading_transform_preserves_every_convergent(s, r, c):
    cf = y_fraction(DomainPoint(s, r))
    moved = equivalence_transform(cf, lambda n: c * (1 + 0.5 * np.sin(n)) + 0 * n, 1.0)
    for x, y in zip(convergents(cf, 60), convergents(moved, 60)):
        assert y == pytest.approx(x, rel=1e-13)


def test_zero_parameter():
    with pytest.raises(ZeroParameter):
        equivalence_transform(brouncker_one(), constant(1.0), 0.0)
    moved = equivalence_transform(brouncker_one(), lambda n: 0.0 * n, 1.0)
    with pytest.raises(ZeroParameter):
        moved.a(3)


def test_tk_layout():
    cf = cfcore.tk_to_cf(7.0, lambda n: 4.0 * n * n, 1.0, constant(8.0))
    a, b = cf.elements(1, 7)
    assert cf.b0 == 7.0
    assert a.tolist() == [4.0, 4.0, 16.0, 16.0, 36.0, 36.0]
    assert b.tolist() == [1.0, 8.0, 1.0, 8.0, 1.0, 8.0]


def test_tk_zero_numerators():
    cf = cfcore.tk_to_cf(3.25, constant(0.0), 1.0, constant(2.0))
    assert eval_forward(cf, 1e-12).value == 3.25


def test_tk_second_log_derivative_at_three():
    s = 3.0
    cf = cfcore.tk_to_cf(s * s - 1, lambda n: 4.0 * n * n, 1.0, constant(s * s - 1))
    ev = cfcore.reciprocal(eval_forward(cf, 1e-12))
    assert abs(ev.value - laplace_x_sech(s)) <= ev.err_estimate + 1e-13


def test_reciprocal_rejects_bracket_through_zero():
    with pytest.raises(DivisionByZeroDenominator):
        cfcore.reciprocal(cfcore.Evaluation(0.1, 1, 0.2, False))


def test_zero_numerator_deep_in_block_phase():
    # a(n) vanishes first at n = 1000, so the value is the 999th convergent
    cf = CfSpec(1.0, lambda n: np.where(np.asarray(n) >= 1000, 0.0, (2.0 * np.asarray(n) - 1) ** 2), constant(2.0))
    ev = eval_forward(cf, 1e-300)
    assert ev.converged and ev.err_estimate == 0.0 and ev.iterations == 999
    assert ev.value == pytest.approx(eval_backward(cf, 999), rel=1e-13)
