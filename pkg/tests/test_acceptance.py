"""Acceptance criteria, one check each, at the stated tolerances.

Run under pytest (``pytest tests/test_acceptance.py -v -s``) or directly
(``python tests/test_acceptance.py``); either way one PASS/FAIL line is printed
per criterion.
"""

import math
import time
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from brouncker import cfcore
from brouncker.asymptotic import asym_coeffs, exp_compose, y_asymptotic
from brouncker.cfcore import constant, eval_forward, tk_to_cf
from brouncker.domain import DomainPoint
from brouncker.logderiv import (
    d2log_y,
    dlog_y,
    euler_integral,
    f1,
    f2,
    h1,
    h2,
    laplace_sech,
    laplace_x_sech,
)
from brouncker.representations import (
    check_functional,
    y_cf,
    y_exponential_evaluation,
    y_gamma,
    y_gamma_mp,
    y_product,
    y_zero,
)
from brouncker.specfun import ShiftEquation, euler_numbers, solve_shift_equation

SEED = 314159


def valid_points(n, seed, second=False):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        p = DomainPoint(float(rng.uniform(0.2, 30.0)), float(rng.uniform(0.55, 6.0)))
        if not second or p.in_second_derivative_domain:
            out.append(p)
    return out


def ln_y(s, r):
    return math.log(y_gamma(DomainPoint(s, r)))


def representation_agreement():
    start = time.perf_counter()
    worst = 0.0
    for s in (1.0, 2.0, 5.0, 10.0, 20.0):
        for r in (0.6, 1.0, 1.5, 2.0, 5.0):
            p = DomainPoint(s, r)
            ref = y_gamma(p)
            for ev in (y_cf(p), y_product(p), y_exponential_evaluation(p)):
                worst = max(worst, abs(ev.value - ref) / max(ev.err_estimate, 1e-7))
    elapsed = time.perf_counter() - start
    return worst <= 1 and elapsed < 60, f"max |delta|/allowance = {worst:.3g}, runtime {elapsed:.1f} s"


def functional_equation():
    worst = max(check_functional(p) for p in valid_points(100, SEED))
    return worst <= 1e-11, f"max relative residual {worst:.3g}"


def exact_constants():
    series = exp_compose(asym_coeffs(2, 3), 3)
    ok = series.A == (-3, 57, -2763) and series.laurent[1:] == (Fraction(3, 2), Fraction(-105, 8), Fraction(7035, 16))
    ok = ok and all(isinstance(c, (int, Fraction)) for c in series.A + series.laurent)
    return ok, f"A = {[str(a) for a in series.A]}, laurent = {[str(c) for c in series.laurent]}"


def euler_values():
    table = euler_numbers(40)
    ok = (table[2], table[4], table[6]) == (-1, 5, -61) and all(table[k] == 0 for k in range(1, 41, 2))
    return ok, f"E_2, E_4, E_6 = {table[2]}, {table[4]}, {table[6]}; odd entries zero through 40"


def brouncker_at_one():
    gamma_gap = abs(y_gamma(DomainPoint(1.0, 1.0)) - 4 / math.pi)
    ev = y_cf(DomainPoint(1.0, 1.0))
    lo, hi = ev.bracket
    ok = gamma_gap <= 1e-10 and lo <= 4 / math.pi <= hi
    return ok, f"gamma form gap {gamma_gap:.3g}; fraction bracket [{lo:.15f}, {hi:.15f}]"


def zero_constants():
    g1 = abs(y_zero(1.0) - 8 * math.pi**2 / math.gamma(0.25) ** 4)
    expected = 16 * math.pi * (2 + math.sqrt(2)) * math.gamma(0.25) ** 2 / math.gamma(0.125) ** 4
    g2 = abs(y_zero(2.0) - expected)
    return g1 <= 1e-12 and g2 <= 1e-12, f"gaps {g1:.3g} (r=1), {g2:.3g} (r=2)"


def integral_identities():
    rng = np.random.default_rng(SEED)
    ln2 = abs(laplace_sech(1.0) - math.log(2))
    euler = max(abs(euler_integral(float(s)) - laplace_sech(float(s))) for s in rng.uniform(-0.5, 50, 50))
    oracle = ShiftEquation(lambda t: 2.0 / (t + 1) ** 2, 2.0)
    series = max(abs(laplace_x_sech(float(a)) - solve_shift_equation(oracle, float(a), 1e-7))
                 for a in rng.uniform(-0.5, 40, 20))
    ok = ln2 <= 1e-12 and euler <= 1e-11 and series <= 1e-10
    return ok, f"ln2 gap {ln2:.3g}; euler vs laplace {euler:.3g}; x-sech vs series {series:.3g}"


def derivative_consistency():
    first = 0.0
    for p in valid_points(20, SEED + 1):
        h = 1e-4
        fd = (ln_y(p.s + h, p.r) - ln_y(p.s - h, p.r)) / (2 * h)
        first = max(first, abs(dlog_y(p) - fd))
    second = 0.0
    for p in valid_points(20, SEED + 2, second=True):
        h = 1e-3
        fd = (ln_y(p.s + h, p.r) - 2 * ln_y(p.s, p.r) + ln_y(p.s - h, p.r)) / (h * h)
        second = max(second, abs(d2log_y(p) - fd))
    return first <= 1e-6 and second <= 1e-5, f"dlog gap {first:.3g}; d2log gap {second:.3g}"


def ramanujan_unit_r():
    worst = 0.0
    for s in (2.0, 3.0, 5.0, 10.0):
        q = s * s - 1
        cf = tk_to_cf(q, lambda n: 4.0 * n * n, 1.0, constant(q))
        rhs = cfcore.reciprocal(eval_forward(cf, 1e-13))
        worst = max(worst, abs(-d2log_y(DomainPoint(s, 1.0)) - rhs.value) - rhs.err_estimate)
    return worst <= 1e-9, f"max gap beyond bracket {max(worst, 0.0):.3g}"


def shifted_functional_equations():
    worst = {}
    for p in valid_points(20, SEED + 3):
        s, r = p.s, p.r
        q = DomainPoint(s + 2 * r, r)
        worst["f1"] = max(worst.get("f1", 0.0), abs(f1(p) + f1(q) - 1 / (s + 1)))
        worst["f2"] = max(worst.get("f2", 0.0), abs(f2(p) + f2(q) - 1 / (s + 2 * r - 1)))
    for p in valid_points(20, SEED + 4, second=True):
        s, r = p.s, p.r
        q = DomainPoint(s + 2 * r, r)
        worst["h1"] = max(worst.get("h1", 0.0), abs(h1(p) + h1(q) - 1 / (s + 1) ** 2))
        worst["h2"] = max(worst.get("h2", 0.0), abs(h2(p) + h2(q) - 1 / (s + 2 * r - 1) ** 2))
    return max(worst.values()) <= 1e-8, ", ".join(f"{k} {v:.3g}" for k, v in worst.items())


def asymptotic_regime():
    # relative error of the M=3 truncation falls like s**-8; it sits far below
    # double precision, so both sides are evaluated at 60 digits
    ratios = []
    with mpmath.workdps(60):
        for r in (1, 2):
            errs = []
            for s in (100, 200, 400):
                exact = y_gamma_mp(DomainPoint(s, r), dps=60)
                value, _ = y_asymptotic(DomainPoint(mpmath.mpf(s), Fraction(r)), M=3)
                errs.append(abs(value - exact) / exact)
            ratios += [float(errs[0] / errs[1]), float(errs[1] / errs[2])]
    ok = all(180 <= x <= 330 for x in ratios)
    return ok, "successive ratios " + ", ".join(f"{x:.1f}" for x in ratios)


CRITERIA = [
    (1, "representation cross-agreement", representation_agreement),
    (2, "functional equation of y", functional_equation),
    (3, "exact asymptotic constants", exact_constants),
    (4, "Euler numbers", euler_values),
    (5, "b(1) = 4/pi", brouncker_at_one),
    (6, "y(0+, r) constants", zero_constants),
    (7, "integral identities", integral_identities),
    (8, "derivative consistency", derivative_consistency),
    (9, "second log-derivative at r = 1", ramanujan_unit_r),
    (10, "f1, f2, h1, h2 functional equations", shifted_functional_equations),
    (11, "asymptotic error scaling", asymptotic_regime),
]


def line(number, name, ok, detail):
    return f"{'PASS' if ok else 'FAIL'} criterion {number:>2} {name}: {detail}"


@pytest.mark.parametrize("number,name,check", CRITERIA, ids=[f"criterion_{n:02d}" for n, _, _ in CRITERIA])
def test_criterion(number, name, check, capsys):
    ok, detail = check()
    with capsys.disabled():
        print("\n" + line(number, name, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    results = []
    for number, name, check in CRITERIA:
        ok, detail = check()
        results.append(ok)
        print(line(number, name, ok, detail))
    raise SystemExit(0 if all(results) else 1)
