"""The generalized Brouncker fraction y(s, r) in each of its forms.

y(s, r) = s + K((2n-1)^2 r^2 - (r-1)^2 / 2s) is the unique positive solution
of y(s, r) y(s + 2r, r) = (s + 1)(s + 2r - 1) with y(s, r) > s.  At r = 1 it
reduces to Brouncker's b(s).

The Gamma-function closed form is the precision reference; the fraction,
the infinite product and the exponential form each carry their own error
estimate and are checked against it.
"""

from __future__ import annotations

import math
import sys
import warnings

import mpmath
import numpy as np
from scipy import integrate

from . import cfcore
from .cfcore import CfSpec, Evaluation, constant
from .domain import DomainPoint
from .errors import DomainError, QuadratureFailure
from .logderiv import QUADRATURE, f1_argument, f2_argument, phi_integral
from .specfun import ln_gamma

PRODUCT = "product"
CLOSED_FORM = "closed-form"
DEFAULT_PRODUCT_TERMS = 10**5
EXPONENTIAL_HYPOTHESIS = "the exponential form requires s > |r - 1| and r > 1/2"

_EPS = sys.float_info.epsilon


def y_fraction(p: DomainPoint) -> CfSpec:
    """The fraction s + K(((2n-1)^2 r^2 - (r-1)^2) / 2s) as a :class:`CfSpec`."""
    s, r = float(p.s), float(p.r)
    rr, shift = r * r, (r - 1) ** 2

    def a(n):
        return (2 * n - 1) ** 2 * rr - shift

    return CfSpec(s, a, constant(2.0 * s), f"y({s:g},{r:g})")


def y_cf(p: DomainPoint, tol: float = 1e-12, max_depth: int | None = None) -> Evaluation:
    p.require_base()
    return cfcore.eval_forward(y_fraction(p), tol, max_depth)


def b(s: float, tol: float = 1e-12, max_depth: int | None = None) -> Evaluation:
    """Brouncker's fraction s + K((2n-1)^2 / 2s), i.e. y(s, 1)."""
    return y_cf(DomainPoint(s, 1.0), tol, max_depth)


def y_product(p: DomainPoint, n_terms: int = DEFAULT_PRODUCT_TERMS) -> Evaluation:
    """(s+1) prod_n (s+2r-1+4nr)(s+4r+1+4nr) / ((s+2r+1+4nr)(s+4r-1+4nr)).

    With u = 4nr + s + 3r each factor is (u^2 - (r+1)^2)/(u^2 - (r-1)^2), whose
    log is -4r/u^2 + O(u^-4).  The first ``n_terms`` logs are summed exactly
    and the rest is replaced by the midpoint-rule integral of -4r/u^2, i.e.
    -1/U with U = 4r(N - 1/2) + s + 3r.  ``err_estimate`` is twice the size of
    the two neglected O(U^-3) contributions (the u^-4 log term and the
    midpoint-rule error).
    """
    p.require_base()
    if n_terms < 0:
        raise ValueError(f"n_terms must be non-negative, got {n_terms!r}")
    s, r = float(p.s), float(p.r)
    if n_terms == 0:
        # s < y < s + 1, so the empty product is off by less than 1
        return Evaluation(s + 1.0, 0, 1.0, True, PRODUCT)
    big, small = (r + 1) ** 2, (r - 1) ** 2
    u = 4.0 * r * np.arange(n_terms, dtype=float) + (s + 3.0 * r)
    u2 = u * u
    logs = np.log1p(-big / u2) - np.log1p(-small / u2)
    head = math.fsum(logs)
    edge = 4.0 * r * (n_terms - 0.5) + s + 3.0 * r
    tail = -1.0 / edge
    err_log = 2.0 * (5.0 * r * r + 1.0) / (3.0 * edge**3)
    value = (s + 1.0) * math.exp(head + tail)
    err = value * math.expm1(err_log) + 4 * _EPS * value
    return Evaluation(value, n_terms, err, True, PRODUCT)


def _gamma_arguments(s: float, r: float) -> tuple[tuple[float, float], tuple[float, float]]:
    q = 4.0 * r
    return ((s + 2 * r + 1) / q, (s + 4 * r - 1) / q), ((s + 1) / q, (s + 2 * r - 1) / q)


def y_gamma(p: DomainPoint) -> float:
    """4r G((s+2r+1)/4r) G((s+4r-1)/4r) / (G((s+1)/4r) G((s+2r-1)/4r))."""
    p.require_base()
    s, r = float(p.s), float(p.r)
    num, den = _gamma_arguments(s, r)
    logs = [ln_gamma(num[0]), ln_gamma(num[1]), -ln_gamma(den[0]), -ln_gamma(den[1])]
    return 4.0 * r * math.exp(math.fsum(logs))


def y_gamma_mp(p: DomainPoint, dps: int = 50):
    """:func:`y_gamma` in mpmath at ``dps`` digits, for checks below double precision.

    ``p.s`` and ``p.r`` may be floats, ints, strings or Fractions; the result
    is an ``mpmath.mpf``.
    """
    with mpmath.workdps(dps):
        s, r = _to_mpf(p.s), _to_mpf(p.r)
        if not (s > 0 and r > mpmath.mpf(1) / 2):
            p.require_base()
        q = 4 * r
        value = q * mpmath.exp(
            mpmath.loggamma((s + 2 * r + 1) / q)
            + mpmath.loggamma((s + 4 * r - 1) / q)
            - mpmath.loggamma((s + 1) / q)
            - mpmath.loggamma((s + 2 * r - 1) / q)
        )
        return +value


def _to_mpf(x):
    if hasattr(x, "numerator") and hasattr(x, "denominator") and not isinstance(x, float):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


def y_zero(r: float) -> float:
    """lim_{s->0+} y(s, r) = 8 pi r 2^(1-1/r) G(1/2r)^2 / G(1/4r)^4 * cot(pi/4r)."""
    if not r > 0.5:
        raise DomainError(f"y(0+, r) needs r > 1/2, got r={r!r}", "r > 1/2")
    r = float(r)
    log_c = math.fsum(
        [
            math.log(8 * math.pi * r),
            (1 - 1 / r) * math.log(2),
            2 * ln_gamma(1 / (2 * r)),
            -4 * ln_gamma(1 / (4 * r)),
            -math.log(math.tan(math.pi / (4 * r))),
        ]
    )
    return math.exp(log_c)


def _dlog_integral(t: float, r: float) -> float:
    return phi_integral(f1_argument(r), t).value + phi_integral(f2_argument(r), t).value


def y_exponential_evaluation(p: DomainPoint, tol: float = 1e-10, *, strict: bool = False) -> Evaluation:
    """y(0+, r) * exp(int_0^s (f1 + f2)(t) dt), f1 and f2 taken as Laplace integrals.

    The integral representations of f1 and f2 hold for every t >= 0 once
    r > 1/2, so the formula is evaluated on all of s > 0.  ``strict=True``
    enforces the narrower hypothesis s > |r - 1| instead.
    """
    p.require_base()
    if strict:
        p.require(p.in_exponential_domain, EXPONENTIAL_HYPOTHESIS)
    s, r = float(p.s), float(p.r)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        log_ratio, abserr = integrate.quad(_dlog_integral, 0.0, s, args=(r,), epsabs=tol, epsrel=0.0, limit=200)
    if not abserr <= tol:
        raise QuadratureFailure(f"exponential form at (s, r)=({s!r}, {r!r}): error {abserr:.3g} > {tol:.3g}")
    value = y_zero(r) * math.exp(log_ratio)
    err = value * (math.expm1(abserr) + 1e-12)
    return Evaluation(value, 0, err, True, QUADRATURE)


def y_exponential(p: DomainPoint, tol: float = 1e-10, *, strict: bool = False) -> float:
    return y_exponential_evaluation(p, tol, strict=strict).value


def check_functional(p: DomainPoint) -> float:
    """Relative residual of y(s, r) y(s + 2r, r) = (s + 1)(s + 2r - 1)."""
    p.require_base()
    s, r = float(p.s), float(p.r)
    rhs = (s + 1) * (s + 2 * r - 1)
    return abs(y_gamma(p) * y_gamma(DomainPoint(s + 2 * r, r)) - rhs) / rhs
