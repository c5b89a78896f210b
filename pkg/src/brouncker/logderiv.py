"""First and second logarithmic derivatives of y(s, r).

Every quantity here has two routes:

* a continued fraction, valid once its shifted argument is positive
  (first derivative) or exceeds ``r`` (second derivative);
* a Laplace transform of ``1/cosh`` (or ``x/cosh``), valid on the larger
  range where the transform converges.

The ``auto`` method takes the fraction where it is valid with some margin
and falls back to the integral when the fraction sits too close to its
boundary or does not converge within the depth cap.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass

from scipy import integrate

from . import cfcore
from .cfcore import CfSpec, Evaluation, constant
from .domain import DomainPoint
from .errors import DomainError, NotConverged, QuadratureFailure

log = logging.getLogger(__name__)

QUADRATURE = "quadrature"
# target size of the neglected tail of a Laplace integral
_TAIL_TARGET = 1e-15
_ABS_TOL = 1e-12
# the fraction is used only this far inside its domain
CF_MARGIN = 0.1
METHODS = ("auto", "cf", "integral")
_PROBE_DEPTH = 4096


def _truncation_point(c: float, power: int) -> tuple[float, float]:
    """Smallest convenient X whose analytic tail bound is below target.

    For x^power * 2 exp(-c x) the tail past X is
    2 exp(-cX)/c (power 0) or 2 exp(-cX) (X/c + 1/c^2) (power 1).
    """

    def bound(x):
        if power == 0:
            return 2 * math.exp(-c * x) / c
        return 2 * math.exp(-c * x) * (x / c + 1 / c**2)

    x = max(math.log(max(2 / (c * _TAIL_TARGET), 2.0)) / c, 1e-3)
    while bound(x) > _TAIL_TARGET:
        x *= 1.25
    return x, bound(x)


def _laplace_sech_power(a: float, power: int) -> tuple[float, float]:
    c = a + 1.0
    upper, tail = _truncation_point(c, power)

    # 1/cosh x = 2 e^{-x} / (1 + e^{-2x}), so no overflow for large x
    if power == 0:
        def integrand(x):
            return 2.0 * math.exp(-c * x) / (1.0 + math.exp(-2.0 * x))
    else:
        def integrand(x):
            return 2.0 * x * math.exp(-c * x) / (1.0 + math.exp(-2.0 * x))

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        value, abserr = integrate.quad(integrand, 0.0, upper, epsabs=1e-14, epsrel=1e-14, limit=500)
    value += tail
    if abserr > max(_ABS_TOL, 1e-13 * abs(value)):
        raise QuadratureFailure(f"Laplace integral at a={a!r}: error estimate {abserr:.3g}")
    return value, abserr + tail


def laplace_sech(a: float) -> float:
    """int_0^inf exp(-a x) / cosh(x) dx for a > -1."""
    if not a > -1:
        raise DomainError(f"Laplace transform of sech diverges at a={a!r}", "a > -1")
    return _laplace_sech_power(a, 0)[0]


def laplace_x_sech(a: float) -> float:
    """int_0^inf x exp(-a x) / cosh(x) dx for a > -1."""
    if not a > -1:
        raise DomainError(f"Laplace transform of x*sech diverges at a={a!r}", "a > -1")
    return _laplace_sech_power(a, 1)[0]


def euler_integral(s: float) -> float:
    """2 int_0^1 x^s / (1 + x^2) dx for s > -1.

    For s < 0 the endpoint singularity is removed with x = u^(1/(1+s)).
    """
    if not s > -1:
        raise DomainError(f"2*int_0^1 x^s/(1+x^2) dx diverges at s={s!r}", "s > -1")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        if s >= 0:
            value, abserr = integrate.quad(
                lambda x: x**s / (1.0 + x * x), 0.0, 1.0, epsabs=1e-15, epsrel=1e-14, limit=500
            )
        else:
            p = 1.0 / (1.0 + s)
            value, abserr = integrate.quad(
                lambda u: p / (1.0 + u ** (2 * p)), 0.0, 1.0, epsabs=1e-15, epsrel=1e-14, limit=500
            )
    if abserr > _ABS_TOL:
        raise QuadratureFailure(f"euler_integral({s!r}): error estimate {abserr:.3g}")
    return 2.0 * value


@dataclass(frozen=True)
class ShiftedArgument:
    """phi(s, r) = s + shift, together with r."""

    shift: float
    r: float

    def phi(self, s: float) -> float:
        return s + self.shift


def f1_argument(r: float) -> ShiftedArgument:
    return ShiftedArgument(1.0 - r, r)


def f2_argument(r: float) -> ShiftedArgument:
    return ShiftedArgument(r - 1.0, r)


def _phi_fraction(phi: float, r: float) -> CfSpec:
    rr = r * r
    return CfSpec(phi, lambda n: rr * n * n, constant(phi), "phi")


def cf_phi(arg: ShiftedArgument, s: float, tol: float, max_depth: int | None = None) -> Evaluation:
    """1 / (2 phi + 2 K(n^2 r^2 / phi)) for phi = s + shift > 0, r > 0.

    Equals (1/(2r)) int_0^inf exp(-x phi/r) / cosh(x) dx.
    """
    phi = arg.phi(s)
    if not (phi > 0 and arg.r > 0):
        raise DomainError(
            f"fraction needs phi > 0 and r > 0, got phi={phi!r}, r={arg.r!r}", "phi(s, r) > 0, r > 0"
        )
    # 0.5/x moves by at most 0.5*dx/phi^2 because x >= phi
    ev = cfcore.eval_forward(_phi_fraction(phi, arg.r), 2.0 * tol * phi * phi, max_depth)
    return cfcore.reciprocal(ev, 0.5)


def phi_integral(arg: ShiftedArgument, s: float) -> Evaluation:
    """Integral route for :func:`cf_phi`, valid for phi/r > -1."""
    phi = arg.phi(s)
    if not (arg.r > 0 and phi / arg.r > -1):
        raise DomainError(
            f"integral needs phi/r > -1, got phi={phi!r}, r={arg.r!r}", "phi(s, r)/r > -1"
        )
    value, err = _laplace_sech_power(phi / arg.r, 0)
    return Evaluation(value / (2 * arg.r), 0, err / (2 * arg.r), True, QUADRATURE)


def _tk_fraction(phi: float, r: float) -> CfSpec:
    q = (phi - r) * (phi + r)
    four_rr = 4.0 * r * r
    return cfcore.tk_to_cf(q, lambda n: four_rr * n * n, 1.0, constant(q))


def cf_phi_derivative(arg: ShiftedArgument, s: float, tol: float, max_depth: int | None = None) -> Evaluation:
    """1 / (2 (phi^2 - r^2) + 2 TK(4n^2r^2/1, 4n^2r^2/(phi^2 - r^2))) for phi > r > 0.

    This is minus the s-derivative of :func:`cf_phi`.
    """
    phi = arg.phi(s)
    if not (arg.r > 0 and phi > arg.r):
        raise DomainError(
            f"fraction needs phi > r > 0, got phi={phi!r}, r={arg.r!r}", "phi(s, r) > r > 0"
        )
    q = (phi - arg.r) * (phi + arg.r)
    ev = cfcore.eval_forward(_tk_fraction(phi, arg.r), 2.0 * tol * q * q, max_depth)
    return cfcore.reciprocal(ev, 0.5)


def phi_derivative_integral(arg: ShiftedArgument, s: float) -> Evaluation:
    """(1/(2 r^2)) int_0^inf x exp(-x phi/r) / cosh(x) dx."""
    phi = arg.phi(s)
    if not (arg.r > 0 and phi / arg.r > -1):
        raise DomainError(
            f"integral needs phi/r > -1, got phi={phi!r}, r={arg.r!r}", "phi(s, r)/r > -1"
        )
    value, err = _laplace_sech_power(phi / arg.r, 1)
    scale = 2 * arg.r * arg.r
    return Evaluation(value / scale, 0, err / scale, True, QUADRATURE)


def _dispatch(cf_route, integral_route, rate: float | None, method: str, tol: float, what: str) -> Evaluation:
    """Pick a route.  ``rate`` is None when auto mode must not use the fraction."""
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}, got {method!r}")
    if method == "integral" or (method == "auto" and rate is None):
        return integral_route()
    if method == "auto":
        probe = cf_route(_PROBE_DEPTH)
        if probe.converged:
            return probe
        if not _reachable(probe, tol, rate):
            log.debug("%s: fraction too slow (err %.3g at depth %d), using integral", what, probe.err_estimate, probe.iterations)
            return integral_route()
    ev = cf_route(None)
    if ev.converged:
        return ev
    if method == "cf":
        raise NotConverged(f"{what}: fraction did not reach tol={tol:.3g}", ev)
    log.debug("%s: fraction stopped at depth %d (err %.3g), using integral", what, ev.iterations, ev.err_estimate)
    return integral_route()


def _reachable(probe: Evaluation, tol: float, rate: float) -> bool:
    """Whether the depth cap suffices, assuming err ~ depth**-rate."""
    needed = probe.iterations * (probe.err_estimate / tol) ** (1.0 / rate)
    return needed <= cfcore.default_max_depth()


def _first(p: DomainPoint, tol: float, method: str, arg: ShiftedArgument, what: str) -> Evaluation:
    phi = arg.phi(p.s)
    if not (p.r > 0 and phi / p.r > -1):
        raise DomainError(
            f"{what}({p.s!r}, {p.r!r}) is undefined: needs r > 0 and s + {arg.shift:g} > -r",
            "r > 0 and phi(s, r)/r > -1",
        )
    if method == "cf" and not p.s > abs(p.r - 1):
        p.require(False, "the continued fraction for f1, f2 requires s > |r - 1|")
    # the bracket of this fraction shrinks roughly like depth**(-phi/r)
    rate = phi / p.r if p.s > abs(p.r - 1) + CF_MARGIN else None
    return _dispatch(
        lambda depth: cf_phi(arg, p.s, tol, depth),
        lambda: phi_integral(arg, p.s),
        rate,
        method,
        tol,
        what,
    )


def f1_evaluation(p: DomainPoint, tol: float = 1e-12, method: str = "auto") -> Evaluation:
    return _first(p, tol, method, f1_argument(p.r), "f1")


def f2_evaluation(p: DomainPoint, tol: float = 1e-12, method: str = "auto") -> Evaluation:
    return _first(p, tol, method, f2_argument(p.r), "f2")


def f1(p: DomainPoint, tol: float = 1e-12, method: str = "auto") -> float:
    """Solution of f(s) + f(s + 2r) = 1/(s + 1) vanishing at infinity.

    ``method`` is ``"auto"``, ``"cf"`` or ``"integral"``.
    """
    return f1_evaluation(p, tol, method).value


def f2(p: DomainPoint, tol: float = 1e-12, method: str = "auto") -> float:
    """Solution of f(s) + f(s + 2r) = 1/(s + 2r - 1) vanishing at infinity."""
    return f2_evaluation(p, tol, method).value


def _combine(parts: list[Evaluation], sign: float = 1.0) -> Evaluation:
    methods = sorted({e.method for e in parts})
    return Evaluation(
        sign * math.fsum(e.value for e in parts),
        max(e.iterations for e in parts),
        math.fsum(e.err_estimate for e in parts),
        all(e.converged for e in parts),
        "+".join(methods),
    )


def dlog_y_evaluation(p: DomainPoint, tol: float = 1e-12, method: str = "auto") -> Evaluation:
    p.require_base()
    return _combine([f1_evaluation(p, tol, method), f2_evaluation(p, tol, method)])


def dlog_y(p: DomainPoint, tol: float = 1e-12, method: str = "auto") -> float:
    """d/ds ln y(s, r) = f1 + f2."""
    return dlog_y_evaluation(p, tol, method).value


SECOND_HYPOTHESIS = "the second-derivative fractions require s > max(1, 2r - 1) and r > 1/2"


def _second(p: DomainPoint, tol: float, method: str, arg: ShiftedArgument, what: str) -> Evaluation:
    p.require(p.in_second_derivative_domain, SECOND_HYPOTHESIS)
    rate = arg.phi(p.s) / p.r if p.s > max(1.0, 2 * p.r - 1) + CF_MARGIN else None
    return _dispatch(
        lambda depth: cf_phi_derivative(arg, p.s, tol, depth),
        lambda: phi_derivative_integral(arg, p.s),
        rate,
        method,
        tol,
        what,
    )


def h1_evaluation(p: DomainPoint, tol: float = 1e-12, method: str = "auto") -> Evaluation:
    return _second(p, tol, method, f1_argument(p.r), "h1")


def h2_evaluation(p: DomainPoint, tol: float = 1e-12, method: str = "auto") -> Evaluation:
    return _second(p, tol, method, f2_argument(p.r), "h2")


def h1(p: DomainPoint, tol: float = 1e-12, method: str = "auto") -> float:
    """Solution of h(s) + h(s + 2r) = 1/(s + 1)^2 vanishing at infinity; equals -d/ds f1."""
    return h1_evaluation(p, tol, method).value


def h2(p: DomainPoint, tol: float = 1e-12, method: str = "auto") -> float:
    """Solution of h(s) + h(s + 2r) = 1/(s + 2r - 1)^2 vanishing at infinity; equals -d/ds f2."""
    return h2_evaluation(p, tol, method).value


def d2log_y_evaluation(p: DomainPoint, tol: float = 1e-12, method: str = "auto") -> Evaluation:
    return _combine([h1_evaluation(p, tol, method), h2_evaluation(p, tol, method)], -1.0)


def d2log_y(p: DomainPoint, tol: float = 1e-12, method: str = "auto") -> float:
    """d^2/ds^2 ln y(s, r) = -(h1 + h2)."""
    return d2log_y_evaluation(p, tol, method).value
