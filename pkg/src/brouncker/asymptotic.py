"""Asymptotic expansion of y(s, r) as s -> +infinity.

    y(s, r) ~ s exp(-sum_{n>=1} A_n(r) / (2n s^{2n})),
    A_n(r) = sum_{k=0}^{n} C(2n, 2k) (r-1)^{2k} r^{2(n-k)} E_{2(n-k)},

with E the Euler numbers.  Exponentiating the series in u = 1/s^2 gives the
Laurent coefficients of y ~ s + c_1/s + c_3/s^3 + ...

All coefficients are exact :class:`~fractions.Fraction` values when r is
rational (int, Fraction, decimal string).  A float r switches to float
arithmetic, and the result is flagged with ``exact=False``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from math import comb
from numbers import Rational

import mpmath

from .domain import DomainPoint
from .specfun import euler_numbers


@dataclass(frozen=True)
class AsymSeries:
    """Coefficients of the expansion for one value of r.

    ``A`` holds A_1..A_N.  ``laurent`` holds c_{-1}, c_1, c_3, ... (the
    coefficient of s, 1/s, 1/s^3, ...); it is empty until
    :func:`exp_compose` fills it.
    """

    r: Fraction | float
    A: tuple = ()
    laurent: tuple = ()
    exact: bool = True


def _coerce_r(r) -> tuple[Fraction | float, bool]:
    if isinstance(r, float):
        return r, False
    if isinstance(r, (Rational, str)):
        return Fraction(r), True
    raise TypeError(f"r must be rational, a decimal string or a float, got {type(r).__name__}")


def asym_coeffs(r, N: int) -> AsymSeries:
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N!r}")
    r, exact = _coerce_r(r)
    euler = euler_numbers(2 * N)
    t2 = (r - 1) ** 2
    r2 = r * r
    A = tuple(
        sum(comb(2 * n, 2 * k) * t2**k * r2 ** (n - k) * euler[2 * (n - k)] for k in range(n + 1))
        for n in range(1, N + 1)
    )
    return AsymSeries(r, A, (), exact)


def exp_series(coeffs: list, M: int) -> list:
    """First M+1 coefficients of exp(sum_{n>=1} coeffs[n] u^n); coeffs[0] is ignored.

    Uses n F_n = sum_{k=1}^n k e_k F_{n-k}, which follows from F' = e' F.
    """
    one = coeffs[0] * 0 + 1
    F = [one]
    for n in range(1, M + 1):
        acc = sum((k * coeffs[k] * F[n - k] for k in range(1, n + 1)), one * 0)
        F.append(acc / n)
    return F


def exp_compose(series: AsymSeries, M: int) -> AsymSeries:
    """Fill ``laurent`` with c_{-1}, c_1, ..., c_{2M-1}."""
    if M < 0:
        raise ValueError(f"M must be non-negative, got {M!r}")
    if len(series.A) < M:
        raise ValueError(f"need A_1..A_{M}, series has {len(series.A)}")
    zero = Fraction(0) if series.exact else 0.0
    exponent = [zero] + [-series.A[n - 1] / (2 * n) for n in range(1, M + 1)]
    return replace(series, laurent=tuple(exp_series(exponent, M)))


def _like(c, s):
    if isinstance(s, Fraction):
        return c
    if isinstance(s, mpmath.mpf):
        return mpmath.mpf(c.numerator) / c.denominator if isinstance(c, Fraction) else mpmath.mpf(c)
    return float(c)


def _promote(s, exact: bool):
    if isinstance(s, int):
        s = Fraction(s)
    if isinstance(s, Fraction) and not exact:
        s = float(s)
    return s


def laurent_sum(series: AsymSeries, s, M: int):
    """c_{-1} s + sum_{m=1}^{M} c_{2m-1} / s^(2m-1), in the number type of ``s``.

    A Fraction ``s`` with exact coefficients gives an exact Fraction; an
    ``mpmath.mpf`` gives an mpf at the working precision.
    """
    s = _promote(s, series.exact)
    u = 1 / (s * s)
    acc = _like(series.laurent[M], s)
    for m in range(M - 1, -1, -1):
        acc = acc * u + _like(series.laurent[m], s)
    return s * acc


def _ensure(series: AsymSeries | None, r, M: int) -> AsymSeries:
    if series is None or len(series.A) < M + 1:
        series = asym_coeffs(series.r if series is not None else r, M + 1)
    if len(series.laurent) < M + 2:
        series = exp_compose(series, M + 1)
    return series


def y_asymptotic(p: DomainPoint, series: AsymSeries | None = None, M: int = 3):
    """Truncated expansion through c_{2M-1}/s^(2M-1) and the first omitted term.

    Returns ``(value, err_hint)``.  ``err_hint`` is |c_{2M+1}| / s^(2M+1): the
    usual size guide for an asymptotic series, not a proven bound.  Without a
    ``series`` the coefficients are built from ``p.r`` (exactly when p.r is
    rational).  ``p.s`` may be a Fraction or an mpmath number to evaluate
    beyond double precision.
    """
    if M < 0:
        raise ValueError(f"M must be non-negative, got {M!r}")
    series = _ensure(series, p.r, M)
    value = laurent_sum(series, p.s, M)
    s = _promote(p.s, series.exact)
    err_hint = _like(abs(series.laurent[M + 1]), s) / abs(s) ** (2 * M + 1)
    return value, err_hint
