"""Continued-fraction evaluation engine.

A continued fraction is described by a :class:`CfSpec`::

    b0 + a(1)/(b(1) + a(2)/(b(2) + ...))

``a`` and ``b`` are callables ``n -> float``.  They should also accept an
integer numpy array and return an array (or a scalar, which is broadcast);
the deep-evaluation path relies on this to generate elements in blocks.
Plain scalar callables still work, only slower.

For fractions with strictly positive elements the even convergents increase
and the odd ones decrease, so the last two convergents bracket the limit.
:func:`eval_forward` reports the midpoint and half the bracket width.
"""

from __future__ import annotations

import math
import os
import sys
from dataclasses import dataclass, field
from typing import Callable, Iterator

import numpy as np

from .errors import (
    DivisionByZeroDenominator,
    NonPositiveElement,
    NotConverged,
    ZeroParameter,
)

Sequence = Callable[[int], float]

DEFAULT_MAX_DEPTH = 10**6
RESCALE_THRESHOLD = 1e150
# power of two, so rescaling is exact
_RESCALE_EXP = math.frexp(RESCALE_THRESHOLD)[1]
# depth handled by the scalar recurrence before switching to block products
_SCALAR_DEPTH = 256
# relative slack for rounding in the recurrence itself
_ROUNDING_FLOOR = 64 * sys.float_info.epsilon

FORWARD = "forward-bracket"
LENTZ = "lentz"
BACKWARD = "backward"


def default_max_depth() -> int:
    """Depth cap, overridable through ``BROUNCKER_MAX_DEPTH``."""
    raw = os.environ.get("BROUNCKER_MAX_DEPTH")
    if not raw:
        return DEFAULT_MAX_DEPTH
    depth = int(float(raw))
    if depth < 2:
        raise ValueError(f"BROUNCKER_MAX_DEPTH must be >= 2, got {raw!r}")
    return depth


@dataclass(frozen=True)
class CfSpec:
    b0: float
    a: Sequence
    b: Sequence
    name: str = field(default="", compare=False)

    def elements(self, start: int, stop: int) -> tuple[np.ndarray, np.ndarray]:
        """Partial numerators and denominators for ``start <= n < stop``."""
        n = np.arange(start, stop, dtype=np.int64)
        return _sample(self.a, n), _sample(self.b, n)


@dataclass(frozen=True)
class Evaluation:
    value: float
    iterations: int
    err_estimate: float
    converged: bool
    method: str = FORWARD

    @property
    def bracket(self) -> tuple[float, float]:
        return self.value - self.err_estimate, self.value + self.err_estimate


def _sample(f: Sequence, n: np.ndarray) -> np.ndarray:
    try:
        out = np.asarray(f(n), dtype=float)
    except (TypeError, ValueError):
        out = None
    if out is None or out.shape not in (n.shape, ()):
        out = np.array([f(int(k)) for k in n], dtype=float)
    return np.broadcast_to(out, n.shape)


def constant(c: float) -> Sequence:
    """Sequence that is ``c`` for every index."""
    return lambda n: c + 0 * n


def _check_positive(a: float, b: float, n: int) -> None:
    if not (a > 0 and b > 0):
        raise NonPositiveElement(
            f"element {n} of the fraction is not positive (a={a!r}, b={b!r})",
            "all partial numerators and denominators must be positive",
        )


def convergents(cf: CfSpec, depth: int) -> Iterator[float]:
    """Yield convergents 0..depth by the forward three-term recurrence.

    Rescaling by a power of two keeps the quotients bit-identical.
    """
    p_prev, p = 1.0, float(cf.b0)
    q_prev, q = 0.0, 1.0
    yield p / q
    for n in range(1, depth + 1):
        an, bn = float(cf.a(n)), float(cf.b(n))
        p_prev, p = p, bn * p + an * p_prev
        q_prev, q = q, bn * q + an * q_prev
        if abs(p) > RESCALE_THRESHOLD or abs(q) > RESCALE_THRESHOLD:
            p_prev = math.ldexp(p_prev, -_RESCALE_EXP)
            p = math.ldexp(p, -_RESCALE_EXP)
            q_prev = math.ldexp(q_prev, -_RESCALE_EXP)
            q = math.ldexp(q, -_RESCALE_EXP)
        yield p / q


def _normalize(m00, m01, m10, m11):
    big = np.maximum(np.maximum(m00, m01), np.maximum(m10, m11))
    _, e = np.frexp(big)
    return (np.ldexp(m00, -e), np.ldexp(m01, -e), np.ldexp(m10, -e), np.ldexp(m11, -e))


def _block_product(a: np.ndarray, b: np.ndarray) -> tuple[float, float, float, float]:
    """Ordered product of [[b_n, 1], [a_n, 0]] over a block, up to scale.

    Pairwise tree reduction with power-of-two normalisation at every level.
    All entries stay non-negative, so nothing cancels.
    """
    m = _normalize(b, np.ones_like(b), a, np.zeros_like(a))
    while m[0].size > 1:
        if m[0].size % 2:
            pad = (1.0, 0.0, 0.0, 1.0)
            m = tuple(np.append(x, v) for x, v in zip(m, pad))
        x00, x01, x10, x11 = (v[0::2] for v in m)
        y00, y01, y10, y11 = (v[1::2] for v in m)
        m = _normalize(
            x00 * y00 + x01 * y10,
            x00 * y01 + x01 * y11,
            x10 * y00 + x11 * y10,
            x10 * y01 + x11 * y11,
        )
    return tuple(float(v[0]) for v in m)


def _bracket(x_last: float, x_prev: float) -> tuple[float, float]:
    mid = 0.5 * (x_last + x_prev)
    err = 0.5 * abs(x_last - x_prev) + _ROUNDING_FLOOR * abs(mid)
    return mid, err


def _terminated(p: float, q: float, depth: int) -> Evaluation:
    # a zero partial numerator cuts the fraction off: the last convergent is the value
    return Evaluation(p / q, depth, 0.0, True)


def eval_forward(
    cf: CfSpec,
    tol: float,
    max_depth: int | None = None,
    *,
    strict: bool = False,
) -> Evaluation:
    """Evaluate a positive-element fraction with a rigorous bracket.

    The first few hundred levels run through the scalar recurrence, checking
    the bracket at every step.  Deeper levels are consumed in blocks of
    doubling size whose matrix products are formed with numpy; the bracket
    is checked after each block, so ``iterations`` may overshoot the minimal
    depth by less than a factor of two.

    With ``strict=True`` a non-converged result raises :class:`NotConverged`
    (the evaluation is attached); otherwise it is returned with
    ``converged=False``.  A partial numerator equal to zero ends the
    fraction, and the convergent before it is returned exactly.
    """
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol!r}")
    if max_depth is None:
        max_depth = default_max_depth()
    if max_depth < 2:
        raise ValueError(f"max_depth must be >= 2, got {max_depth!r}")

    p_prev, p = 1.0, float(cf.b0)
    q_prev, q = 0.0, 1.0
    n = 0
    value, err = p, math.inf
    for n in range(1, min(_SCALAR_DEPTH, max_depth) + 1):
        an, bn = float(cf.a(n)), float(cf.b(n))
        if an == 0.0:
            return _terminated(p, q, n - 1)
        _check_positive(an, bn, n)
        p_prev, p = p, bn * p + an * p_prev
        q_prev, q = q, bn * q + an * q_prev
        if p > RESCALE_THRESHOLD or q > RESCALE_THRESHOLD:
            p_prev = math.ldexp(p_prev, -_RESCALE_EXP)
            p = math.ldexp(p, -_RESCALE_EXP)
            q_prev = math.ldexp(q_prev, -_RESCALE_EXP)
            q = math.ldexp(q, -_RESCALE_EXP)
        value, err = _bracket(p / q, p_prev / q_prev)
        if err <= tol:
            return Evaluation(value, n, err, True)

    block = _SCALAR_DEPTH
    while n < max_depth:
        stop = min(n + block, max_depth)
        a, b = cf.elements(n + 1, stop + 1)
        zeros = np.flatnonzero(a == 0.0)
        cut = int(zeros[0]) if zeros.size else a.size
        bad = np.flatnonzero(~((a[:cut] > 0) & (b[:cut] > 0)))
        if bad.size:
            k = int(bad[0])
            _check_positive(float(a[k]), float(b[k]), n + 1 + k)
        if cut < a.size:
            if cut:
                m00, m01, m10, m11 = _block_product(a[:cut], b[:cut])
                p, q = p * m00 + p_prev * m10, q * m00 + q_prev * m10
            return _terminated(p, q, n + cut)
        m00, m01, m10, m11 = _block_product(a, b)
        p, p_prev = p * m00 + p_prev * m10, p * m01 + p_prev * m11
        q, q_prev = q * m00 + q_prev * m10, q * m01 + q_prev * m11
        _, e = math.frexp(max(p, q, p_prev, q_prev))
        p, p_prev, q, q_prev = (math.ldexp(v, -e) for v in (p, p_prev, q, q_prev))
        n = stop
        value, err = _bracket(p / q, p_prev / q_prev)
        if err <= tol:
            return Evaluation(value, n, err, True)
        block *= 2

    result = Evaluation(value, n, err, False)
    if strict:
        raise NotConverged(
            f"bracket half-width {err:.3g} exceeds tol {tol:.3g} at depth {n}", result
        )
    return result


def eval_lentz(
    cf: CfSpec,
    tol: float,
    max_depth: int | None = None,
    *,
    strict: bool = False,
) -> Evaluation:
    """Modified Lentz evaluation for fractions that cannot be bracketed.

    No sign requirement on the elements.  ``err_estimate`` is the last
    relative update times the value, which is a heuristic, not a bound.
    """
    if max_depth is None:
        max_depth = default_max_depth()
    tiny = 1e-300
    f = float(cf.b0) or tiny
    c, d = f, 0.0
    err = math.inf
    for n in range(1, max_depth + 1):
        an, bn = float(cf.a(n)), float(cf.b(n))
        d = bn + an * d
        d = 1.0 / (d if d != 0.0 else tiny)
        c = bn + an / c
        c = c if c != 0.0 else tiny
        delta = c * d
        f *= delta
        err = abs(delta - 1.0) * abs(f)
        if abs(delta - 1.0) <= tol:
            return Evaluation(f, n, err, True, LENTZ)
    result = Evaluation(f, max_depth, err, False, LENTZ)
    if strict:
        raise NotConverged(f"Lentz update {err:.3g} above tol at depth {max_depth}", result)
    return result


def eval_backward(cf: CfSpec, depth: int) -> float:
    """The ``depth``-th convergent, evaluated bottom-up with a zero tail."""
    if depth < 1:
        raise ValueError(f"depth must be >= 1, got {depth!r}")
    t = float(cf.b(depth))
    for n in range(depth, 0, -1):
        if t == 0.0:
            raise DivisionByZeroDenominator(f"denominator vanished at level {n}")
        below = float(cf.b(n - 1)) if n > 1 else float(cf.b0)
        t = below + float(cf.a(n)) / t
    return t


def equivalence_transform(cf: CfSpec, r_seq: Sequence, r0: float) -> CfSpec:
    """Rescale the fraction level by level.

    Returns ``cf'`` with ``b0' = r0*b0``, ``a'(n) = r(n-1)*r(n)*a(n)`` and
    ``b'(n) = r(n)*b(n)``, where ``r(0) = r0``.  Every convergent of ``cf'``
    is ``r0`` times the matching convergent of ``cf``; in particular
    ``1/(cf) == r0/(cf')`` and the transform is value-preserving when
    ``r0 == 1``.
    """
    if r0 == 0:
        raise ZeroParameter("r0 must be nonzero")

    def r(n):
        out = np.where(np.asarray(n) == 0, r0, r_seq(n))
        if np.any(out == 0):
            raise ZeroParameter(f"equivalence parameter vanishes at n={n!r}")
        return out if np.ndim(out) else float(out)

    def a(n):
        return r(n - 1) * r(n) * cf.a(n)

    def b(n):
        return r(n) * cf.b(n)

    return CfSpec(r0 * cf.b0, a, b, cf.name + "'" if cf.name else "")


def tk_to_cf(prefix: float, num: Sequence, alt1: float, alt2: Sequence) -> CfSpec:
    """Flatten the period-two pattern

        prefix + num(1)/alt1 + num(1)/alt2(1) + num(2)/alt1 + num(2)/alt2(2) + ...

    into an ordinary :class:`CfSpec`.
    """

    def a(n):
        return num((n + 1) // 2)

    def b(n):
        n = np.asarray(n)
        out = np.where(n % 2 == 1, alt1, alt2(n // 2))
        return out if out.ndim else float(out)

    return CfSpec(prefix, a, b, "tk")


def reciprocal(ev: Evaluation, numerator: float = 1.0) -> Evaluation:
    """Map an evaluation of ``x`` to one of ``numerator / x``.

    The bracket is mapped endpoint by endpoint, which is exact for ``x > 0``.
    """
    lo, hi = ev.bracket
    if lo <= 0:
        raise DivisionByZeroDenominator("bracket of the denominator contains zero")
    top, bottom = numerator / lo, numerator / hi
    mid = 0.5 * (top + bottom)
    return Evaluation(mid, ev.iterations, 0.5 * abs(top - bottom), ev.converged, ev.method)
