"""Generalized Brouncker continued fraction y(s, r) and its logarithmic derivatives."""

from .asymptotic import AsymSeries, asym_coeffs, exp_compose, y_asymptotic
from .cfcore import CfSpec, Evaluation, eval_backward, eval_forward, equivalence_transform, tk_to_cf
from .domain import DomainPoint
from .errors import (
    BrounckerError,
    DivisionByZeroDenominator,
    DomainError,
    MonotonicityViolated,
    NonPositiveElement,
    NotConverged,
    QuadratureFailure,
    ZeroParameter,
)
from .logderiv import (
    ShiftedArgument,
    cf_phi,
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
from .representations import (
    b,
    check_functional,
    y_cf,
    y_exponential,
    y_gamma,
    y_gamma_mp,
    y_product,
    y_zero,
)
from .specfun import EulerTable, ShiftEquation, euler_numbers, ln_gamma, solve_shift_equation

__version__ = "0.1.0"
