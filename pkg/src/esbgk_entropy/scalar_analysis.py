"""One-variable analysis of the sharp entropy-production coefficient C_nu.

C_nu is the supremum over x > 0 of ``g1(nu, x) / g2(x)`` where

    g1 = 3 ln(1 + x/3) - ln(1 + (1+2nu) x/3) - 2 ln(1 + (1-nu) x/3)
    g2 = 3 ln(1 + x/3) - ln(1 + x)

Both vanish quadratically at the origin, so they are evaluated through
the exact rational forms

    g1 = -log1p(-(nu^2 x^2 / 3) (1 + (3-2nu) x/9) / (1 + x/3)^3)
    g2 =  log1p((x^2 / 3) (1 + x/9) / (1 + x))

which carry no cancellation at any x.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from ._roots import bracketed_newton
from .errors import BracketFailure, DomainError

NU_MIN = -0.5
NU_MAX = 1.0

# x_nu grows like 1/(1 + 2 nu); it passes 1e14 for nu one ulp above -1/2
_X_BRACKET_LIMIT = 1e300
_GRID_CHECK = np.logspace(-6.0, 12.0, 10_000)


@dataclass(frozen=True)
class PrandtlParam:
    """Relaxation parameter nu and collision-frequency exponents.

    The collision frequency is ``rho**alpha * T**beta / (1 - nu)``.
    """

    nu: float
    alpha: float = 0.0
    beta: float = 0.0

    def __post_init__(self):
        nu = float(self.nu)
        if not (NU_MIN <= nu < NU_MAX) or math.isnan(nu):
            raise DomainError(f"nu must lie in [-1/2, 1), got {self.nu!r}")
        if not (self.alpha >= 0 and self.beta >= 0):
            raise DomainError("alpha and beta must be non-negative")
        object.__setattr__(self, "nu", nu)
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "beta", float(self.beta))

    def collision_frequency(self, rho: float, T: float) -> float:
        return rho**self.alpha * T**self.beta / (1.0 - self.nu)


def _nu(p) -> float:
    if isinstance(p, PrandtlParam):
        return p.nu
    return PrandtlParam(p).nu


def _x(x):
    x = np.asarray(x, dtype=float)
    if np.any(x < 0) or np.any(np.isnan(x)):
        raise DomainError("x must be non-negative")
    return x


def _out(v):
    return float(v) if np.ndim(v) == 0 else v


def g1(p, x):
    """Numerator of the coefficient ratio; non-negative, zero at x = 0."""
    nu = _nu(p)
    x = _x(x)
    s = 1.0 + x / 3.0
    arg = (nu * nu / 3.0) * (x / s) ** 2 * (1.0 + (3.0 - 2.0 * nu) * x / 9.0) / s
    # arg < 1 for nu in [-1/2, 1); equals 1 only in the limit x -> inf at nu = -1/2
    assert np.all(arg < 1.0), "log argument left the domain"
    return _out(-np.log1p(-arg))


def g2(x):
    """Denominator of the coefficient ratio; positive for x > 0."""
    x = _x(x)
    with np.errstate(over="ignore"):
        small = np.log1p(x * (x / 3.0) * ((1.0 + x / 9.0) / (1.0 + x)))
    # the product form overflows near x ~ 1e154; plain logs are exact out there
    big = 3.0 * np.log1p(x / 3.0) - np.log1p(x)
    return _out(np.where(x > 1e100, big, small))


def g_ratio(p, x):
    """``g1 / g2``; returns 0 at nu = 0 and at x = 0 (its nu = 0 value)."""
    nu = _nu(p)
    x = _x(x)
    if nu == 0.0:
        return _out(np.zeros_like(x))
    num = np.asarray(g1(nu, x))
    den = np.asarray(g2(x))
    with np.errstate(invalid="ignore", divide="ignore"):
        r = np.where(den > 0, num / np.where(den > 0, den, 1.0), nu * nu)
    return _out(r)


def g1_prime(p, x):
    nu = _nu(p)
    x = _x(x)
    a, b = (1.0 + 2.0 * nu) / 3.0, (1.0 - nu) / 3.0
    return _out((2.0 * nu * nu * x / 3.0) / ((1.0 + x / 3.0) * (1.0 + a * x) * (1.0 + b * x)))


def g2_prime(x):
    x = _x(x)
    return _out((2.0 * x / 3.0) / ((1.0 + x / 3.0) * (1.0 + x)))


def derivative_ratio(p, x):
    """``g1_prime / g2_prime`` in the simplified, 0/0-free form."""
    nu = _nu(p)
    x = _x(x)
    a, b = (1.0 + 2.0 * nu) / 3.0, (1.0 - nu) / 3.0
    return _out(nu * nu * (1.0 + x) / ((1.0 + a * x) * (1.0 + b * x)))


def derivative_ratio_slope(p, x):
    """x-derivative of :func:`derivative_ratio`."""
    nu = _nu(p)
    x = _x(x)
    a, b = (1.0 + 2.0 * nu) / 3.0, (1.0 - nu) / 3.0
    top = nu * nu * b * ((4.0 + 2.0 * nu) / 3.0 - a * (1.0 + x) ** 2)
    return _out(top / ((1.0 + a * x) ** 2 * (1.0 + b * x) ** 2))


def stationarity(p, x):
    """``g2 * g1' - g1 * g2'``; its sign is the sign of d/dx g_ratio."""
    return _out(
        np.asarray(g2(x)) * np.asarray(g1_prime(p, x))
        - np.asarray(g1(p, x)) * np.asarray(g2_prime(x))
    )


def _g1_over_nu2(nu, x):
    s = 1.0 + x / 3.0
    q = (x / s) ** 2 * (1.0 + (3.0 - 2.0 * nu) * x / 9.0) / (3.0 * s)
    if abs(nu) < 1e-100:
        return q
    return -math.log1p(-nu * nu * q) / (nu * nu)


def _psi(nu, x):
    # (stationarity / g2') / nu^2: same sign, closed-form slope, no underflow for tiny nu
    a, b = (1.0 + 2.0 * nu) / 3.0, (1.0 - nu) / 3.0
    return g2(x) * (1.0 + x) / ((1.0 + a * x) * (1.0 + b * x)) - _g1_over_nu2(nu, x)


def _psi_slope(nu, x):
    a, b = (1.0 + 2.0 * nu) / 3.0, (1.0 - nu) / 3.0
    top = b * ((4.0 + 2.0 * nu) / 3.0 - a * (1.0 + x) ** 2)
    return g2(x) * top / ((1.0 + a * x) ** 2 * (1.0 + b * x) ** 2)


def x_star(p) -> float:
    """Unique positive stationary point of :func:`derivative_ratio`."""
    nu = _nu(p)
    if nu == 0.0 or nu == NU_MIN:
        raise DomainError("x_star is defined only for nu in (-1/2, 0) U (0, 1)")
    return math.sqrt((4.0 + 2.0 * nu) / (1.0 + 2.0 * nu)) - 1.0


def closed_bound(p) -> float:
    nu = _nu(p)
    return nu * nu * (5.0 - 2.0 * nu) / 3.0


def legacy_bound(p) -> float:
    nu = _nu(p)
    return max(-2.0 * nu, nu)


class Maximizer(enum.Enum):
    ZERO = "zero"
    INTERIOR = "interior"
    AT_INFINITY = "at_infinity"


@dataclass(frozen=True)
class CnuResult:
    nu: float
    value: float
    maximizer: Maximizer
    x_nu: float | None
    closed_bound: float
    legacy_bound: float
    residual: float = 0.0
    iterations: int = 0
    grid_sup: float | None = field(default=None, compare=False)


def _solve_root(nu: float, tol: float) -> tuple[float, int]:
    lo = x_star(nu)
    if not _psi(nu, lo) > 0:
        raise BracketFailure(f"stationarity is not positive at x_star for nu={nu}")
    hi = 2.0 * max(lo, 1.0)
    while _psi(nu, hi) >= 0:
        lo = hi
        hi *= 2.0
        if hi > _X_BRACKET_LIMIT:
            raise BracketFailure(f"no sign change below x={_X_BRACKET_LIMIT:g} for nu={nu}")
    return bracketed_newton(
        lambda x: _psi(nu, x), lambda x: _psi_slope(nu, x), lo, hi, xtol=tol
    )


def compute_cnu(p, tol: float = 1e-10, check: bool = True) -> CnuResult:
    """Sharp coefficient C_nu together with its maximizer.

    nu = 0 and nu = -1/2 are answered analytically (0 and 1/2). Otherwise the
    unique interior maximizer x_nu > x_star is bracketed by doubling and then
    polished by Newton steps safeguarded with bisection.

    With ``check`` the result is compared against a dense log-spaced grid
    maximum and a ``RuntimeError`` is raised if the grid beats it.
    """
    nu = _nu(p)
    if tol <= 0:
        raise DomainError("tol must be positive")
    cb, lb = closed_bound(nu), legacy_bound(nu)
    if nu == 0.0:
        return CnuResult(nu, 0.0, Maximizer.ZERO, None, cb, lb)
    if nu == NU_MIN:
        return CnuResult(nu, 0.5, Maximizer.AT_INFINITY, None, cb, lb)

    x_nu, iterations = _solve_root(nu, tol)
    value = float(g_ratio(nu, x_nu))
    residual = float(stationarity(nu, x_nu))
    grid_sup = None
    if check:
        grid_sup = float(np.max(g_ratio(nu, _GRID_CHECK)))
        if value < grid_sup - 1e-8:
            raise RuntimeError(
                f"root value {value!r} below grid supremum {grid_sup!r} at nu={nu}"
            )
    return CnuResult(nu, value, Maximizer.INTERIOR, x_nu, cb, lb, residual, iterations, grid_sup)


@dataclass
class ProductInequalityReport:
    """Margins of ``(1+ax)(1+bx)^2 >= (1+x)^c (1+x/3)^(3(1-c))``.

    ``ratio_gap`` is ``closed_bound - g_ratio``, the same inequality in
    quotient form.
    """

    nu: float
    xs: np.ndarray
    lhs: np.ndarray
    rhs: np.ndarray
    margin: np.ndarray
    relative_margin: np.ndarray
    ratio_gap: np.ndarray

    @property
    def min_relative_margin(self) -> float:
        return float(self.relative_margin.min())

    @property
    def argmin_x(self) -> float:
        return float(self.xs[int(np.argmin(self.relative_margin))])

    @property
    def min_margin(self) -> float:
        return float(self.margin[int(np.argmin(self.relative_margin))])

    def passed(self, rtol: float = 1e-12) -> bool:
        return bool(np.all(self.margin >= -rtol * self.lhs))


def verify_product_inequality(p, xs) -> ProductInequalityReport:
    nu = _nu(p)
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    if xs.size == 0 or np.any(xs <= 0):
        raise DomainError("xs must be a non-empty array of positive reals")
    c = closed_bound(nu)
    s = 1.0 + xs / 3.0
    lhs = (1.0 + (1.0 + 2.0 * nu) * xs / 3.0) * (1.0 + (1.0 - nu) * xs / 3.0) ** 2
    # same operation order as lhs so both sides coincide bit-for-bit at nu = 0
    rhs = s * s**2 * ((1.0 + xs) / s**3) ** c
    margin = lhs - rhs
    return ProductInequalityReport(
        nu, xs, lhs, rhs, margin, margin / lhs, c - np.asarray(g_ratio(nu, xs))
    )
