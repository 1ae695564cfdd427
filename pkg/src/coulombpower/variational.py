"""Variational upper bound for the lowest level of each angular momentum.

The trial function u(r) = r^(l+1) exp(-(x r)^d) turns the Rayleigh quotient of
-Laplacian - 1/r + beta sgn(q) r^q into

    E(x) = a1 x^2 - a2 x + a3 x^(-q),

with a1, a2, a3 depending on (l, d, q, beta) through Gamma-function ratios.
The optimal scale x solves x^(q+2) - (a2/2a1) x^(q+1) - q a3/(2 a1) = 0.  The
shape exponent d is optimised once for l = 0 and reused for l > 0, which keeps
every result a genuine upper bound.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.optimize import brentq, minimize_scalar

from .domain import DomainError, sgn
from .specfun import ln_gamma

D_WINDOW = (0.5, 3.0)


class NoRoot(ArithmeticError):
    kind = "NoRoot"


class DOptimizationFailed(ArithmeticError):
    kind = "DOptimizationFailed"


@dataclass(frozen=True)
class VariationalCoefficients:
    a1: float
    a2: float
    a3: float


@dataclass(frozen=True)
class VariationalBound:
    energy: float
    d_used: float
    x_used: float
    d_interior: bool = True


def coefficients(ell: int, q: float, d: float, beta: float) -> VariationalCoefficients:
    if not d > 0.0:
        raise DomainError(f"shape exponent d must be positive, got {d!r}")
    args = [(2 * ell + 1) / d, (2 * ell + 3) / d, (2 * ell + 2) / d, (2 * ell + q + 3) / d]
    if min(args) <= 0.0:
        raise DomainError(f"Gamma arguments {args} must all be positive (l={ell}, q={q}, d={d})")
    g1, g3, g2, gq = (ln_gamma(v) for v in args)
    a1 = math.exp((2.0 - 2.0 * d) / d * math.log(2.0) + g1 - g3) * (2 * ell + 1) * (2 * ell + d + 1)
    a2 = math.exp(math.log(2.0) / d + g2 - g3)
    a3 = sgn(q) * beta * math.exp(-q / d * math.log(2.0) + gq - g3)
    return VariationalCoefficients(a1, a2, a3)


def energy_at(coeffs: VariationalCoefficients, x: float, q: float) -> float:
    if not x > 0.0:
        raise DomainError(f"scale x must be positive, got {x!r}")
    return coeffs.a1 * x * x - coeffs.a2 * x + coeffs.a3 * x ** (-q)


def critical_residual(coeffs: VariationalCoefficients, x: float, q: float) -> float:
    c = coeffs.a2 / (2.0 * coeffs.a1)
    k = q * coeffs.a3 / (2.0 * coeffs.a1)
    return x ** (q + 2.0) - c * x ** (q + 1.0) - k


def optimal_x(coeffs: VariationalCoefficients, q: float) -> float:
    """Unique root beyond a2/(2 a1) of the stationarity condition in x.

    x^(q+1) (x - c) is increasing past c for every q > -2, and q a3 >= 0 for
    either sign of q, so a root exists whenever the right-hand side is finite.
    """
    c = coeffs.a2 / (2.0 * coeffs.a1)
    k = q * coeffs.a3 / (2.0 * coeffs.a1)
    if k < 0.0:
        raise NoRoot(f"q*a3 must be non-negative, got {q * coeffs.a3!r}")
    if k == 0.0:
        return c
    # work with t = ln x so the bracket can span many decades
    g = lambda t: (q + 1.0) * t + math.log(math.exp(t) - c) - math.log(k)
    lo_x = c * (1.0 + 1e-12)
    lo = math.log(lo_x)
    hi = math.log(max(2.0 * c, 1.0))
    for _ in range(200):
        if g(hi) > 0.0:
            break
        hi += 1.0
    else:
        raise NoRoot("could not bracket the optimal scale")
    if g(lo) >= 0.0:
        return lo_x
    t = brentq(g, lo, hi, xtol=1e-15, rtol=1e-15, maxiter=200)
    return math.exp(t)


def _best_over_x(ell, q, d, beta):
    coeffs = coefficients(ell, q, d, beta)
    x = optimal_x(coeffs, q)
    return energy_at(coeffs, x, q), x


def optimal_d(q: float, beta: float, window: tuple[float, float] = D_WINDOW,
              xatol: float = 1e-9) -> tuple[float, bool]:
    """Minimise the l = 0 bound over d; also reports whether d* is interior."""
    res = minimize_scalar(lambda d: _best_over_x(0, q, d, beta)[0], bounds=window,
                          method="bounded", options={"xatol": xatol, "maxiter": 500})
    if not res.success:
        raise DOptimizationFailed(res.message)
    d = float(res.x)
    edge = 1e3 * xatol
    interior = window[0] + edge < d < window[1] - edge
    return d, interior


def upper_bound(ell: int, q: float, beta: float, window: tuple[float, float] = D_WINDOW,
                require_interior: bool = True) -> VariationalBound:
    d, interior = optimal_d(q, beta, window)
    if require_interior and not interior:
        raise DOptimizationFailed(f"d* = {d:.6g} sits on the edge of the search window {window}")
    energy, x = _best_over_x(ell, q, d, beta)
    return VariationalBound(energy, d, x, interior)
