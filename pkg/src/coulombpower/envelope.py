"""Semiclassical min-formula and the envelope / sum / Gaussian bounds.

All bounds share one formula,

    E(mu, nu) = min_{r>0} { omega/r^2 - A/(mu r) + B sgn(q) (nu r)^q },

and differ only in the (mu, nu) pair fed to it.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from scipy.optimize import brentq

from .domain import DomainError, PotentialParams, QuantumNumbers, ReducedProblem, sgn
from .pnumbers import p_gaussian_upper, p_number

LOG_R_WINDOW = (math.log(1e-6), math.log(1e6))
_LOG_LIMIT = 700.0


class NoMinimum(ArithmeticError):
    kind = "NoMinimum"


class InvalidKind(ValueError):
    kind = "InvalidKind"


class BoundKind(enum.Enum):
    ENVELOPE_LOWER = "EnvelopeLower"
    ENVELOPE_UPPER = "EnvelopeUpper"
    SUM_LOWER = "SumLower"
    GAUSSIAN_UPPER = "GaussianUpper"

    @property
    def is_lower(self) -> bool:
        return self in (BoundKind.ENVELOPE_LOWER, BoundKind.SUM_LOWER)


@dataclass(frozen=True)
class EnvelopeParams:
    mu: float
    nu: float

    def __post_init__(self):
        if not (self.mu > 0.0 and self.nu > 0.0):
            raise DomainError(f"mu and nu must be positive, got {self.mu!r}, {self.nu!r}")


def _objective(w, a, b, q, mu, nu):
    s = sgn(q)
    return lambda r: w / (r * r) - a / (mu * r) + b * s * (nu * r) ** q


def semiclassical_energy(params: PotentialParams, env: EnvelopeParams,
                         log_window: tuple[float, float] = LOG_R_WINDOW) -> float:
    return _minimise(params.omega, params.coulomb_a, params.power_b, params.power_q,
                     env.mu, env.nu, log_window)


def _minimise(w, a, b, q, mu, nu, log_window=LOG_R_WINDOW):
    # r^3 f'(r) = -2w + (a/mu) r + b|q| nu^q r^(q+2) is increasing in r for q > -2,
    # so the stationary point is unique and it is the global minimum.
    def slope(t):
        try:
            return -2.0 * w + (a / mu) * math.exp(t) + b * abs(q) * math.exp(q * math.log(nu) + (q + 2.0) * t)
        except OverflowError:
            return math.inf

    lo, hi = log_window
    while slope(lo) > 0.0 and lo > -_LOG_LIMIT:
        lo -= 10.0
    while slope(hi) < 0.0 and hi < _LOG_LIMIT:
        hi += 10.0
    if not slope(lo) <= 0.0 <= slope(hi):
        raise NoMinimum(f"derivative has no sign change for ln r in [{lo:.4g}, {hi:.4g}]")
    t_star = brentq(slope, lo, hi, xtol=1e-14, rtol=1e-15, maxiter=500)
    return _objective(w, a, b, q, mu, nu)(math.exp(t_star))


def reduced_energy(reduced: ReducedProblem, env: EnvelopeParams) -> float:
    """Min-formula for -Laplacian - 1/r + beta sgn(q) r^q."""
    return _minimise(1.0, 1.0, reduced.beta, reduced.power_q, env.mu, env.nu)


def bound_params(q: float, quantum: QuantumNumbers, kind: BoundKind) -> EnvelopeParams:
    """The (mu, nu) pair that turns the min-formula into the requested bound."""
    n, ell = quantum.n, quantum.ell
    if kind is BoundKind.ENVELOPE_LOWER:
        return EnvelopeParams(n + ell, n + ell)
    if kind is BoundKind.ENVELOPE_UPPER:
        p = p_number(quantum, q)[0].value
        return EnvelopeParams(p, p)
    if kind is BoundKind.SUM_LOWER:
        if n != 1:
            raise InvalidKind("the sum approximation applies only to n = 1")
        return EnvelopeParams(ell + 1, p_number(quantum, q)[0].value)
    if kind is BoundKind.GAUSSIAN_UPPER:
        if n != 1 or ell != 0:
            raise InvalidKind("the Gaussian upper bound applies only to n = 1, l = 0")
        return EnvelopeParams(p_gaussian_upper(-1.0), p_gaussian_upper(q))
    raise InvalidKind(f"unknown bound kind {kind!r}")


def bound(reduced: ReducedProblem, quantum: QuantumNumbers, kind: BoundKind) -> float:
    return reduced_energy(reduced, bound_params(reduced.power_q, quantum, kind))


def direction_verified(q: float) -> bool:
    """Whether the lower/upper labels have been checked against direct solves.

    For -2 < q < 0 the bound directions come from the same convexity argument
    but are only reported, not asserted.
    """
    return q > 0.0


def allowed_kinds(quantum: QuantumNumbers) -> list[BoundKind]:
    kinds = [BoundKind.ENVELOPE_LOWER, BoundKind.ENVELOPE_UPPER]
    if quantum.n == 1:
        kinds.append(BoundKind.SUM_LOWER)
        if quantum.ell == 0:
            kinds.append(BoundKind.GAUSSIAN_UPPER)
    return kinds


def parametric_curve(q: float, env: EnvelopeParams, r_values) -> list[tuple[float, float]]:
    """(beta, E) pairs traced by the stationary point of the min-formula.

    Eliminating beta between f(r) and f'(r) = 0 gives E as a function of the
    minimiser r; points with beta <= 0 are dropped.
    """
    if not q > -1.0 or q == 0.0:
        raise DomainError(f"parametric form needs q > -1 and q != 0, got {q!r}")
    mu, nu = env.mu, env.nu
    out = []
    for r in r_values:
        if not r > 0.0:
            raise DomainError(f"radii must be positive, got {r!r}")
        drive = 2.0 / (r * r) - 1.0 / (mu * r)
        beta = drive / (abs(q) * (nu * r) ** q)
        if beta > 0.0:
            energy = (1.0 + 2.0 / q) / (r * r) - (1.0 + 1.0 / q) / (mu * r)
            out.append((beta, energy))
    return out
