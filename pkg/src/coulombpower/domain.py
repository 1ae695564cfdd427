"""Shared value types and the coupling-scaling reduction.

Everything here works in units with hbar^2/2m = 1, so the Hamiltonian is

    H = -omega * Laplacian - A/r + B * sgn(q) * r**q

and scaling r -> (omega/A) s maps it onto -Laplacian - 1/s + beta*sgn(q)*s**q.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass


class DomainError(ValueError):
    """Raised when parameters fall outside the supported family."""


def _check_power(q: float) -> None:
    if not math.isfinite(q) or q <= -2.0 or q == 0.0:
        raise DomainError(f"power q must satisfy q > -2 and q != 0, got {q!r}")


def sgn(x: float) -> float:
    return math.copysign(1.0, x)


@dataclass(frozen=True)
class PotentialParams:
    omega: float
    coulomb_a: float
    power_b: float
    power_q: float

    def __post_init__(self):
        for name in ("omega", "coulomb_a", "power_b"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise DomainError(f"{name} must be positive and finite, got {value!r}")
        _check_power(self.power_q)


@dataclass(frozen=True)
class ReducedProblem:
    beta: float
    power_q: float

    def __post_init__(self):
        if not (math.isfinite(self.beta) and self.beta > 0.0):
            raise DomainError(f"beta must be positive and finite, got {self.beta!r}")
        _check_power(self.power_q)

    def potential(self):
        """V(r) = -1/r + beta*sgn(q)*r**q, vectorised over numpy arrays."""
        beta, q = self.beta, self.power_q
        s = sgn(q)
        return lambda r: -1.0 / r + s * beta * r**q


@dataclass(frozen=True, order=True)
class QuantumNumbers:
    n: int
    ell: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise DomainError(f"n must be an integer >= 1, got {self.n!r}")
        if int(self.ell) != self.ell or self.ell < 0:
            raise DomainError(f"ell must be an integer >= 0, got {self.ell!r}")


@dataclass(frozen=True)
class PNumber:
    value: float
    q: float
    quantum: QuantumNumbers

    def __post_init__(self):
        if not (math.isfinite(self.value) and self.value > 0.0):
            raise DomainError(f"P-number must be positive, got {self.value!r}")

    def __float__(self):
        return float(self.value)


class BoundRule(enum.Enum):
    ENVELOPE_LOWER = "EnvelopeLower"
    SUM_LOWER = "SumLower"
    ENVELOPE_UPPER = "EnvelopeUpper"
    GAUSSIAN_UPPER = "GaussianUpper"
    VARIATIONAL_UPPER = "VariationalUpper"

    @property
    def is_lower(self) -> bool:
        return self in (BoundRule.ENVELOPE_LOWER, BoundRule.SUM_LOWER)


@dataclass(frozen=True)
class EnergyBracket:
    lower: float
    upper: float
    lower_rule: BoundRule
    upper_rule: BoundRule

    def __post_init__(self):
        if not self.lower <= self.upper:
            raise DomainError(f"bracket is inverted: lower={self.lower} > upper={self.upper}")

    def contains(self, energy: float, slack: float = 0.0) -> bool:
        return self.lower - slack <= energy <= self.upper + slack

    @property
    def width(self) -> float:
        return self.upper - self.lower


def reduce(params: PotentialParams) -> tuple[ReducedProblem, float]:
    """Map (omega, A, B, q) to the one-parameter problem.

    Returns the reduced problem and the energy scale A**2/omega, so that
    E_full = scale * E_reduced.
    """
    w, a, b, q = params.omega, params.coulomb_a, params.power_b, params.power_q
    beta = (b / w) * (w / a) ** (q + 2.0)
    return ReducedProblem(beta, q), a * a / w


def lift_energy(reduced_energy: float, energy_scale: float) -> float:
    if not energy_scale > 0.0:
        raise DomainError(f"energy scale must be positive, got {energy_scale!r}")
    return energy_scale * reduced_energy


def exact_hydrogen(params: PotentialParams, quantum: QuantumNumbers) -> float:
    """Pure Coulomb level -A^2 / (4 omega (n+l)^2); the power term is ignored."""
    k = quantum.n + quantum.ell
    return -params.coulomb_a**2 / (4.0 * params.omega * k * k)


def exact_oscillator(params: PotentialParams, quantum: QuantumNumbers) -> float:
    """Pure oscillator level sqrt(omega B) (4n + 2l - 1); Coulomb term and q ignored."""
    return math.sqrt(params.omega * params.power_b) * (4 * quantum.n + 2 * quantum.ell - 1)
