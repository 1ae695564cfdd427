"""Spectral bounds for -omega*Laplacian - A/r + B*sgn(q)*r^q in three dimensions."""
from .domain import (
    BoundRule,
    DomainError,
    EnergyBracket,
    PNumber,
    PotentialParams,
    QuantumNumbers,
    ReducedProblem,
    exact_hydrogen,
    exact_oscillator,
    lift_energy,
    reduce,
)
from .envelope import BoundKind, EnvelopeParams, bound, parametric_curve, semiclassical_energy
from .pnumbers import energy_from_p, p_exact, p_from_energy, p_gaussian_upper, p_general, p_number, p_table
from .radial import coulomb_plus_power_eigenvalue, eigenvalue, power_eigenvalue
from .variational import upper_bound

__version__ = "0.1.0"
