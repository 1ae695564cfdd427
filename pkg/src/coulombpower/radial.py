"""Numerov shooting solver for -u'' + [l(l+1)/r^2 + V(r)] u = E u.

The eigenvalue is located on the Dirichlet problem u(r_min) ~ r_min^(l+1),
u(r_max) = 0.  Sturm's theorem makes the number of interior sign changes of
the outward solution equal to the number of box eigenvalues below E, so a
node-count bisection isolates level n, after which Brent's method on u(r_max)
polishes it.  r_max is chosen so that the WKB decay beyond the outer turning
point is at least exp(-decay_exponent), which makes the box error negligible.

Integration runs on a logarithmic mesh: with x = ln r and u = r^(1/2) w,

    w'' = [r^2 (V(r) - E) + (l + 1/2)^2] w,

whose coefficients stay smooth at the Coulomb singularity, and a single grid
resolves states from r ~ 1e-3 to r ~ 1e5.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import brentq

from .domain import QuantumNumbers, ReducedProblem, sgn

_RESCALE = 1e150
_R_CAP = 1e8


class SolverError(RuntimeError):
    kind = "SolverError"


class NoBracket(SolverError):
    kind = "NoBracket"


class NoConvergence(SolverError):
    kind = "NoConvergence"


class GridTooSmall(SolverError):
    kind = "GridTooSmall"


@dataclass(frozen=True)
class RadialGrid:
    r_max: float
    r_min: float = 1e-6
    steps: int = 20000

    def __post_init__(self):
        if not 0.0 < self.r_min < self.r_max:
            raise ValueError(f"need 0 < r_min < r_max, got {self.r_min}, {self.r_max}")
        if self.steps < 1000:
            raise ValueError(f"steps must be >= 1000, got {self.steps}")

    def points(self) -> np.ndarray:
        return np.geomspace(self.r_min, self.r_max, self.steps + 1)


@dataclass(frozen=True)
class ShootingConfig:
    energy_tolerance: float = 1e-12
    max_bisections: int = 200
    decay_exponent: float = 36.0
    tail_threshold: float = 1e-7
    r_min: float = 1e-6
    steps: int = 20000

    def __post_init__(self):
        if not self.energy_tolerance > 0.0:
            raise ValueError("energy_tolerance must be positive")


@dataclass
class Eigenstate:
    energy: float
    quantum: QuantumNumbers
    grid: RadialGrid
    nodes: int
    tail_ratio: float
    shots: int
    r: np.ndarray = field(repr=False)
    u: np.ndarray = field(repr=False)


class _Shooter:
    """Outward Numerov integration for one (V, l, grid) triple."""

    def __init__(self, potential, ell: int, grid: RadialGrid):
        self.grid = grid
        self.ell = ell
        r = grid.points()
        v = np.asarray(potential(r), dtype=float)
        if v.shape != r.shape:
            v = np.array([potential(float(x)) for x in r])
        if not np.all(np.isfinite(v)):
            raise ValueError("potential is not finite on the grid")
        h = math.log(grid.r_max / grid.r_min) / grid.steps
        r2 = r * r
        self._g = r2 * v + (ell + 0.5) ** 2
        self._s = r2
        self._start = r[:2] ** (ell + 0.5)
        self._c = h * h / 12.0
        self.r = r
        self.shots = 0

    def _factors(self, energy):
        k = self._g - energy * self._s
        f = 1.0 - self._c * k
        allowed = np.nonzero(k < 0.0)[0]
        last = int(allowed[-1]) if allowed.size else 0
        # past the outer turning point, a step longer than the decay length makes
        # the recurrence oscillate spuriously; the true solution only grows there
        unstable = np.nonzero(f[last:] < 0.5)[0]
        stop = last + int(unstable[0]) - 1 if unstable.size else len(f) - 1
        return f.tolist(), (12.0 - 10.0 * f).tolist(), max(stop, 2), last

    def shoot(self, energy: float) -> tuple[int, float]:
        """Number of sign changes and the sign-carrying end value."""
        self.shots += 1
        f, a, stop, _ = self._factors(energy)
        wp, w = float(self._start[0]), float(self._start[1])
        nodes = 0
        for i in range(1, stop):
            wn = (a[i] * w - f[i - 1] * wp) / f[i + 1]
            if wn * w < 0.0:
                nodes += 1
            wp, w = w, wn
            if abs(w) > _RESCALE:
                wp /= _RESCALE
                w /= _RESCALE
        return nodes, w

    def wavefunction(self, energy: float) -> np.ndarray:
        """u(r) at ``energy``, normalised to unit peak.

        Outward integration is only trusted up to the outer turning point; the
        tail comes from an inward sweep started at u(r_max) = 0 and is scaled to
        join continuously there.
        """
        f, a, _, join = self._factors(energy)
        size = len(f)
        join = min(max(join, 2), size - 3)
        out = np.empty(join + 1)
        out[0], out[1] = self._start
        for i in range(1, join):
            out[i + 1] = (a[i] * out[i] - f[i - 1] * out[i - 1]) / f[i + 1]
            if abs(out[i + 1]) > _RESCALE:
                out[: i + 2] /= _RESCALE
        inward = np.empty(size - join)
        inward[-1], inward[-2] = 0.0, 1e-30
        for j in range(size - 2, join, -1):
            o = j - join
            inward[o - 1] = (a[j] * inward[o] - f[j + 1] * inward[o + 1]) / f[j - 1]
            if abs(inward[o - 1]) > _RESCALE:
                inward[o - 1:] /= _RESCALE
        u = np.concatenate((out[:-1], inward * (out[-1] / inward[0]))) * np.sqrt(self.r)
        return u / np.max(np.abs(u))


def auto_r_max(potential, ell: int, energy: float, r_min: float = 1e-6,
               decay_exponent: float = 36.0) -> float:
    """Radius beyond the outer turning point where the WKB decay reaches exp(-decay)."""
    r = np.geomspace(r_min, _R_CAP, 40001)
    with np.errstate(over="ignore", invalid="ignore"):
        excess = ell * (ell + 1) / (r * r) + np.asarray(potential(r), dtype=float) - energy
    allowed = np.nonzero(excess < 0.0)[0]
    start = allowed[-1] + 1 if allowed.size else int(np.argmin(excess))
    if start >= r.size - 1:
        raise GridTooSmall(f"no classically forbidden tail below r={_R_CAP:g} at E={energy:.6g}")
    kappa = np.sqrt(np.maximum(excess[start:], 0.0))
    decay = np.concatenate(([0.0], np.cumsum(0.5 * (kappa[1:] + kappa[:-1]) * np.diff(r[start:]))))
    reached = np.nonzero(decay >= decay_exponent)[0]
    if not reached.size:
        raise GridTooSmall(f"wavefunction does not decay by exp(-{decay_exponent:g}) "
                           f"before r={_R_CAP:g} at E={energy:.6g}")
    return float(r[start + reached[0]])


def _count(shooter: _Shooter, energy: float) -> int:
    return shooter.shoot(energy)[0]


def _locate(shooter: _Shooter, target: int, lo: float, hi: float,
            config: ShootingConfig, tolerance: float) -> float:
    width = max(hi - lo, 1e-3 * (1.0 + abs(lo) + abs(hi)))
    n_lo, n_hi = _count(shooter, lo), _count(shooter, hi)
    expansions = 0
    while n_lo > target or n_hi <= target:
        expansions += 1
        if expansions > 60:
            raise NoBracket(f"node counts never straddle {target} "
                            f"(N({lo:.6g})={n_lo}, N({hi:.6g})={n_hi})")
        if n_lo > target:
            lo -= width
            n_lo = _count(shooter, lo)
        if n_hi <= target:
            hi += width
            n_hi = _count(shooter, hi)
        width *= 2.0
    for _ in range(config.max_bisections):
        if n_lo == target and n_hi == target + 1:
            break
        mid = 0.5 * (lo + hi)
        n_mid = _count(shooter, mid)
        if n_mid <= target:
            lo, n_lo = mid, n_mid
        else:
            hi, n_hi = mid, n_mid
    else:
        raise NoConvergence(f"node bisection did not isolate level {target + 1} "
                            f"in {config.max_bisections} steps")
    end = lambda e: shooter.shoot(e)[1]
    try:
        return brentq(end, lo, hi, xtol=tolerance, rtol=1e-15, maxiter=config.max_bisections)
    except RuntimeError as exc:
        raise NoConvergence(str(exc)) from exc


def solve(potential, quantum: QuantumNumbers, grid: RadialGrid | None = None,
          config: ShootingConfig | None = None,
          bracket: tuple[float, float] = (-1.0, 1.0)) -> Eigenstate:
    """Eigenstate (n, l) of -d2/dr2 + l(l+1)/r^2 + V(r).

    ``potential`` must accept numpy arrays.  ``bracket`` is only a starting
    guess; it is widened until the node counts straddle n - 1.  Without an
    explicit grid, r_max is fitted to the energy twice: once from the top of
    the bracket, then again from the located eigenvalue.
    """
    config = config or ShootingConfig()
    target = quantum.n - 1
    lo, hi = bracket
    shots = 0
    if grid is None:
        # keep the first ceiling below the continuum of potentials that vanish at infinity
        far = float(np.asarray(potential(np.array([1e6])), dtype=float)[0])
        if hi >= far:
            hi = far - 1e-3 * (1.0 + abs(lo))
            lo = min(lo, hi - 1e-3)
        coarse = RadialGrid(auto_r_max(potential, quantum.ell, hi, config.r_min, config.decay_exponent),
                            config.r_min, config.steps)
        shooter = _Shooter(potential, quantum.ell, coarse)
        rough = _locate(shooter, target, lo, hi, config, 1e-9 * (1.0 + abs(hi)))
        shots += shooter.shots
        grid = replace(coarse, r_max=auto_r_max(potential, quantum.ell, rough,
                                                config.r_min, config.decay_exponent))
        delta = 1e-6 * (1.0 + abs(rough))
        lo, hi = rough - delta, rough + delta
    shooter = _Shooter(potential, quantum.ell, grid)
    energy = _locate(shooter, target, lo, hi, config, config.energy_tolerance)
    u = shooter.wavefunction(energy)
    nodes = int(np.count_nonzero(u[1:-1] * u[2:] < 0.0))
    tail_index = int(np.searchsorted(grid.points(), 0.95 * grid.r_max))
    tail = float(np.max(np.abs(u[tail_index:-1]))) if tail_index < u.size - 1 else 0.0
    if tail > config.tail_threshold:
        raise GridTooSmall(f"|u| near r_max is {tail:.2e} of its peak (r_max={grid.r_max:.6g})")
    return Eigenstate(energy, quantum, grid, nodes, tail, shots + shooter.shots, shooter.r, u)


def eigenvalue(potential, quantum: QuantumNumbers, grid: RadialGrid | None = None,
               config: ShootingConfig | None = None,
               bracket: tuple[float, float] = (-1.0, 1.0)) -> float:
    return solve(potential, quantum, grid, config, bracket).energy


def power_potential(q: float):
    s = sgn(q)
    return lambda r: s * r**q


def _power_bracket(q: float, quantum: QuantumNumbers) -> tuple[float, float]:
    from .pnumbers import energy_from_p

    k = quantum.n + quantum.ell
    osc = 2 * quantum.n + quantum.ell - 0.5
    if q < -1.0:
        p_lo, p_hi = 0.5 * k, k
    elif q <= 2.0:
        p_lo, p_hi = k, osc
    else:
        p_lo, p_hi = osc, 2.0 * osc
    return energy_from_p(0.98 * p_lo, q), energy_from_p(1.02 * p_hi, q)


def solve_power(q: float, quantum: QuantumNumbers, grid: RadialGrid | None = None,
                config: ShootingConfig | None = None) -> Eigenstate:
    ReducedProblem(1.0, q)  # domain check
    return solve(power_potential(q), quantum, grid, config, _power_bracket(q, quantum))


def power_eigenvalue(q: float, quantum: QuantumNumbers, grid: RadialGrid | None = None,
                     config: ShootingConfig | None = None) -> float:
    """Level (n, l) of -Laplacian + sgn(q) r^q."""
    return solve_power(q, quantum, grid, config).energy


def _coulomb_power_bracket(reduced: ReducedProblem, quantum: QuantumNumbers) -> tuple[float, float]:
    from .envelope import EnvelopeParams, reduced_energy

    k = quantum.n + quantum.ell
    if reduced.power_q > 0.0:
        lo = reduced_energy(reduced, EnvelopeParams(k, k))
        hi = reduced_energy(reduced, EnvelopeParams(2 * k, 2 * k))
    else:
        lo = reduced_energy(reduced, EnvelopeParams(0.5 * k, 0.5 * k))
        hi = -0.25 / k**2
    pad = 1e-3 * (abs(lo) + abs(hi))
    return lo - pad, hi + (pad if reduced.power_q > 0.0 else 0.0)


def solve_coulomb_plus_power(reduced: ReducedProblem, quantum: QuantumNumbers,
                             grid: RadialGrid | None = None,
                             config: ShootingConfig | None = None) -> Eigenstate:
    return solve(reduced.potential(), quantum, grid, config,
                 _coulomb_power_bracket(reduced, quantum))


def coulomb_plus_power_eigenvalue(reduced: ReducedProblem, quantum: QuantumNumbers,
                                  grid: RadialGrid | None = None,
                                  config: ShootingConfig | None = None) -> float:
    """Level (n, l) of -Laplacian - 1/r + beta sgn(q) r^q."""
    return solve_coulomb_plus_power(reduced, quantum, grid, config).energy
