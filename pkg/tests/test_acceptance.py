"""Acceptance criteria, each at its stated tolerance.

Run with ``pytest tests/test_acceptance.py -v``; the terminal summary prints
one PASS/FAIL line per criterion.
"""
import math
import time

import numpy as np
import pytest
from scipy.special import ai_zeros

from coulombpower import PotentialParams, QuantumNumbers, ReducedProblem, reduce
from coulombpower import radial
from coulombpower.envelope import (
    BoundKind,
    EnvelopeParams,
    bound,
    parametric_curve,
    reduced_energy,
    semiclassical_energy,
)
from coulombpower.pnumbers import (
    TABLE_1,
    TABLE_QS,
    _p_solved,
    p_exact,
    p_from_energy,
    p_gaussian_upper,
    p_general,
)
from coulombpower.specfun import airy_zero
from coulombpower.variational import coefficients, critical_residual, energy_at, upper_bound

from _oracle import ex

Q = QuantumNumbers
GRID_Q = (0.5, 1.0, 2.0)
GRID_BETA = (0.01, 0.1, 1.0, 10.0, 100.0)
SLACK = 1e-9

# maxima of (EC - EX)/|EX| per (q, l) over the sandwich grid, from the first
# full run, rounded up in the third significant figure
GAP_THRESHOLDS = {
    (0.5, 0): 4.17e-4, (0.5, 1): 4.28e-3, (0.5, 2): 9.14e-3,
    (1.0, 0): 7.71e-2, (1.0, 1): 5.72e-2, (1.0, 2): 1.85e-2,
    (2.0, 0): 9.82e-3, (2.0, 1): 3.89e-2, (2.0, 2): 3.06e-2,
}


# -- 1 ------------------------------------------------------------------------------

@pytest.mark.criterion(1, "P-number table regenerated by solver inversion")
def test_table_reproduction():
    _p_solved.cache_clear()
    start = time.perf_counter()
    worst = 0.0
    for (n, ell), values in TABLE_1.items():
        for q, printed in zip(TABLE_QS, values):
            computed = p_general(Q(n, ell), q).value
            rel = abs(computed / printed - 1.0)
            worst = max(worst, rel)
            assert rel <= 1e-4, f"P({n},{ell}; q={q}) = {computed} vs {printed}"
    elapsed = time.perf_counter() - start
    print(f"50 values, worst relative difference {worst:.2e}, {elapsed:.1f} s")
    assert elapsed < 60.0


# -- 2 ------------------------------------------------------------------------------

ANCHOR_PARAMS = [(1.0, 1.0, 1.0), (2.0, 3.0, 5.0), (0.5, 0.7, 0.2)]
ANCHOR_STATES = [Q(n, ell) for n in (1, 2, 3) for ell in (0, 1, 2)]


@pytest.mark.criterion(2, "hydrogen and oscillator closed forms")
@pytest.mark.parametrize("w, a, b", ANCHOR_PARAMS)
def test_closed_forms_by_solver(w, a, b):
    for quantum in ANCHOR_STATES:
        k = quantum.n + quantum.ell
        hydrogen = -a * a / (4.0 * w * k * k)
        got = w * radial.eigenvalue(lambda r: -(a / w) / r, quantum, bracket=(4 * hydrogen / w, 0.25 * hydrogen / w))
        assert got == pytest.approx(hydrogen, abs=1e-6)
        osc = math.sqrt(w * b) * (4 * quantum.n + 2 * quantum.ell - 1)
        got = w * radial.eigenvalue(lambda r: (b / w) * r * r, quantum, bracket=(0.5 * osc / w, 2 * osc / w))
        assert got == pytest.approx(osc, abs=1e-6)


@pytest.mark.criterion(2, "hydrogen and oscillator closed forms")
@pytest.mark.parametrize("w, a, b", ANCHOR_PARAMS)
def test_closed_forms_by_envelope(w, a, b):
    for quantum in ANCHOR_STATES:
        k = quantum.n + quantum.ell
        p = p_exact(quantum, -1.0).value
        e = semiclassical_energy(PotentialParams(w, a, 1e-300, 2.0), EnvelopeParams(p, p))
        assert e == pytest.approx(-a * a / (4.0 * w * k * k), abs=1e-12)
        p = p_exact(quantum, 2.0).value
        e = semiclassical_energy(PotentialParams(w, 1e-300, b, 2.0), EnvelopeParams(p, p))
        assert e == pytest.approx(math.sqrt(w * b) * (4 * quantum.n + 2 * quantum.ell - 1), abs=1e-12)


# -- 3 ------------------------------------------------------------------------------

@pytest.mark.criterion(3, "linear potential against Airy zeros")
def test_linear_anchor():
    scipy_zeros = ai_zeros(5)[0]
    for n in range(1, 6):
        e = radial.power_eigenvalue(1.0, Q(n, 0))
        # scipy's tabulated zeros carry errors near 1e-11 for n = 5
        assert abs(airy_zero(n) - scipy_zeros[n - 1]) <= 1e-9
        assert e == pytest.approx(-airy_zero(n), abs=1e-6)
    e10 = radial.power_eigenvalue(1.0, Q(1, 0))
    assert p_from_energy(e10, 1.0) == pytest.approx(1.37608, abs=1e-4)


# -- 4 ------------------------------------------------------------------------------

@pytest.mark.criterion(4, "bound sandwich")
@pytest.mark.parametrize("q", GRID_Q)
@pytest.mark.parametrize("beta", GRID_BETA)
def test_bound_sandwich(q, beta):
    red = ReducedProblem(beta, q)
    violations = []
    for ell in (0, 1, 2):
        e = ex(q, beta, 1, ell)
        el = bound(red, Q(1, ell), BoundKind.ENVELOPE_LOWER)
        els = bound(red, Q(1, ell), BoundKind.SUM_LOWER)
        eu = bound(red, Q(1, ell), BoundKind.ENVELOPE_UPPER)
        ec = upper_bound(ell, q, beta).energy
        chain = [("EL<=ELS", el, els), ("ELS<=EX", els, e), ("EX<=EU", e, eu), ("EX<=EC", e, ec)]
        if ell == 0:
            chain.append(("EX<=EGU", e, bound(red, Q(1, 0), BoundKind.GAUSSIAN_UPPER)))
        violations += [(1, ell, name, x, y) for name, x, y in chain if x > y + SLACK]
    for n in (2, 3):
        for ell in (0, 1, 2):
            e = ex(q, beta, n, ell)
            el = bound(red, Q(n, ell), BoundKind.ENVELOPE_LOWER)
            eu = bound(red, Q(n, ell), BoundKind.ENVELOPE_UPPER)
            violations += [(n, ell, name, x, y) for name, x, y in
                           [("EL<=EX", el, e), ("EX<=EU", e, eu)] if x > y + SLACK]
    assert violations == []


# -- 5 ------------------------------------------------------------------------------

@pytest.mark.criterion(5, "exactness degeneracies at q = 2")
@pytest.mark.parametrize("beta", GRID_BETA)
def test_envelope_upper_exact_at_q2(beta):
    red = ReducedProblem(beta, 2.0)
    for ell in (0, 1, 2):
        eu = bound(red, Q(1, ell), BoundKind.ENVELOPE_UPPER)
        assert eu == pytest.approx(ex(2.0, beta, 1, ell), abs=1e-6)


@pytest.mark.criterion(5, "exactness degeneracies at q = 2")
def test_gaussian_p_number_at_q2():
    assert p_gaussian_upper(2.0) == pytest.approx(1.5, abs=1e-12)


# -- 6 ------------------------------------------------------------------------------

def _random_tuples(count=20, seed=20240611):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        w, a, b = rng.uniform(0.3, 3.0, size=3)
        q = float(rng.choice([-1.5, -0.5, 0.5, 1.0, 1.5, 2.0, 3.0]))
        out.append((float(w), float(a), float(b), q))
    return out


@pytest.mark.criterion(6, "scaling identity")
@pytest.mark.parametrize("w, a, b, q", _random_tuples())
def test_scaling_identity(w, a, b, q):
    quantum = Q(1, 0)
    red, scale = reduce(PotentialParams(w, a, b, q))
    s = math.copysign(1.0, q)
    direct_potential = lambda r: (-a / r + b * s * r**q) / w
    lo, hi = radial._coulomb_power_bracket(red, quantum)
    direct = w * radial.eigenvalue(direct_potential, quantum, bracket=(scale * lo / w, scale * hi / w))
    reduced = scale * ex(q, red.beta, 1, 0)
    assert direct == pytest.approx(reduced, rel=1e-6)


# -- 7 ------------------------------------------------------------------------------

@pytest.mark.criterion(7, "parametric curve against the min-formula")
@pytest.mark.parametrize("q", GRID_Q)
def test_parametric_consistency(q):
    mu = TABLE_1[(1, 0)][TABLE_QS.index(q)] if q in TABLE_QS else p_exact(Q(1, 0), q).value
    env = EnvelopeParams(mu, mu)
    points = parametric_curve(q, env, np.geomspace(0.02, 2 * mu * (1 - 1e-6), 100))
    assert len(points) == 100
    worst = max(abs(e - reduced_energy(ReducedProblem(beta, q), env)) for beta, e in points)
    assert worst <= 1e-8


# -- 8 ------------------------------------------------------------------------------

@pytest.mark.criterion(8, "variational stationarity")
@pytest.mark.parametrize("q", GRID_Q)
@pytest.mark.parametrize("beta", GRID_BETA)
def test_variational_stationarity(q, beta):
    b = upper_bound(0, q, beta)
    c = coefficients(0, q, b.d_used, beta)
    assert abs(critical_residual(c, b.x_used, q)) <= 1e-10 * b.x_used ** (q + 2.0)
    h = 1e-6
    e = lambda d: energy_at(coefficients(0, q, d, beta), b.x_used, q)
    slope = (e(b.d_used + h) - e(b.d_used - h)) / (2 * h)
    assert abs(slope) <= 1e-6 * (abs(b.energy) + 1.0)


# -- 9 ------------------------------------------------------------------------------

@pytest.mark.criterion(9, "variational gap regression")
@pytest.mark.parametrize("q", GRID_Q)
@pytest.mark.parametrize("ell", (0, 1, 2))
def test_variational_gap(q, ell):
    gaps = [(upper_bound(ell, q, beta).energy - ex(q, beta, 1, ell)) / abs(ex(q, beta, 1, ell))
            for beta in GRID_BETA]
    print(f"q={q} l={ell} max gap {max(gaps):.6e}")
    assert min(gaps) >= -SLACK
    assert max(gaps) <= GAP_THRESHOLDS[(q, ell)]
