import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from coulombpower import DomainError, PotentialParams, QuantumNumbers, ReducedProblem
from coulombpower.envelope import (
    BoundKind,
    EnvelopeParams,
    InvalidKind,
    allowed_kinds,
    bound,
    bound_params,
    direction_verified,
    parametric_curve,
    reduced_energy,
    semiclassical_energy,
)
from coulombpower.pnumbers import p_gaussian_upper

from _oracle import ex, min_formula_oracle

Q = QuantumNumbers


def test_pure_coulomb_limit():
    e = semiclassical_energy(PotentialParams(1, 1, 1e-30, 1), EnvelopeParams(1, 1))
    assert e == pytest.approx(-0.25, abs=1e-8)


def test_pure_oscillator_limit():
    e = semiclassical_energy(PotentialParams(1, 1e-30, 1, 2), EnvelopeParams(1, 1.5))
    assert e == pytest.approx(3.0, abs=1e-8)


def test_matches_golden_section_oracle_at_beta_one():
    p = 1.37608
    e = semiclassical_energy(PotentialParams(1, 1, 1, 1), EnvelopeParams(p, p))
    assert e == pytest.approx(min_formula_oracle(1, 1, 1, 1, p, p), abs=1e-10)
    assert e == pytest.approx(bound(ReducedProblem(1, 1), Q(1, 0), BoundKind.ENVELOPE_UPPER), rel=1e-14)


@settings(max_examples=60, deadline=None)
@given(w=st.floats(0.2, 5), a=st.floats(0.2, 5), b=st.floats(0.01, 50),
       q=st.sampled_from([-1.5, -0.5, 0.5, 1.0, 2.0, 3.0]),
       mu=st.floats(0.5, 6), nu=st.floats(0.5, 6))
def test_min_formula_matches_oracle(w, a, b, q, mu, nu):
    e = semiclassical_energy(PotentialParams(w, a, b, q), EnvelopeParams(mu, nu))
    oracle = min_formula_oracle(w, a, b, q, mu, nu, math.log(1e-5), math.log(1e5))
    assert e <= oracle + 1e-12 * (1 + abs(oracle))
    assert e == pytest.approx(oracle, rel=1e-10, abs=1e-12)


def test_bound_parameters():
    gu = bound_params(2.0, Q(1, 0), BoundKind.GAUSSIAN_UPPER)
    assert gu.mu == pytest.approx(1.08540, abs=1e-5) and gu.nu == pytest.approx(1.5, abs=1e-12)
    sl = bound_params(1.0, Q(1, 1), BoundKind.SUM_LOWER)
    assert (sl.mu, sl.nu) == (2, 2.37192)
    el = bound_params(0.5, Q(3, 2), BoundKind.ENVELOPE_LOWER)
    assert (el.mu, el.nu) == (5, 5)
    eu = bound_params(0.5, Q(3, 2), BoundKind.ENVELOPE_UPPER)
    assert (eu.mu, eu.nu) == (6.57089, 6.57089)


@pytest.mark.parametrize("kind, quantum", [
    (BoundKind.SUM_LOWER, Q(2, 0)),
    (BoundKind.GAUSSIAN_UPPER, Q(1, 1)),
    (BoundKind.GAUSSIAN_UPPER, Q(2, 0)),
])
def test_invalid_kinds(kind, quantum):
    with pytest.raises(InvalidKind):
        bound(ReducedProblem(1, 1), quantum, kind)
    assert kind not in allowed_kinds(quantum)


@pytest.mark.parametrize("q", [0.5, 1.0, 2.0, -0.5])
def test_lower_kinds_recover_hydrogen(q):
    for ell in (0, 1, 2):
        red = ReducedProblem(1e-12, q)
        target = -0.25 / (1 + ell) ** 2
        assert bound(red, Q(1, ell), BoundKind.ENVELOPE_LOWER) == pytest.approx(target, abs=1e-9)
        assert bound(red, Q(1, ell), BoundKind.SUM_LOWER) == pytest.approx(target, abs=1e-9)


def test_upper_kinds_tend_to_their_own_coulomb_value():
    # with mu = P(q) the beta -> 0 limit is -1/(4 mu^2), strictly above hydrogen
    red = ReducedProblem(1e-12, 1.0)
    assert bound(red, Q(1, 0), BoundKind.ENVELOPE_UPPER) == pytest.approx(-0.25 / 1.37608**2, abs=1e-9)
    assert bound(red, Q(1, 0), BoundKind.GAUSSIAN_UPPER) == pytest.approx(
        -0.25 / p_gaussian_upper(-1.0) ** 2, abs=1e-9)


def test_parametric_hydrogen_endpoint():
    mu = 1.37608
    # at r = 2 mu the drive 2/r^2 - 1/(mu r) vanishes: beta = 0 is excluded ...
    assert parametric_curve(1.0, EnvelopeParams(mu, mu), [2 * mu]) == []
    # ... and just inside it the curve meets the pure-Coulomb value
    beta, e = parametric_curve(1.0, EnvelopeParams(mu, mu), [2 * mu * (1 - 1e-9)])[0]
    assert beta > 0 and e == pytest.approx(-0.25 / mu**2, abs=1e-8)


def test_parametric_matches_direct_minimisation():
    env = EnvelopeParams(1.5, 1.5)
    for beta, e in parametric_curve(2.0, env, np.geomspace(0.05, 2.9, 40)):
        assert e == pytest.approx(reduced_energy(ReducedProblem(beta, 2.0), env), abs=1e-8)


def test_parametric_beta_increases_as_r_shrinks():
    mu = 1.37608
    r = np.linspace(2 * mu, 0.05, 200)[1:]
    betas = [b for b, _ in parametric_curve(1.0, EnvelopeParams(mu, mu), r)]
    assert len(betas) == len(r)
    assert all(b2 > b1 for b1, b2 in zip(betas, betas[1:]))


def test_parametric_rejects_bad_input():
    with pytest.raises(DomainError):
        parametric_curve(-1.0, EnvelopeParams(1, 1), [1.0])
    with pytest.raises(DomainError):
        parametric_curve(1.0, EnvelopeParams(1, 1), [0.0])


GRID_Q = (0.5, 1.0, 2.0)
GRID_BETA = (0.01, 0.1, 1.0, 10.0, 100.0)


@pytest.mark.parametrize("q", GRID_Q)
@pytest.mark.parametrize("n", [2, 3])
def test_excited_states_are_bracketed(q, n):
    for beta in GRID_BETA:
        red = ReducedProblem(beta, q)
        for ell in (0, 1, 2):
            e = ex(q, beta, n, ell)
            assert bound(red, Q(n, ell), BoundKind.ENVELOPE_LOWER) <= e + 1e-9
            assert e <= bound(red, Q(n, ell), BoundKind.ENVELOPE_UPPER) + 1e-9


@pytest.mark.parametrize("beta", GRID_BETA)
def test_gaussian_upper_at_q2(beta):
    assert ex(2.0, beta, 1, 0) <= bound(ReducedProblem(beta, 2.0), Q(1, 0), BoundKind.GAUSSIAN_UPPER)


def test_direction_flag():
    assert direction_verified(0.5) and not direction_verified(-0.5)
