"""Log-gamma and the negative zeros of the Airy function Ai."""
from __future__ import annotations

import math

from scipy.special import airy

from .domain import DomainError


def ln_gamma(x: float) -> float:
    if not x > 0.0:
        raise DomainError(f"ln_gamma needs x > 0, got {x!r}")
    return math.lgamma(x)


def _airy_seed(k: int) -> float:
    # large-t expansion of a_k = -T(3 pi (4k-1) / 8)
    t = 3.0 * math.pi * (4 * k - 1) / 8.0
    t2 = t ** -2
    series = 1.0 + t2 * (5.0 / 48.0 + t2 * (-5.0 / 36.0 + t2 * (77125.0 / 82944.0)))
    return -(t ** (2.0 / 3.0)) * series


def airy_zero(k: int, tol: float = 1e-14, max_iter: int = 50) -> float:
    """The k-th zero of Ai on the negative real axis (a_1 = -2.3381...)."""
    if int(k) != k or k < 1:
        raise DomainError(f"Airy zero index must be an integer >= 1, got {k!r}")
    x = _airy_seed(int(k))
    for _ in range(max_iter):
        ai, aip, _, _ = airy(x)
        step = ai / aip
        x -= step
        if abs(step) <= tol * max(1.0, abs(x)):
            return x
    raise ArithmeticError(f"Newton refinement of Airy zero {k} did not converge")


def linear_eigen_l0(n: int) -> float:
    """Exact s-wave level n of -Laplacian + r, i.e. |a_n|."""
    return -airy_zero(n)
