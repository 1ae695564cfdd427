# coding: utf-8

# # Bounds for Coulomb plus power
#
# For -Laplacian - 1/r + beta r^q we compare every bound with a direct
# Numerov solve across a range of couplings.

import numpy as np

from coulombpower import BoundKind, QuantumNumbers, ReducedProblem, bound, coulomb_plus_power_eigenvalue
from coulombpower.variational import upper_bound

q = 1.0
betas = np.geomspace(0.01, 100, 9)

print(f"{'beta':>8} {'EL':>10} {'ELS':>10} {'EX':>10} {'EC':>10} {'EU':>10} {'EGU':>10}")
for beta in betas:
    red = ReducedProblem(beta, q)
    qn = QuantumNumbers(1, 0)
    row = [
        bound(red, qn, BoundKind.ENVELOPE_LOWER),
        bound(red, qn, BoundKind.SUM_LOWER),
        coulomb_plus_power_eigenvalue(red, qn),
        upper_bound(0, q, beta).energy,
        bound(red, qn, BoundKind.ENVELOPE_UPPER),
        bound(red, qn, BoundKind.GAUSSIAN_UPPER),
    ]
    print(f"{beta:8.3g} " + " ".join(f"{v:10.5f}" for v in row))

# The sum approximation is the sharper lower bound, and the variational value
# sits closest to the exact level from above.

# ## Physical units
#
# With omega, A, B given, the problem reduces to one coupling beta and an
# energy scale A^2/omega.

from coulombpower import PotentialParams, reduce

red, scale = reduce(PotentialParams(omega=2.0, coulomb_a=1.0, power_b=3.0, power_q=1.0))
print(red.beta, scale, scale * coulomb_plus_power_eigenvalue(red, QuantumNumbers(1, 0)))
