# coding: utf-8

# # P-numbers of the pure power law
#
# A level of -Laplacian + sgn(q) r^q can be packed into a single number P, and
# the packing is exact. Here we look at the closed forms, the embedded table,
# and a fresh solve.

import numpy as np

from coulombpower import QuantumNumbers, energy_from_p, p_from_energy, p_number, power_eigenvalue
from coulombpower.pnumbers import TABLE_1, p_gaussian_upper

# Closed forms exist at q = -1 (hydrogen) and q = 2 (oscillator):

for n, ell in [(1, 0), (2, 1), (3, 2)]:
    qn = QuantumNumbers(n, ell)
    print(n, ell, p_number(qn, -1.0)[0].value, p_number(qn, 2.0)[0].value)

# The linear potential: the ground state energy is minus the first Airy zero,
# and inverting it gives back the tabulated P.

e10 = power_eigenvalue(1.0, QuantumNumbers(1, 0))
print(e10, p_from_energy(e10, 1.0), TABLE_1[(1, 0)][1])

# P grows smoothly with q for fixed (n, l):

qs = np.array([-1.5, -1.0, -0.5, 0.5, 1.0, 2.0, 3.0])
ps = [p_number(QuantumNumbers(1, 0), q)[0].value for q in qs]
for q, p in zip(qs, ps):
    print(f"q={q:5.2f}  P={p:.6f}  E={energy_from_p(p, q):.6f}")

# The Gaussian trial function gives its own (upper) P for the ground state.

print(p_gaussian_upper(2.0), p_gaussian_upper(1.0), p_gaussian_upper(-1.0))
