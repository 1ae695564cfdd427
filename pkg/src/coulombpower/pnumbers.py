"""P-numbers of the pure power-law spectrum.

For H = -Laplacian + sgn(q) r^q every level can be written exactly as

    E = min_r {1/r^2 + sgn(q) (P r)^q}
      = sgn(q) (1 + q/2) (2 P^2 / |q|)^(q / (2 + q)),

so a level and its P-number determine each other.  P_{nl}(q) is known in
closed form at q = -1 (n + l) and q = 2 (2n + l - 1/2), tabulated for
q = 1/2 and q = 1, and otherwise obtained by inverting a solver eigenvalue.
"""
from __future__ import annotations

import csv
import enum
import functools
import io
import math
from dataclasses import dataclass, field

from .domain import DomainError, PNumber, QuantumNumbers, ReducedProblem, sgn
from .specfun import ln_gamma


class Provenance(enum.Enum):
    EXACT_FORMULA = "ExactFormula"
    TABULATED = "Tabulated"
    SOLVER_INVERTED = "SolverInverted"
    GAUSSIAN_FORMULA = "GaussianFormula"


class OutOfTable(LookupError):
    kind = "OutOfTable"


# (n, l) -> (P(1/2), P(1)), printed to 6 significant figures
TABLE_1 = {
    (1, 0): (1.30266, 1.37608),
    (2, 0): (2.97387, 3.18131),
    (3, 0): (4.65440, 4.99255),
    (4, 0): (6.33742, 6.80514),
    (5, 0): (8.02149, 8.61823),
    (1, 1): (2.29747, 2.37192),
    (2, 1): (3.93966, 4.15501),
    (3, 1): (5.60154, 5.95300),
    (4, 1): (7.27194, 7.75701),
    (5, 1): (8.94679, 9.56408),
    (1, 2): (3.29535, 3.37018),
    (2, 2): (4.92261, 5.14135),
    (3, 2): (6.57089, 6.92911),
    (4, 2): (8.23022, 8.72515),
    (5, 2): (9.89619, 10.52596),
    (1, 3): (4.29424, 4.36923),
    (2, 3): (5.91240, 6.13298),
    (3, 3): (7.55077, 7.91304),
    (4, 3): (9.20118, 9.70236),
    (5, 3): (10.85929, 11.49748),
    (1, 4): (5.29352, 5.36863),
    (2, 4): (6.90560, 7.12732),
    (3, 4): (8.53658, 8.90148),
    (4, 4): (10.17964, 10.68521),
    (5, 4): (11.83110, 12.47532),
}
TABLE_QS = (0.5, 1.0)


def _check_q(q: float) -> None:
    ReducedProblem(1.0, q)


def energy_from_p(p: float, q: float) -> float:
    _check_q(q)
    p = float(p)
    if not p > 0.0:
        raise DomainError(f"P must be positive, got {p!r}")
    return sgn(q) * (1.0 + 0.5 * q) * (2.0 * p * p / abs(q)) ** (q / (2.0 + q))


def p_from_energy(e: float, q: float) -> float:
    _check_q(q)
    if e == 0.0 or sgn(e) != sgn(q):
        raise DomainError(f"energy {e!r} has the wrong sign for q={q!r}")
    base = e / (sgn(q) * (1.0 + 0.5 * q))
    return math.sqrt(0.5 * abs(q) * base ** ((2.0 + q) / q))


def p_exact(quantum: QuantumNumbers, q: float) -> PNumber:
    if q == -1.0:
        value = quantum.n + quantum.ell
    elif q == 2.0:
        value = 2 * quantum.n + quantum.ell - 0.5
    else:
        raise DomainError(f"closed-form P-numbers exist only for q = -1 and q = 2, got {q!r}")
    return PNumber(float(value), q, quantum)


def p_table(quantum: QuantumNumbers, q: float) -> PNumber:
    if q not in TABLE_QS:
        raise OutOfTable(f"the table holds q = 1/2 and q = 1 only, got q={q!r}")
    try:
        row = TABLE_1[(quantum.n, quantum.ell)]
    except KeyError:
        raise OutOfTable(f"(n={quantum.n}, l={quantum.ell}) is outside the table "
                         "(n <= 5, l <= 4)") from None
    return PNumber(row[TABLE_QS.index(q)], q, quantum)


@functools.lru_cache(maxsize=4096)
def _p_solved(n: int, ell: int, q_key: float) -> float:
    from .radial import power_eigenvalue

    return p_from_energy(power_eigenvalue(q_key, QuantumNumbers(n, ell)), q_key)


def p_general(quantum: QuantumNumbers, q: float) -> PNumber:
    """P_{nl}(q) from a direct solve of -Laplacian + sgn(q) r^q."""
    _check_q(q)
    return PNumber(_p_solved(quantum.n, quantum.ell, round(float(q), 12)), q, quantum)


def p_gaussian_upper(q: float) -> float:
    """Scale-optimised Gaussian P-number for the (1, 0) state."""
    _check_q(q)
    if not (3.0 + q) / 2.0 > 0.0:
        raise DomainError(f"Gaussian P-number needs q > -3, got {q!r}")
    log_bracket = math.log(2.0) + ln_gamma(0.5 * (3.0 + q)) - 0.5 * math.log(math.pi)
    return math.sqrt(1.5) * math.exp(log_bracket / q)


def p_number(quantum: QuantumNumbers, q: float, recompute: bool = False) -> tuple[PNumber, Provenance]:
    """Best available P_{nl}(q): closed form, then table, then solver."""
    if q in (-1.0, 2.0):
        return p_exact(quantum, q), Provenance.EXACT_FORMULA
    if not recompute and q in TABLE_QS and (quantum.n, quantum.ell) in TABLE_1:
        return p_table(quantum, q), Provenance.TABULATED
    return p_general(quantum, q), Provenance.SOLVER_INVERTED


@dataclass
class PTable:
    entries: dict = field(default_factory=dict)

    def add(self, p: PNumber, provenance: Provenance) -> None:
        self.entries[(p.quantum.n, p.quantum.ell, p.q)] = (p, provenance)

    def __len__(self):
        return len(self.entries)

    def rows(self):
        for key in sorted(self.entries):
            p, prov = self.entries[key]
            yield p.quantum.n, p.quantum.ell, p.q, p.value, prov.value

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["n", "ell", "q", "P", "provenance"])
        for n, ell, q, value, prov in self.rows():
            writer.writerow([n, ell, format(float(q), ".17g"), format(float(value), ".17g"), prov])
        return buf.getvalue()

    @classmethod
    def from_table_1(cls) -> "PTable":
        table = cls()
        for n, ell in TABLE_1:
            for q in TABLE_QS:
                table.add(p_table(QuantumNumbers(n, ell), q), Provenance.TABULATED)
        return table
