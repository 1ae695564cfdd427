"""Command-line front end.

Subcommands: pnum, bounds, exact, figure, table1, sweep.  Record-style output
shares one CSV header (or one JSON object per line with --json).  Exit status
is 0 on success, 1 on usage errors and 2 on numerical failures, in which case
a JSON diagnostic with the error kind goes to stderr.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, replace
from pathlib import Path

import numpy as np

from . import envelope, pnumbers, radial, variational
from .domain import DomainError, PotentialParams, QuantumNumbers, ReducedProblem, reduce

OUTPUT_DIR_ENV = "COULOMBPOWER_OUTPUT_DIR"
CONFIG_KEYS = {"grid_steps": int, "r_max": float, "r_min": float, "tol": float}

VALUE_KINDS = ("EX", "EU", "EL", "ELS", "EGU", "EC", "P")
KIND_LABELS = {
    envelope.BoundKind.ENVELOPE_LOWER: "EL",
    envelope.BoundKind.ENVELOPE_UPPER: "EU",
    envelope.BoundKind.SUM_LOWER: "ELS",
    envelope.BoundKind.GAUSSIAN_UPPER: "EGU",
}
LOWER_LABELS = ("EL", "ELS")
UPPER_LABELS = ("EU", "EGU", "EC")
FIGURE_Q = {1: 2.0, 2: 1.0, 3: 0.5}
FIGURE_FIELDS = ("ell", "beta", "EU", "ELS", "EGU", "EC", "EX")
TABLE1_FIELDS = ("n", "ell", "q", "fixture", "computed", "rel_diff", "within_tol")
TABLE1_TOL = 1e-4


class UsageError(Exception):
    pass


@dataclass
class OutputRecord:
    n: int | None
    ell: int | None
    q: float
    beta: float | None
    value_kind: str
    value: float
    provenance: str = ""
    mu: float | None = None
    nu: float | None = None
    d_used: float | None = None
    x_used: float | None = None
    steps: int | None = None
    r_max: float | None = None
    tail_ratio: float | None = None
    bracket: str = ""

    def __post_init__(self):
        if self.value_kind not in VALUE_KINDS:
            raise ValueError(f"unknown value kind {self.value_kind!r}")
        if not math.isfinite(self.value):
            raise ValueError(f"{self.value_kind} value is not finite: {self.value!r}")


RECORD_FIELDS = tuple(OutputRecord.__dataclass_fields__)


def fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def render_records(records, as_json: bool) -> str:
    if as_json:
        return "".join(json.dumps(asdict(r)) + "\n" for r in records)
    return _csv_text(RECORD_FIELDS, ([getattr(r, f) for f in RECORD_FIELDS] for r in records))


def resolve_output(path: str | None) -> Path | None:
    if path is None:
        return None
    p = Path(path)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not p.is_absolute():
        p = Path(base) / p
    return p


def write_atomic(path: Path, text: str) -> None:
    """Write via a temporary sibling so a failure never leaves a partial file."""
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def emit(text: str, out: Path | None, stdout) -> None:
    if out is None:
        stdout.write(text)
    else:
        write_atomic(out, text)


def load_config(path: str | None) -> dict:
    """key=value solver overrides; '#' starts a comment."""
    if path is None:
        return {}
    settings = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in CONFIG_KEYS:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            settings[key] = CONFIG_KEYS[key](value)
        except ValueError:
            raise UsageError(f"{path}:{lineno}: bad value for {key}: {value!r}") from None
    return settings


def solver_settings(args) -> tuple[radial.ShootingConfig, float | None]:
    settings = load_config(getattr(args, "config", None))
    for key in CONFIG_KEYS:
        flag = getattr(args, key, None)
        if flag is not None:
            settings[key] = flag
    config = radial.ShootingConfig()
    if "grid_steps" in settings:
        config = replace(config, steps=settings["grid_steps"])
    if "r_min" in settings:
        config = replace(config, r_min=settings["r_min"])
    if "tol" in settings:
        config = replace(config, energy_tolerance=settings["tol"])
    return config, settings.get("r_max")


def _grid(config: radial.ShootingConfig, r_max: float | None):
    if r_max is None:
        return None
    return radial.RadialGrid(r_max, config.r_min, config.steps)


# -- computations shared by several subcommands ------------------------------------

def exact_record(q, beta, quantum, config, r_max=None, pure_power=False, scale=1.0) -> OutputRecord:
    grid = _grid(config, r_max)
    if pure_power:
        state = radial.solve_power(q, quantum, grid, config)
    else:
        state = radial.solve_coulomb_plus_power(ReducedProblem(beta, q), quantum, grid, config)
    return OutputRecord(quantum.n, quantum.ell, q, None if pure_power else beta, "EX",
                        scale * state.energy, "solver", steps=state.grid.steps,
                        r_max=state.grid.r_max, tail_ratio=state.tail_ratio)


def bound_records(q, beta, quantum, scale=1.0, with_variational=True) -> list[OutputRecord]:
    reduced = ReducedProblem(beta, q)
    records = []
    for kind in envelope.allowed_kinds(quantum):
        env = envelope.bound_params(q, quantum, kind)
        value = envelope.reduced_energy(reduced, env)
        records.append(OutputRecord(quantum.n, quantum.ell, q, beta, KIND_LABELS[kind],
                                    scale * value, kind.value, mu=env.mu, nu=env.nu))
    if with_variational and quantum.n == 1:
        vb = variational.upper_bound(quantum.ell, q, beta)
        records.append(OutputRecord(quantum.n, quantum.ell, q, beta, "EC", scale * vb.energy,
                                    "VariationalUpper", d_used=vb.d_used, x_used=vb.x_used))
    return records


def mark_bracket(records) -> None:
    lowers = [r for r in records if r.value_kind in LOWER_LABELS]
    uppers = [r for r in records if r.value_kind in UPPER_LABELS]
    if lowers:
        max(lowers, key=lambda r: r.value).bracket = "lower"
    if uppers:
        min(uppers, key=lambda r: r.value).bracket = "upper"


def hydrogen_limit_records(q, quantum, scale=1.0) -> list[OutputRecord]:
    """beta = 0: every bound collapses onto the exact Coulomb level."""
    energy = -scale * 0.25 / (quantum.n + quantum.ell) ** 2
    labels = [KIND_LABELS[k] for k in envelope.allowed_kinds(quantum)]
    if quantum.n == 1:
        labels.append("EC")
    return [OutputRecord(quantum.n, quantum.ell, q, 0.0, lab, energy, "HydrogenLimit")
            for lab in labels]


# -- subcommands -------------------------------------------------------------------

def cmd_pnum(args, stdout, stderr=sys.stderr) -> int:
    if args.gaussian:
        value = pnumbers.p_gaussian_upper(args.q)
        records = [OutputRecord(1, 0, args.q, None, "P", value,
                                pnumbers.Provenance.GAUSSIAN_FORMULA.value)]
        emit(render_records(records, args.json), resolve_output(args.out), stdout)
        return 0
    if args.table and args.n is None and args.ell is None:
        table = pnumbers.PTable.from_table_1()
        emit(table.to_csv(), resolve_output(args.out), stdout)
        return 0
    if args.n is None or args.ell is None:
        raise UsageError("pnum needs --n and --ell (or --table alone / --gaussian)")
    quantum = QuantumNumbers(args.n, args.ell)
    if args.table:
        p, prov = pnumbers.p_table(quantum, args.q), pnumbers.Provenance.TABULATED
    elif args.solve:
        p, prov = pnumbers.p_general(quantum, args.q), pnumbers.Provenance.SOLVER_INVERTED
    else:
        p, prov = pnumbers.p_number(quantum, args.q)
    records = [OutputRecord(quantum.n, quantum.ell, args.q, None, "P", p.value, prov.value)]
    emit(render_records(records, args.json), resolve_output(args.out), stdout)
    return 0


def _reduced_inputs(args) -> tuple[float, float]:
    """(beta, energy scale) from either --beta or --omega/--A/--B."""
    full = [args.omega, args.A, args.B]
    if any(v is not None for v in full):
        if args.beta is not None:
            raise UsageError("give either --beta or --omega/--A/--B, not both")
        if any(v is None for v in full):
            raise UsageError("--omega, --A and --B must be given together")
        reduced, scale = reduce(PotentialParams(args.omega, args.A, args.B, args.q))
        return reduced.beta, scale
    if args.beta is None:
        raise UsageError("missing --beta (or --omega/--A/--B)")
    if args.beta < 0.0:
        raise UsageError("--beta must be non-negative")
    return args.beta, 1.0


def cmd_bounds(args, stdout, stderr=sys.stderr) -> int:
    quantum = QuantumNumbers(args.n, args.ell)
    beta, scale = _reduced_inputs(args)
    ReducedProblem(1.0, args.q)
    if beta == 0.0:
        records = hydrogen_limit_records(args.q, quantum, scale)
    else:
        records = bound_records(args.q, beta, quantum, scale)
        if not envelope.direction_verified(args.q):
            print(json.dumps({"diagnostic": "UnverifiedDirection",
                              "message": f"bound directions for q={args.q} are not cross-checked"}),
                  file=stderr)
    mark_bracket(records)
    emit(render_records(records, args.json), resolve_output(args.out), stdout)
    return 0


def cmd_exact(args, stdout, stderr=sys.stderr) -> int:
    quantum = QuantumNumbers(args.n, args.ell)
    config, r_max = solver_settings(args)
    if args.pure_power:
        record = exact_record(args.q, None, quantum, config, r_max, pure_power=True)
    else:
        beta, scale = _reduced_inputs(args)
        if beta == 0.0:
            record = OutputRecord(quantum.n, quantum.ell, args.q, 0.0, "EX",
                                  -scale * 0.25 / (quantum.n + quantum.ell) ** 2, "HydrogenLimit")
        else:
            record = exact_record(args.q, beta, quantum, config, r_max, scale=scale)
    emit(render_records([record], args.json), resolve_output(args.out), stdout)
    return 0


def beta_grid(beta_min, beta_max, points, spacing) -> np.ndarray:
    if not 0.0 < beta_min < beta_max:
        raise UsageError("need 0 < beta-min < beta-max")
    if points < 2:
        raise UsageError("need at least 2 points")
    if spacing == "log":
        return np.geomspace(beta_min, beta_max, points)
    return np.linspace(beta_min, beta_max, points)


def _figure_row(task):
    q, ell, beta, star, config = task
    quantum = QuantumNumbers(1, ell)
    row = {"ell": ell, "beta": float(beta)}
    for rec in bound_records(q, beta, quantum):
        row[rec.value_kind] = rec.value
    row["EX"] = exact_record(q, beta, quantum, config).value if star else None
    return [row.get(f) for f in FIGURE_FIELDS]


def _run(tasks, fn, jobs):
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, tasks))
    return [fn(t) for t in tasks]


def figure_csv(figure_id, betas, star_every, config, jobs=1) -> str:
    q = FIGURE_Q[figure_id]
    tasks = [(q, ell, b, i % star_every == 0 or i == len(betas) - 1, config)
             for ell in (0, 1, 2) for i, b in enumerate(betas)]
    return _csv_text(FIGURE_FIELDS, _run(tasks, _figure_row, jobs))


def cmd_figure(args, stdout, stderr=sys.stderr) -> int:
    if args.id not in FIGURE_Q:
        raise UsageError("--id must be 1, 2 or 3")
    config, _ = solver_settings(args)
    betas = beta_grid(args.beta_min, args.beta_max, args.points, args.spacing)
    text = figure_csv(args.id, betas, max(1, args.star_every), config, args.jobs)
    emit(text, resolve_output(args.out), stdout)
    return 0


def _table1_row(task):
    n, ell, q = task
    fixture = pnumbers.TABLE_1[(n, ell)][pnumbers.TABLE_QS.index(q)]
    try:
        computed = pnumbers.p_general(QuantumNumbers(n, ell), q).value
    except (radial.SolverError, ArithmeticError) as exc:
        print(json.dumps({"row": [n, ell, q], "error": getattr(exc, "kind", type(exc).__name__),
                          "message": str(exc)}), file=sys.stderr)
        return [n, ell, q, fixture, None, None, False]
    rel = computed / fixture - 1.0
    return [n, ell, q, fixture, computed, rel, abs(rel) <= TABLE1_TOL]


def table1_rows(jobs=1):
    tasks = [(n, ell, q) for q in pnumbers.TABLE_QS for (n, ell) in pnumbers.TABLE_1]
    return _run(tasks, _table1_row, jobs)


def cmd_table1(args, stdout, stderr=sys.stderr) -> int:
    rows = table1_rows(args.jobs)
    emit(_csv_text(TABLE1_FIELDS, rows), resolve_output(args.out), stdout)
    return 0 if all(r[-1] for r in rows) else 2


def parse_states(text: str) -> list[QuantumNumbers]:
    states = []
    for chunk in text.replace(";", " ").split():
        try:
            n, ell = (int(v) for v in chunk.split(","))
        except ValueError:
            raise UsageError(f"bad state {chunk!r}; expected n,ell") from None
        states.append(QuantumNumbers(n, ell))
    if not states:
        raise UsageError("no states given")
    return states


def _sweep_point(task):
    q, beta, quantum, exact, config = task
    records = bound_records(q, beta, quantum)
    mark_bracket(records)
    if exact:
        records.append(exact_record(q, beta, quantum, config))
    return records


def cmd_sweep(args, stdout, stderr=sys.stderr) -> int:
    config, _ = solver_settings(args)
    betas = beta_grid(args.beta_min, args.beta_max, args.points, args.spacing)
    states = parse_states(args.states)
    ReducedProblem(1.0, args.q)
    tasks = [(args.q, float(b), s, args.exact, config) for s in states for b in betas]
    records = [rec for chunk in _run(tasks, _sweep_point, args.jobs) for rec in chunk]
    emit(render_records(records, args.json), resolve_output(args.out), stdout)
    return 0


# -- argument parsing --------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    fmt_group = common.add_mutually_exclusive_group()
    fmt_group.add_argument("--json", action="store_true", help="one JSON object per record")
    fmt_group.add_argument("--csv", action="store_true", help="CSV output (default)")
    common.add_argument("--out", metavar="PATH", help=f"output file (relative to ${OUTPUT_DIR_ENV} if set)")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps")

    solver = _Parser(add_help=False)
    solver.add_argument("--tol", type=float, help="energy tolerance of the shooting solver")
    solver.add_argument("--grid-steps", dest="grid_steps", type=int, help="Numerov steps")
    solver.add_argument("--r-max", dest="r_max", type=float, help="fixed outer radius")
    solver.add_argument("--r-min", dest="r_min", type=float, help="inner radius")
    solver.add_argument("--config", metavar="FILE", help="key=value solver settings")

    state = _Parser(add_help=False)
    state.add_argument("--n", type=int, default=1)
    state.add_argument("--ell", type=int, default=0)

    coupling = _Parser(add_help=False)
    coupling.add_argument("--q", type=float, required=True)
    coupling.add_argument("--beta", type=float)
    coupling.add_argument("--omega", type=float)
    coupling.add_argument("--A", type=float)
    coupling.add_argument("--B", type=float)

    grid = _Parser(add_help=False)
    grid.add_argument("--beta-min", dest="beta_min", type=float, default=0.01)
    grid.add_argument("--beta-max", dest="beta_max", type=float, default=100.0)
    grid.add_argument("--points", type=int, default=41)
    grid.add_argument("--spacing", choices=("log", "linear"), default="log")

    parser = _Parser(prog="coulombpower", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("pnum", parents=[common], help="P-numbers")
    p.add_argument("--n", type=int)
    p.add_argument("--ell", type=int)
    p.add_argument("--q", type=float)
    how = p.add_mutually_exclusive_group()
    how.add_argument("--table", action="store_true", help="use the embedded table")
    how.add_argument("--solve", action="store_true", help="invert a solver eigenvalue")
    how.add_argument("--gaussian", action="store_true", help="Gaussian upper P-number (n=1, l=0)")
    p.set_defaults(func=cmd_pnum)

    p = sub.add_parser("bounds", parents=[common, state, coupling], help="all bounds at one point")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("exact", parents=[common, solver, state, coupling], help="direct eigenvalue")
    p.add_argument("--pure-power", dest="pure_power", action="store_true",
                   help="solve -Laplacian + sgn(q) r^q without the Coulomb term")
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("figure", parents=[common, solver, grid], help="curve data for figure 1, 2 or 3")
    p.add_argument("--id", type=int, required=True)
    p.add_argument("--star-every", dest="star_every", type=int, default=5,
                   help="solve EX at every k-th beta")
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("table1", parents=[common], help="regenerate the P-number table")
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("sweep", parents=[common, solver, grid], help="bounds over a beta grid")
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--states", default="1,0", help="space separated n,ell pairs")
    p.add_argument("--exact", action="store_true", help="also solve EX at each point")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if args.command == "pnum" and args.q is None and not (args.table and args.n is None):
            raise UsageError("pnum needs --q")
        if getattr(args, "jobs", 1) < 1:
            raise UsageError("--jobs must be >= 1")
        return args.func(args, stdout, stderr)
    except (UsageError, DomainError, pnumbers.OutOfTable) as exc:
        kind = getattr(exc, "kind", "UsageError")
        print(json.dumps({"error": kind, "message": str(exc)}), file=stderr)
        return 1
    except (radial.SolverError, ArithmeticError, envelope.InvalidKind) as exc:
        kind = getattr(exc, "kind", type(exc).__name__)
        print(json.dumps({"error": kind, "message": str(exc)}), file=stderr)
        return 2
    except OSError as exc:
        print(json.dumps({"error": "IOError", "message": str(exc)}), file=stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
