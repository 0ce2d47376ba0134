"""Command-line interface.

Usage::

    doubledelta solve --a 2
    doubledelta scan --a-min 0.5 --a-max 3 --steps 11 --format json
    doubledelta figure1 --a 2 --n 401
    doubledelta verify --a 2 --oracle both
    doubledelta wavefunction --a 2 --parity odd --u-min -4 --u-max 4 --n 9
    doubledelta multi --file array.txt

Every record carries ``schema_version``.  CSV output puts the record header
on ``#`` lines before the column header; JSON output is one object with a
``rows`` array.  Floats are written with 17 significant digits.

Exit codes: 0 success, 1 usage error, 2 verification failure, 3 solver failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .core import (
    DEFAULT_CONFIG,
    InvalidParametersError,
    Parity,
    PhysicalParams,
    SolverError,
    dimensionless_coupling,
    physical_energy,
)
from .eigenfunction import eigenfunction, sample_grid
from .fd_oracle import DEFAULT_WELL_WIDTH, bound_energies, default_hamiltonian
from .multidelta import DeltaArray, solve_spectrum
from .quantization import bound_states, count_bound_states, solve_even, solve_odd

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFY_FAILED = 2
EXIT_SOLVER_FAILED = 3

MULTIDELTA_XI_TOL = 1e-10
FD_ENERGY_REL_TOL = 2e-2
# Dirichlet box for the fd oracle: at least 20 decay lengths of the shallowest
# state past the wells, capped to keep the grid tractable.
FD_MIN_HALF_WIDTH = 20.0
FD_MAX_HALF_WIDTH = 200.0


class UsageError(Exception):
    pass


@dataclass
class OutputRecord:
    command: str
    inputs: dict
    columns: list[str]
    rows: list[dict] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    extra: dict = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)


def format_number(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if not math.isfinite(x):
        return "null"
    return format(x, ".17g")


def _json(value) -> str:
    # json.dumps cannot be told to use 17 significant digits for floats.
    if value is None:
        return "null"
    if isinstance(value, (bool, int, float, np.integer, np.floating)):
        return format_number(value)
    if isinstance(value, str):
        return json.dumps(value, ensure_ascii=False)
    if isinstance(value, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_json(v)}" for k, v in value.items()) + "}"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_json(v) for v in value) + "]"
    raise TypeError(f"cannot serialize {type(value).__name__}")


def render_json(record: OutputRecord) -> str:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "command": record.command,
        "inputs": record.inputs,
        "columns": record.columns,
        "rows": record.rows,
        "notes": record.notes,
        **record.extra,
        "metadata": record.metadata,
    }
    return _json(doc) + "\n"


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    return format_number(value)


def _kv(d: dict) -> str:
    return " ".join(f"{k}={_csv_cell(v)}" for k, v in d.items())


def render_csv(record: OutputRecord) -> str:
    out = io.StringIO()
    out.write(f"# schema_version={SCHEMA_VERSION}\n")
    out.write(f"# command={record.command}\n")
    out.write(f"# inputs {_kv(record.inputs)}\n")
    out.write(f"# metadata {_kv(record.metadata)}\n")
    for note in record.notes:
        out.write(f"# note {note}\n")
    for key, items in record.extra.items():
        for item in items:
            out.write(f"# {key} {_kv(item)}\n")
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(record.columns)
    for row in record.rows:
        writer.writerow([_csv_cell(row.get(c)) for c in record.columns])
    return out.getvalue()


def _metadata(**extra) -> dict:
    return {
        "tool_version": __version__,
        "abs_tolerance": DEFAULT_CONFIG.abs_tolerance,
        "max_iterations": DEFAULT_CONFIG.max_iterations,
        **extra,
    }


def _physical(args) -> PhysicalParams | None:
    given = [args.mass, args.alpha, args.L]
    if all(v is None for v in given):
        return None
    if any(v is None for v in given):
        raise UsageError("--mass, --alpha and --L must be given together")
    try:
        return PhysicalParams(args.mass, args.alpha, args.L, args.hbar)
    except InvalidParametersError as exc:
        raise UsageError(str(exc)) from exc


def _coupling(args) -> tuple[float, PhysicalParams | None]:
    params = _physical(args)
    if params is not None:
        if args.a is not None:
            raise UsageError("give either --a or --mass/--alpha/--L, not both")
        try:
            return dimensionless_coupling(params).a, params
        except InvalidParametersError as exc:
            raise UsageError(str(exc)) from exc
    if args.a is None:
        raise UsageError("--a is required")
    if not math.isfinite(args.a):
        raise UsageError(f"--a must be finite, got {args.a!r}")
    return args.a, None


def _no_state_note(a: float) -> str | None:
    if a < 0:
        return "repulsive: no bound states"
    if a == 0:
        return "a = 0 is a free particle: no bound states"
    if a <= 1:
        return "odd bound state requires a > 1"
    return None


def cmd_solve(args) -> tuple[OutputRecord, int]:
    a, params = _coupling(args)
    columns = ["parity", "xi", "energy_dimensionless"]
    if params is not None:
        columns.append("energy_physical")
    inputs = {"a": a}
    if params is not None:
        inputs.update(mass=params.mass, alpha=params.alpha, L=params.half_separation_L, hbar=params.hbar)
    record = OutputRecord("solve", inputs, columns, metadata=_metadata())
    for state in bound_states(a):
        row = {"parity": state.parity.value, "xi": state.xi, "energy_dimensionless": state.energy_dimensionless}
        if params is not None:
            row["energy_physical"] = physical_energy(state, params)
        record.rows.append(row)
    note = _no_state_note(a)
    if note:
        record.notes.append(note)
    return record, EXIT_OK


def cmd_scan(args) -> tuple[OutputRecord, int]:
    a_min, a_max, steps = args.a_min, args.a_max, args.steps
    if not (math.isfinite(a_min) and math.isfinite(a_max) and 0 < a_min <= a_max):
        raise UsageError("need 0 < a_min <= a_max")
    if steps < 2:
        raise UsageError("--steps must be >= 2")
    record = OutputRecord(
        "scan", {"a_min": a_min, "a_max": a_max, "steps": steps}, ["a", "xi_even", "xi_odd"], metadata=_metadata()
    )
    for a in np.linspace(a_min, a_max, steps).tolist():
        odd = solve_odd(a)
        record.rows.append({"a": a, "xi_even": solve_even(a).xi, "xi_odd": odd.xi if odd else None})
    return record, EXIT_OK


def curve_crossings(xi: np.ndarray, a: float) -> list[tuple[str, float]]:
    """Sign changes of ``exp(-2 xi) - |1 - 2 xi/a|`` on the grid, linearly interpolated.

    The touch at ``xi = 0`` is skipped.  Crossings below ``a/2`` lie on the
    odd branch, the others on the even branch.
    """
    diff = np.exp(-2.0 * xi) - np.abs(1.0 - 2.0 * xi / a)
    found = []
    for i in range(len(xi) - 1):
        d0, d1 = diff[i], diff[i + 1]
        if xi[i] <= 0.0 and d0 == 0.0:
            continue
        if d0 == 0.0 or d0 * d1 < 0:
            x = xi[i] if d0 == 0.0 else xi[i] - d0 * (xi[i + 1] - xi[i]) / (d1 - d0)
            found.append(("odd" if x < 0.5 * a else "even", float(x)))
    return found


def cmd_figure1(args) -> tuple[OutputRecord, int]:
    a, _ = _coupling(args)
    if a <= 0:
        raise UsageError("figure1 needs a > 0")
    xi_max = args.xi_max if args.xi_max is not None else 1.5 * a
    if not (math.isfinite(xi_max) and xi_max > 0) or args.n < 2:
        raise UsageError("need xi_max > 0 and n >= 2")
    xi = np.linspace(0.0, xi_max, args.n)
    exp_curve = np.exp(-2.0 * xi)
    line = np.abs(1.0 - 2.0 * xi / a)
    roots = {s.parity.value: s.xi for s in bound_states(a)}
    markers = {}
    for parity, root in roots.items():
        if root <= xi_max:
            markers[int(np.argmin(np.abs(xi - root)))] = parity
    crossings = dict(curve_crossings(xi, a))
    intersections = [
        {"parity": p, "xi_solver": r, "xi_curve": crossings.get(p)} for p, r in roots.items()
    ]
    record = OutputRecord(
        "figure1",
        {"a": a, "xi_max": xi_max, "n": args.n},
        ["xi", "exp_neg_2xi", "abs_one_minus_2xi_over_a", "marker"],
        extra={"intersections": intersections},
        metadata=_metadata(grid_step=xi[1] - xi[0]),
    )
    for i, (x, e, l) in enumerate(zip(xi.tolist(), exp_curve.tolist(), line.tolist())):
        record.rows.append({"xi": x, "exp_neg_2xi": e, "abs_one_minus_2xi_over_a": l, "marker": markers.get(i, "")})
    return record, EXIT_OK


def _fd_half_width(states) -> float:
    if not states:
        return FD_MIN_HALF_WIDTH
    xi_min = min(s.xi for s in states)
    return min(FD_MAX_HALF_WIDTH, max(FD_MIN_HALF_WIDTH, math.ceil(2.0 + 20.0 / xi_min)))


def _verify_rows(oracle: str, states, values, quantity: str, tol: float, relative: bool) -> list[dict]:
    rows = [{
        "oracle": oracle, "parity": "", "quantity": "count",
        "closed_form": len(states), "oracle_value": len(values),
        "abs_diff": abs(len(states) - len(values)), "tolerance": 0, "criterion": "exact",
        "passed": len(states) == len(values),
    }]
    for state, value in zip(states, values):
        ref = state.xi if quantity == "xi" else state.energy_dimensionless
        diff = abs(value - ref)
        scale = abs(ref) if relative else 1.0
        rows.append({
            "oracle": oracle, "parity": state.parity.value, "quantity": quantity,
            "closed_form": ref, "oracle_value": value, "abs_diff": diff, "tolerance": tol,
            "criterion": "rel" if relative else "abs", "passed": diff <= tol * scale,
        })
    return rows


def cmd_verify(args) -> tuple[OutputRecord, int]:
    a, _ = _coupling(args)
    states = bound_states(a)
    n_even, n_odd = count_bound_states(a)
    if len(states) != n_even + n_odd:
        raise SolverError("closed-form solver disagrees with the bound-state count")
    columns = ["oracle", "parity", "quantity", "closed_form", "oracle_value", "abs_diff", "tolerance", "criterion", "passed"]
    meta = {}
    rows = []
    if args.oracle in ("multidelta", "both"):
        levels = solve_spectrum(DeltaArray.double_delta(a))
        rows += _verify_rows("multidelta", states, [lv.kappa for lv in levels], "xi", MULTIDELTA_XI_TOL, False)
    if args.oracle in ("fd", "both"):
        half_width = _fd_half_width(states)
        H = default_hamiltonian(a, domain_half_width=half_width)
        meta.update(fd_domain_half_width=half_width, fd_well_width=DEFAULT_WELL_WIDTH, fd_h=H.h)
        rows += _verify_rows("fd", states, bound_energies(H), "energy", FD_ENERGY_REL_TOL, True)
    record = OutputRecord("verify", {"a": a, "oracle": args.oracle}, columns, rows, metadata=_metadata(**meta))
    note = _no_state_note(a)
    if note:
        record.notes.append(note)
    ok = all(r["passed"] for r in rows)
    record.notes.append("all checks passed" if ok else "verification FAILED")
    return record, EXIT_OK if ok else EXIT_VERIFY_FAILED


def cmd_wavefunction(args) -> tuple[OutputRecord, int]:
    a, _ = _coupling(args)
    parity = Parity(args.parity)
    if a <= 0:
        raise UsageError(f"no bound state for a = {a!r} <= 0")
    if parity is Parity.ODD:
        state = solve_odd(a)
        if state is None:
            raise UsageError(f"odd bound state requires a > 1 (got a = {a!r})")
    else:
        state = solve_even(a)
    fn = eigenfunction(state)
    try:
        u, phi = sample_grid(fn, args.u_min, args.u_max, args.n)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    record = OutputRecord(
        "wavefunction",
        {"a": a, "parity": parity.value, "u_min": args.u_min, "u_max": args.u_max, "n": args.n},
        ["u", "phi"],
        extra={"state": [{"parity": parity.value, "xi": state.xi, "norm_const": fn.norm_const}]},
        metadata=_metadata(),
    )
    record.rows = [{"u": x, "phi": y} for x, y in zip(u.tolist(), phi.tolist())]
    return record, EXIT_OK


def cmd_multi(args) -> tuple[OutputRecord, int]:
    try:
        arr = DeltaArray.from_file(args.file)
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read delta array from {args.file}: {exc}") from exc
    record = OutputRecord(
        "multi",
        {"file": str(args.file), "n_deltas": len(arr)},
        ["index", "kappa", "energy_dimensionless"],
        metadata=_metadata(),
    )
    for i, level in enumerate(solve_spectrum(arr)):
        record.rows.append({"index": i, "kappa": level.kappa, "energy_dimensionless": level.energy_dimensionless})
    if not record.rows:
        record.notes.append("no bound states")
    return record, EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_common(p, coupling=True):
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    if coupling:
        p.add_argument("--a", type=float, help="dimensionless coupling 2 m alpha L / hbar^2")
        g = p.add_argument_group("physical parameters (alternative to --a)")
        g.add_argument("--mass", type=float)
        g.add_argument("--alpha", type=float, help="delta strength; > 0 is attractive")
        g.add_argument("--L", type=float, help="half separation of the deltas")
        g.add_argument("--hbar", type=float, default=1.0)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="doubledelta", description="Bound states of symmetric Dirac-delta potentials.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="bound states for one coupling")
    _add_common(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("scan", help="xi_even and xi_odd over a range of couplings")
    _add_common(p, coupling=False)
    p.add_argument("--a-min", type=float, required=True)
    p.add_argument("--a-max", type=float, required=True)
    p.add_argument("--steps", type=int, default=11)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("figure1", help="both sides of exp(-2 xi) = |1 - 2 xi/a| on a grid")
    _add_common(p)
    p.add_argument("--xi-max", type=float, default=None)
    p.add_argument("--n", type=int, default=301)
    p.set_defaults(func=cmd_figure1)

    p = sub.add_parser("verify", help="compare closed forms against the numerical oracles")
    _add_common(p)
    p.add_argument("--oracle", choices=["multidelta", "fd", "both"], default="both")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("wavefunction", help="sample a normalized eigenfunction")
    _add_common(p)
    p.add_argument("--parity", choices=[x.value for x in Parity], default="even")
    p.add_argument("--u-min", type=float, default=-4.0)
    p.add_argument("--u-max", type=float, default=4.0)
    p.add_argument("--n", type=int, default=201)
    p.set_defaults(func=cmd_wavefunction)

    p = sub.add_parser("multi", help="spectrum of a delta array read from a file")
    _add_common(p, coupling=False)
    p.add_argument("--file", required=True, help="lines of 'position strength'; '#' comments")
    p.set_defaults(func=cmd_multi)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        record, code = args.func(args)
    except UsageError as exc:
        print(f"doubledelta {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SolverError as exc:
        print(f"doubledelta {args.command}: solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER_FAILED
    text = render_json(record) if args.format == "json" else render_csv(record)
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
