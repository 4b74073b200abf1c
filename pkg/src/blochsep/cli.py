"""Command-line entry point: ``blochsep {analyze,scan,witness,catalog,verify}``.

Exit codes: 0 separable (certified), 1 entangled, 2 inconclusive, 3 usage or
input error, 4 internal inconsistency.
"""

from __future__ import annotations

import argparse
import csv
import io as _stdio
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import ALL_CRITERIA, oracle_check, overall_verdict, run_criteria
from .bloch import Convention, to_bloch
from .catalog import CATALOG, build
from .certificates import verify_decomposition
from .criteria import DECISION_TOL, Verdict
from .errors import BlochSepError, NumericalInconsistency, UsageError, ValidationError
from .io import (REPORT_FORMAT, decomposition_from_json, decomposition_to_json, index_key,
                 matrix_to_json, read_state, state_to_json, write_json)
from .linalg import DEFAULT_TOL, DensityMatrix
from .witnesses import WitnessMode, build_witness, evaluate_witness, offset_preset, random_sign_witnesses

EXIT_CODES = {Verdict.SEPARABLE_CERTIFIED: 0, Verdict.ENTANGLED: 1, Verdict.INCONCLUSIVE: 2}
EXIT_ERROR = 3
EXIT_INCONSISTENT = 4
BISECT_TOL = 1e-12


def _shape_arg(text: str) -> list[int]:
    try:
        shape = [int(p) for p in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad shape {text!r}; expected e.g. 2,4")
    return shape


def _criteria_arg(text: str) -> list[str]:
    names = [c.strip() for c in text.split(",") if c.strip()]
    for c in names:
        if c not in ALL_CRITERIA:
            raise argparse.ArgumentTypeError(f"unknown criterion {c!r}")
    return names


def _param(text: str) -> tuple[str, float]:
    if "=" not in text:
        raise argparse.ArgumentTypeError(f"expected key=value, got {text!r}")
    k, v = text.split("=", 1)
    try:
        return k.strip(), float(v)
    except ValueError:
        raise argparse.ArgumentTypeError(f"value for {k} is not a number: {v!r}")


def _jsonable(v):
    if isinstance(v, dict):
        return {(index_key(k) if isinstance(k, tuple) else str(k)): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, np.ndarray):
        return _jsonable(v.tolist())
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.floating):
        return float(v)
    return v


def _emit(text: str, path) -> None:
    if path is None or str(path) == "-":
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        Path(path).write_text(text if text.endswith("\n") else text + "\n")


# --- analyze ---------------------------------------------------------------

def build_report(rho: DensityMatrix, source: str, criteria=None, ps=(1, 2),
                 tol: float = DEFAULT_TOL, include_decompositions: bool = True) -> dict:
    records = run_criteria(rho, criteria, ps, DECISION_TOL)
    verdict = overall_verdict(records)
    oracle = oracle_check(rho, verdict)
    tilde = to_bloch(rho, Convention.TILDE)
    out_records = []
    for r in records:
        rec = {
            "criterion": r.criterion,
            "verdict": r.verdict.value,
            "lhs": float(r.lhs),
            "bound": float(r.bound),
            "detail": _jsonable(r.detail),
        }
        if r.decomposition is not None and include_decompositions:
            rep = verify_decomposition(r.decomposition, rho)
            rec["decomposition"] = decomposition_to_json(r.decomposition)
            rec["decomposition_check"] = {"ok": rep.ok, "distance": rep.distance}
        out_records.append(rec)
    return {
        "format": REPORT_FORMAT,
        "version": __version__,
        "input": {
            "source": source,
            "shape": list(rho.shape),
            "dim": rho.dim,
            "tol": tol,
            "bloch_l1_norm": tilde.norm(1),
        },
        "criteria": out_records,
        "verdict": verdict.value if verdict is not None else "INCONSISTENT",
        "oracle": {
            "ppt_min_eigenvalues": {index_key(k): v for k, v in oracle.cuts.items()},
            "ppt_all": oracle.ppt_all,
            "consistent": oracle.consistent,
            "notes": oracle.notes,
        },
    }


def verify_report(report: dict, rho: DensityMatrix, tol: float = DEFAULT_TOL) -> list[str]:
    """Re-verify every embedded decomposition; returns a list of problems (empty when fine)."""
    problems = []
    for rec in report.get("criteria", []):
        certified = rec.get("verdict") == Verdict.SEPARABLE_CERTIFIED.value
        if certified and "decomposition" not in rec:
            problems.append(f"{rec['criterion']}: certified without decomposition")
            continue
        if "decomposition" in rec:
            rep = verify_decomposition(decomposition_from_json(rec["decomposition"]), rho, tol)
            if not rep.ok:
                problems.append(f"{rec['criterion']}: " + "; ".join(rep.failures))
    return problems


def cmd_analyze(args) -> int:
    rho = read_state(args.input, args.tol, args.shape_override)
    report = build_report(rho, str(args.input), args.criteria, args.p or [1, 2], args.tol,
                          not args.no_decomposition)
    _emit(write_json(report), args.output)
    if report["verdict"] == "INCONSISTENT" or not report["oracle"]["consistent"]:
        print("error: criteria and oracle disagree: " + "; ".join(report["oracle"]["notes"]),
              file=sys.stderr)
        return EXIT_INCONSISTENT
    return EXIT_CODES[Verdict(report["verdict"])]


def cmd_verify(args) -> int:
    rho = read_state(args.input, args.tol, args.shape_override)
    try:
        report = json.loads(Path(args.report).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read report {args.report}: {exc}") from exc
    problems = verify_report(report, rho, args.tol)
    for p in problems:
        print(p, file=sys.stderr)
    n = sum("decomposition" in r for r in report.get("criteria", []))
    print(f"{n} decomposition(s) checked, {len(problems)} problem(s)")
    return EXIT_INCONSISTENT if problems else 0


# --- scan ------------------------------------------------------------------

def _grid(args, entry) -> list[float]:
    if args.values:
        return [float(v) for v in args.values]
    if args.start is None or args.stop is None:
        raise UsageError("scan needs --values or both --start and --stop")
    return [float(x) for x in np.linspace(args.start, args.stop, args.num)]


def scan_rows(family: str, param: str, grid, fixed: dict, criteria=None, ps=(1, 2)):
    """Evaluate every grid point; yields ``(x, records)`` in grid order."""
    for x in grid:
        rho = build(family, **{**fixed, param: x})
        yield x, run_criteria(rho, criteria, ps, DECISION_TOL)


def _verdict_of(family, param, fixed, criterion, ps, x) -> str:
    rho = build(family, **{**fixed, param: x})
    recs = run_criteria(rho, [criterion.split("(")[0]], ps, DECISION_TOL)
    for r in recs:
        if r.criterion == criterion or r.criterion.split("(")[0] == criterion:
            return r.verdict.value
    raise UsageError(f"criterion {criterion} produced no record")


def bisect_changes(family: str, param: str, grid, fixed: dict, criterion: str, ps=(1,),
                   tol: float = BISECT_TOL) -> list[dict]:
    """Locate every verdict change of ``criterion`` between adjacent grid points."""
    grid = sorted(grid)
    verdicts = [_verdict_of(family, param, fixed, criterion, ps, x) for x in grid]
    out = []
    for (lo, vlo), (hi, vhi) in zip(zip(grid, verdicts), zip(grid[1:], verdicts[1:])):
        if vlo == vhi:
            continue
        while hi - lo > tol:
            mid = (lo + hi) / 2
            if _verdict_of(family, param, fixed, criterion, ps, mid) == vlo:
                lo = mid
            else:
                hi = mid
        out.append({"criterion": criterion, "from": vlo, "to": vhi, "lo": lo, "hi": hi,
                    "estimate": (lo + hi) / 2})
    return out


def cmd_scan(args) -> int:
    if args.family not in CATALOG:
        raise UsageError(f"unknown catalog family {args.family!r}; known: {sorted(CATALOG)}")
    entry = CATALOG[args.family]
    param = args.param or entry.sweep
    if param not in entry.parameters:
        raise UsageError(f"{args.family} has no parameter {param!r}")
    fixed = dict(args.set or [])
    grid = _grid(args, entry)
    ps = args.p or [1, 2]
    buf = _stdio.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if args.bisect:
        crit = args.bisect
        if crit == "theorem1":
            crit = f"theorem1(p={ps[0]:g})"
        rows = bisect_changes(args.family, param, grid, fixed, crit, ps[:1])
        writer.writerow(["criterion", "from", "to", "lo", "hi", "estimate"])
        for r in rows:
            writer.writerow([r["criterion"], r["from"], r["to"], repr(r["lo"]), repr(r["hi"]),
                             repr(r["estimate"])])
    else:
        header = None
        for x, recs in scan_rows(args.family, param, grid, fixed, args.criteria, ps):
            if header is None:
                header = [param]
                for r in recs:
                    header += [f"{r.criterion}:lhs", f"{r.criterion}:bound", f"{r.criterion}:verdict"]
                writer.writerow(header)
            row = [repr(x)]
            for r in recs:
                row += [repr(float(r.lhs)), repr(float(r.bound)), r.verdict.value]
            writer.writerow(row)
    _emit(buf.getvalue(), args.output)
    return 0


# --- witness ---------------------------------------------------------------

def _offset(spec: str, b) -> float:
    try:
        return float(spec)
    except ValueError:
        return offset_preset(spec, b)


def cmd_witness(args) -> int:
    rho = read_state(args.input, args.tol, args.shape_override)
    b = to_bloch(rho, Convention.TILDE)
    a = _offset(args.a, b)
    mode = WitnessMode(args.mode)
    doc = {"format": "blochsep-witness/1", "shape": list(rho.shape), "offset_a": a, "mode": mode.value}
    if args.random:
        ws = random_sign_witnesses(rho.shape, a, args.random, args.seed, mode)
        vals = [evaluate_witness(w, rho) for w in ws]
        norm = b.norm(1) if mode is WitnessMode.FULL_NORM else float(np.abs(b.tensor[(slice(1, None),) * len(rho.shape)]).sum())
        doc.update({
            "random": {"count": args.random, "seed": args.seed},
            "evaluations": vals,
            "max_evaluation": max(vals),
            "upper_bound": norm - a,
            "detects": max(vals) > DECISION_TOL,
        })
    else:
        w = build_witness(b, a, mode)
        val = evaluate_witness(w, rho)
        doc.update({
            "signs": {index_key(k): v for k, v in w.sign_pattern.items()},
            "matrix": matrix_to_json(w.matrix),
            "evaluation": val,
            "detects": val > DECISION_TOL,
        })
    _emit(write_json(doc), args.output)
    return 0


# --- catalog ---------------------------------------------------------------

def cmd_catalog(args) -> int:
    if args.list:
        for name, e in CATALOG.items():
            params = ", ".join(f"{k}={v:g}" for k, v in e.parameters.items())
            print(f"{name}: {params} (sweep {e.sweep})")
        return 0
    if not args.name:
        raise UsageError("catalog needs a family name (or --list)")
    params = dict(p if isinstance(p, tuple) else _param(p) for p in args.params)
    rho = build(args.name, **params)
    _emit(write_json(state_to_json(rho)), args.output)
    return 0


# --- parser ----------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage, which would read as INCONCLUSIVE
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="blochsep", description="Bloch-representation separability toolkit.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def state_opts(p):
        p.add_argument("input", help="state file (JSON)")
        p.add_argument("--tol", type=float, default=DEFAULT_TOL, help="validation tolerance")
        p.add_argument("--shape-override", type=_shape_arg, default=None,
                       help="reinterpret the matrix with another shape, e.g. 2,2,2")
        p.add_argument("-o", "--output", default=None, help="output file (default stdout)")

    p = sub.add_parser("analyze", help="run the criteria and emit a JSON report")
    state_opts(p)
    p.add_argument("--p", type=float, action="append", help="p for the norm criterion (repeatable)")
    p.add_argument("--criteria", type=_criteria_arg, default=None, help="comma-separated subset")
    p.add_argument("--no-decomposition", action="store_true", help="omit decomposition payloads")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("verify", help="re-verify the decompositions embedded in a report")
    state_opts(p)
    p.add_argument("report", help="report produced by analyze")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("scan", help="sweep a catalog family and write CSV")
    p.add_argument("family")
    p.add_argument("--param", default=None, help="swept parameter (default: family's sweep parameter)")
    p.add_argument("--start", type=float)
    p.add_argument("--stop", type=float)
    p.add_argument("--num", type=int, default=21)
    p.add_argument("--values", type=float, nargs="+")
    p.add_argument("--set", type=_param, action="append", help="fixed parameter key=value")
    p.add_argument("--p", type=float, action="append")
    p.add_argument("--criteria", type=_criteria_arg, default=None)
    p.add_argument("--bisect", choices=ALL_CRITERIA, default=None,
                   help="localize verdict changes of one criterion instead of tabulating")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("witness", help="build and evaluate a sign-pattern witness")
    state_opts(p)
    p.add_argument("--a", default="theorem3", help="offset: number or preset (theorem3, theorem1, M)")
    p.add_argument("--mode", choices=[m.value for m in WitnessMode], default=WitnessMode.FULL_NORM.value)
    p.add_argument("--random", type=int, default=0, help="number of random sign witnesses")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("catalog", help="write a catalog state as a matrix state file")
    p.add_argument("name", nargs="?")
    p.add_argument("params", nargs="*", type=_param, help="key=value parameters")
    p.add_argument("--list", action="store_true")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_catalog)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: invalid state ({exc.invariant}): {exc}", file=sys.stderr)
        return EXIT_ERROR
    except NumericalInconsistency as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    except (UsageError, BlochSepError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
