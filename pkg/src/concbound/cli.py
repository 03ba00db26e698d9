"""Command-line front end.

Subcommands
-----------
bounds       full report (both lower bounds, upper bound, EoF bound, PPT
             verdict, exactness certificate) for one state, as JSON.
figure1      bound scatter over random induced 2x3 ensembles, as CSV.
family-scan  analytic 2x3 family rho_{x,y} over a parameter grid, as CSV.
gap-scan     ub - lb gaps over random states and family points, ranked
             descending (exploratory; no assertion attached).

Exit codes: 0 success, 2 input validation, 3 I/O, 4 numerical fault.
Every file-producing command writes a run manifest next to its output;
re-running with the manifest's parameters reproduces the output
byte-identically (timestamps aside).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import multiprocessing
import sys
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .bounds import bound_report
from .errors import DomainError, ValidationError
from .linalg import BipartiteDims
from .optim import OptimizerConfig
from .states import (
    FamilyParams,
    family_exact_concurrence,
    family_state,
    load_density_matrix,
    random_induced_state,
    state_seed,
)

CSV_SCHEMA_VERSION = 1


@dataclasses.dataclass
class RunManifest:
    """Everything needed to reproduce one command's outputs."""

    command: str
    parameters: dict
    version: str
    timestamp: str
    outputs: list

    def to_json(self) -> dict:
        return dataclasses.asdict(self)


def _write_manifest(command: str, parameters: dict, outputs: list) -> None:
    manifest = RunManifest(
        command=command,
        parameters=parameters,
        version=__version__,
        timestamp=datetime.now(timezone.utc).isoformat(),
        outputs=outputs,
    )
    path = outputs[0] + ".manifest.json"
    with open(path, "w") as fh:
        json.dump(manifest.to_json(), fh, indent=2)
        fh.write("\n")


def _cfg_from_args(args) -> OptimizerConfig:
    return OptimizerConfig(
        restarts=args.restarts,
        max_iters=args.max_iters,
        tol=args.tol,
        seed=args.seed,
    )


def _fmt(x: float) -> str:
    return format(float(x), ".12g")


def _write_csv(path: str, schema: str, header: str, rows: list) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(f"# concbound {schema} csv v{CSV_SCHEMA_VERSION}\n")
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")


# --- bounds -------------------------------------------------------------------


def cmd_bounds(args) -> int:
    if (args.input is None) == (args.family is None):
        raise ValidationError("provide exactly one of INPUT or --family X Y")
    if args.family is not None:
        x, y = args.family
        rho = family_state(FamilyParams(x, y))
    else:
        rho = load_density_matrix(args.input)
    cfg = _cfg_from_args(args)
    report = bound_report(rho, cfg, ub_length=args.ub_length)
    payload = json.dumps(report.to_json(), indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(payload + "\n")
        _write_manifest("bounds", _common_params(args), [args.out])
    else:
        print(payload)
    return 0


# --- figure1 ------------------------------------------------------------------


def _figure1_row(task) -> tuple:
    master, m, index, cfg_kw, ub_length = task
    cfg = OptimizerConfig(**cfg_kw)
    rho = random_induced_state(m, BipartiteDims(2, 3), seed=state_seed(master, m, index))
    rep = bound_report(rho, cfg, ub_length=ub_length)
    return (
        str(index),
        str(m),
        str(rho.rank()),
        _fmt(rep.lb_standard),
        _fmt(rep.lb_optimized),
        _fmt(rep.ub),
        _fmt(rep.gap),
        _fmt(rep.eof_lb),
        _fmt(rep.ppt.min_eigenvalue),
        "1" if rep.exactness.status == "certified" else "0",
    )


def _run_tasks(tasks, worker, threads: int) -> list:
    if threads > 1:
        with multiprocessing.Pool(threads) as pool:
            return pool.map(worker, tasks)
    return [worker(t) for t in tasks]


def cmd_figure1(args) -> int:
    m_list = args.m_list
    if not m_list or args.per_m < 1:
        raise ValidationError("m-list must be non-empty and per-m >= 1")
    cfg_kw = dataclasses.asdict(_cfg_from_args(args))
    tasks = [
        (args.seed, m, i, cfg_kw, args.ub_length)
        for m in m_list
        for i in range(args.per_m)
    ]
    rows = _run_tasks(tasks, _figure1_row, args.threads)
    header = "seed,M,rank,lb_standard,lb_optimized,ub,gap,eof_lb,ppt_min_eig,certified"
    _write_csv(args.out, "figure1", header, rows)
    params = _common_params(args)
    params.update({"m_list": m_list, "per_m": args.per_m})
    _write_manifest("figure1", params, [args.out])
    return 0


# --- family scan --------------------------------------------------------------


def _family_row(task) -> tuple:
    x, y, cfg_kw, ub_length = task
    cfg = OptimizerConfig(**cfg_kw)
    rho = family_state(FamilyParams(x, y))
    cls = family_exact_concurrence(FamilyParams(x, y))
    rep = bound_report(rho, cfg, ub_length=ub_length)
    return (
        _fmt(x),
        _fmt(y),
        cls.kind,
        _fmt(cls.c_tilde),
        _fmt(rep.lb_standard),
        _fmt(rep.lb_optimized),
        _fmt(rep.ub),
        "1" if rep.exactness.status == "certified" else "0",
    )


def cmd_family_scan(args) -> int:
    points = []
    for x in args.x_list:
        for y in args.y_list:
            if not (0.0 <= y <= x and x + y <= 1.0):
                raise ValidationError(f"grid point ({x}, {y}) outside x >= y >= 0, x + y <= 1")
            points.append((x, y))
    cfg_kw = dataclasses.asdict(_cfg_from_args(args))
    tasks = [(x, y, cfg_kw, args.ub_length) for x, y in points]
    rows = _run_tasks(tasks, _family_row, args.threads)
    header = "x,y,classification,c_tilde,lb_standard,lb_optimized,ub,certified"
    _write_csv(args.out, "family-scan", header, rows)
    params = _common_params(args)
    params.update({"x_list": args.x_list, "y_list": args.y_list})
    _write_manifest("family-scan", params, [args.out])
    return 0


# --- gap scan -----------------------------------------------------------------


def _gap_row(task) -> tuple:
    kind, spec, cfg_kw, ub_length = task
    cfg = OptimizerConfig(**cfg_kw)
    if kind == "family":
        x, y = spec
        rho = family_state(FamilyParams(x, y))
        label = f"family({_fmt(x)};{_fmt(y)})"
    else:
        master, m, index = spec
        rho = random_induced_state(m, BipartiteDims(2, 3), seed=state_seed(master, m, index))
        label = f"induced(M={m};i={index})"
    rep = bound_report(rho, cfg, ub_length=ub_length)
    return (label, _fmt(rep.lb_optimized), _fmt(rep.ub), _fmt(rep.gap))


def cmd_gap_scan(args) -> int:
    if args.samples < 0:
        raise ValidationError("samples must be >= 0")
    cfg_kw = dataclasses.asdict(_cfg_from_args(args))
    tasks = []
    for x, y in [(0.5, 0.5), (0.5, 0.25), (0.75, 0.25), (0.4, 0.2), (0.25, 0.0)]:
        tasks.append(("family", (x, y), cfg_kw, args.ub_length))
    ms = (4, 6, 10)
    for i in range(args.samples):
        tasks.append(("induced", (args.seed, ms[i % 3], i), cfg_kw, args.ub_length))
    rows = _run_tasks(tasks, _gap_row, args.threads)
    rows.sort(key=lambda r: (-float(r[3]), r[0]))
    header = "state,lb_optimized,ub,gap"
    _write_csv(args.out, "gap-scan", header, rows)
    params = _common_params(args)
    params.update({"samples": args.samples})
    _write_manifest("gap-scan", params, [args.out])
    return 0


# --- plumbing -----------------------------------------------------------------


def _common_params(args) -> dict:
    return {
        "seed": args.seed,
        "restarts": args.restarts,
        "max_iters": args.max_iters,
        "tol": args.tol,
        "threads": args.threads,
        "ub_length": args.ub_length,
        "out": args.out,
    }


def _add_common(p: argparse.ArgumentParser, default_out: str | None) -> None:
    p.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    p.add_argument("--restarts", type=int, default=20, help="optimizer restarts (default 20)")
    p.add_argument("--max-iters", type=int, default=2000, help="iterations per restart")
    p.add_argument("--tol", type=float, default=1e-9, help="optimizer stall tolerance")
    p.add_argument("--threads", type=int, default=1, help="worker processes for sweeps")
    p.add_argument(
        "--ub-length",
        type=int,
        default=None,
        help="decomposition length for the upper bound (default 2*rank, max 36)",
    )
    p.add_argument("--out", default=default_out, help="output file path")


def _float_list(text: str) -> list:
    return [float(v) for v in text.split(",") if v != ""]


def _int_list(text: str) -> list:
    return [int(v) for v in text.split(",") if v != ""]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="concbound",
        description="Concurrence bounds for 2xK bipartite mixed states.",
    )
    parser.add_argument("--version", action="version", version=f"concbound {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", help="full bound report for one state (JSON)")
    p.add_argument("input", nargs="?", default=None, help="density-matrix JSON file")
    p.add_argument(
        "--family",
        nargs=2,
        type=float,
        metavar=("X", "Y"),
        help="use the analytic 2x3 family state rho_{x,y} instead of a file",
    )
    _add_common(p, default_out=None)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("figure1", help="bound scatter over random 2x3 ensembles (CSV)")
    p.add_argument("--m-list", type=_int_list, default=[4, 6, 10], help="environment dimensions")
    p.add_argument("--per-m", type=int, default=100, help="states per ensemble (default 100)")
    _add_common(p, default_out="figure1.csv")
    p.set_defaults(func=cmd_figure1)

    p = sub.add_parser("family-scan", help="scan the analytic family rho_{x,y} (CSV)")
    p.add_argument("--x-list", type=_float_list, required=True, help="comma-separated x values")
    p.add_argument("--y-list", type=_float_list, required=True, help="comma-separated y values")
    _add_common(p, default_out="family_scan.csv")
    p.set_defaults(func=cmd_family_scan)

    p = sub.add_parser("gap-scan", help="ub - lb gaps, ranked descending (CSV)")
    p.add_argument("--samples", type=int, default=21, help="random induced states to include")
    _add_common(p, default_out="gap_scan.csv")
    p.set_defaults(func=cmd_gap_scan)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValidationError, json.JSONDecodeError, ValueError) as exc:
        print(f"error: invalid input: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: I/O failure: {exc}", file=sys.stderr)
        return 3
    except (DomainError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"error: numerical fault: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
