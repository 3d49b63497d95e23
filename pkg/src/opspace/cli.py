"""Command-line entry point.

Subcommands
-----------
norm        evaluate a structure norm of a matrix-sequence JSON file
witness     print a named witness object as JSON
experiment  run a named experiment and write its CSV
verify      run a verification suite; exit 0 iff every check passes
kp          quasilinear-map operations (map / quasinorm / probe)

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import experiments, osnorm, suites, twist
from .seqspace import (
    FinSeq,
    finseq_from_dict,
    finseq_to_dict,
    matrixseq_from_json,
    matrixseq_to_dict,
    witness,
)

USAGE_ERROR = 2
VERIFY_ERROR = 1


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _load_budget(args) -> osnorm.OptBudget:
    path = getattr(args, "budget", None) or os.environ.get("OSNORM_BUDGET")
    data = {}
    if path:
        data = json.loads(_read_text(path))
        if not isinstance(data, dict):
            raise ValueError("budget JSON must be an object")
    budget = osnorm.OptBudget.from_dict(data)
    if getattr(args, "seed", None) is not None:
        budget = osnorm.OptBudget(budget.starts, budget.max_iter, budget.tol, args.seed)
    return budget


def _cmd_norm(args) -> int:
    structure = osnorm.parse_structure(args.structure)
    x = matrixseq_from_json(_read_text(args.input))
    est = osnorm.evaluate(structure, x, _load_budget(args))
    _write_text(args.out, json.dumps(est.to_dict()))
    return 0


def _cmd_witness(args) -> int:
    obj = witness(args.kind, args.n)
    if isinstance(obj, FinSeq):
        payload = finseq_to_dict(obj)
    elif isinstance(obj, np.ndarray):
        payload = {
            "re": [[float(v.real) for v in row] for row in obj.astype(complex)],
            "im": [[float(v.imag) for v in row] for row in obj.astype(complex)],
        }
    else:
        payload = matrixseq_to_dict(obj)
    _write_text(args.out, json.dumps(payload))
    return 0


def _parse_float_list(text: str) -> tuple[float, ...]:
    out = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        if "/" in chunk:
            num, den = chunk.split("/", 1)
            out.append(float(num) / float(den))
        else:
            out.append(float(chunk))
    if not out:
        raise ValueError("empty value list")
    return tuple(out)


def _cmd_experiment(args) -> int:
    budget = _load_budget(args)
    params = experiments.RunParams(
        n_values=tuple(range(1, args.n_max + 1)) if args.n_list is None else tuple(int(v) for v in _parse_float_list(args.n_list)),
        p_values=_parse_float_list(args.p) if args.p else experiments.RunParams().p_values,
        theta_values=_parse_float_list(args.theta) if args.theta else experiments.RunParams().theta_values,
        seed=budget.seed,
        budget=budget,
        growth_constants=(args.c_const, args.t_const),
    )
    rows = experiments.run(args.name, params)
    _write_text(args.out, experiments.rows_to_csv(rows))
    return 0


def _cmd_verify(args) -> int:
    results = suites.run_suite(args.suite)
    for result in results:
        print(result.line())
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return VERIFY_ERROR if failed else 0


def _cmd_kp(args) -> int:
    if args.op == "map":
        v = finseq_from_dict(json.loads(_read_text(args.input)))
        _write_text(args.out, json.dumps(finseq_to_dict(twist.kp_map(v, args.p))))
    elif args.op == "quasinorm":
        data = json.loads(_read_text(args.input))
        x = finseq_from_dict(data["x"]) if "x" in data else FinSeq()
        y = finseq_from_dict(data["y"]) if "y" in data else FinSeq()
        value = twist.kp_quasinorm(x, y, args.p)
        _write_text(args.out, json.dumps({"quasinorm": value}))
    elif args.op == "probe":
        report = twist.quasilinearity_probe(args.p, args.samples, args.seed or 0)
        _write_text(args.out, json.dumps(report.to_dict()))
    else:  # pragma: no cover - argparse restricts choices
        raise ValueError(f"unknown kp operation {args.op!r}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="osnorm", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p_norm = sub.add_parser("norm", help="evaluate a structure norm")
    p_norm.add_argument("--structure", required=True, help="e.g. row, oh, min:p=2, interp:(min:p=2,max:p=2,theta=0.5)")
    p_norm.add_argument("--input", required=True, help="matrix-sequence JSON file ('-' for stdin)")
    p_norm.add_argument("--budget", help="optimizer budget JSON file")
    p_norm.add_argument("--seed", type=int, default=None)
    p_norm.add_argument("--out", default=None)
    p_norm.set_defaults(func=_cmd_norm)

    p_wit = sub.add_parser("witness", help="print a named witness as JSON")
    p_wit.add_argument("kind", choices=["xn", "xnt", "yn", "an", "un"])
    p_wit.add_argument("--n", type=int, required=True)
    p_wit.add_argument("--out", default=None)
    p_wit.set_defaults(func=_cmd_witness)

    p_exp = sub.add_parser("experiment", help="run a named experiment, emit CSV")
    p_exp.add_argument("name", choices=[n.lower() for n in experiments.EXPERIMENT_NAMES] + list(experiments.EXPERIMENT_NAMES))
    p_exp.add_argument("--n-max", type=int, default=6)
    p_exp.add_argument("--n-list", default=None, help="explicit comma-separated n values")
    p_exp.add_argument("--p", default=None, help="comma-separated p values (fractions allowed)")
    p_exp.add_argument("--theta", default=None, help="comma-separated theta values")
    p_exp.add_argument("--c-const", type=float, default=1.0, help="quotient-isomorphism constant for GROWTH54")
    p_exp.add_argument("--t-const", type=float, default=1.0, help="translation constant for GROWTH54")
    p_exp.add_argument("--budget", help="optimizer budget JSON file")
    p_exp.add_argument("--seed", type=int, default=None)
    p_exp.add_argument("--jobs", type=int, default=1, help="worker bound (rows are cheap; kept for interface stability)")
    p_exp.add_argument("--out", default=None)
    p_exp.set_defaults(func=_cmd_experiment)

    p_ver = sub.add_parser("verify", help="run a verification suite")
    p_ver.add_argument("--suite", choices=sorted(suites.SUITES), default="all")
    p_ver.add_argument("--tol", type=float, default=None, help="override the table gap tolerance")
    p_ver.set_defaults(func=_cmd_verify)

    p_kp = sub.add_parser("kp", help="quasilinear map operations")
    p_kp.add_argument("--op", choices=["map", "quasinorm", "probe"], required=True)
    p_kp.add_argument("--p", type=float, default=2.0)
    p_kp.add_argument("--input", help="JSON input ('-' for stdin)")
    p_kp.add_argument("--samples", type=int, default=200)
    p_kp.add_argument("--seed", type=int, default=None)
    p_kp.add_argument("--out", default=None)
    p_kp.set_defaults(func=_cmd_kp)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE_ERROR if exc.code not in (0, None) else 0
    try:
        if args.command == "verify" and args.tol is not None:
            return _verify_with_tol(args)
        return args.func(args)
    except (ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


def _verify_with_tol(args) -> int:
    tol = args.tol
    table_checks = {
        suites.check_min_table: {"tol": tol},
        suites.check_max_table: {"rel_tol": tol},
        suites.check_interp_table: {"rel_tol": tol},
        suites.check_full_basis_table: {"rel_tol": tol},
    }
    results = []
    for check in suites.SUITES[args.suite]:
        kwargs = table_checks.get(check, {})
        results.append(check(**kwargs))
    for result in results:
        print(result.line())
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return VERIFY_ERROR if failed else 0


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    sys.exit(main())
