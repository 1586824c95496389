"""Command line interface.

    qubit-approx solve   [FILE] [--tol T]
    qubit-approx verify  [FILE] [--step S]
    qubit-approx figure  FIG --panel {a,k,phi} --out PATH [--with-oracle]
    qubit-approx random  --seed N --n K

Exit codes: 0 ok, 2 schema/usage error, 3 invalid state, 4 oracle
disagreement, 5 oracle budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import jsonschema
import numpy as np

from . import figures
from .bloch import (
    bloch_of_pure,
    pure_from_bloch,
    target_from_bloch,
    target_from_params,
    validate_density,
)
from .errors import BudgetExceeded, StateError
from .planner import Instance, SolverOptions, best_approximation, verify_against_oracle

EXIT_OK = 0
EXIT_SCHEMA = 2
EXIT_STATE = 3
EXIT_REGRESSION = 4
EXIT_BUDGET = 5

_number = {"type": "number"}
_complex = {"type": "array", "items": _number, "minItems": 2, "maxItems": 2}
_vec3 = {"type": "array", "items": _number, "minItems": 3, "maxItems": 3}

INSTANCE_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["target", "set"],
    "properties": {
        "target": {
            "type": "object",
            "minProperties": 1,
            "maxProperties": 1,
            "additionalProperties": False,
            "properties": {
                "matrix": {
                    "type": "array", "minItems": 2, "maxItems": 2,
                    "items": {"type": "array", "minItems": 2, "maxItems": 2, "items": _complex},
                },
                "bloch": _vec3,
                "params": {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["a", "k", "phi"],
                    "properties": {"a": _number, "k": _number, "phi": _number},
                },
            },
        },
        "set": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "minProperties": 1,
                "maxProperties": 1,
                "additionalProperties": False,
                "properties": {
                    "amplitudes": {"type": "array", "minItems": 2, "maxItems": 2, "items": _complex},
                    "bloch": _vec3,
                },
            },
        },
        "options": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "tol": {"type": "number", "exclusiveMinimum": 0},
                "step": {"type": "number", "exclusiveMinimum": 0, "maximum": 0.5},
            },
        },
    },
}


class CliError(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def _read_text(path):
    if path in (None, "-"):
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise CliError(EXIT_SCHEMA, f"cannot read {path}: {exc}")


def parse_document(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(EXIT_SCHEMA, f"line {exc.lineno} column {exc.colno}: {exc.msg}")
    validator = jsonschema.Draft7Validator(INSTANCE_SCHEMA)
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        where = "/".join(str(p) for p in err.absolute_path) or "<root>"
        raise CliError(EXIT_SCHEMA, f"field {where}: {err.message}")
    return doc


def _cplx(pair):
    return complex(pair[0], pair[1])


def build_instance(doc: dict, tol=None) -> Instance:
    options = doc.get("options", {})
    tol = tol if tol is not None else options.get("tol", 1e-9)
    spec = doc["target"]
    try:
        if "matrix" in spec:
            target = validate_density([[_cplx(z) for z in row] for row in spec["matrix"]], tol=tol)
        elif "bloch" in spec:
            target = target_from_bloch(spec["bloch"], tol=tol)
        else:
            p = spec["params"]
            target = target_from_params(p["a"], p["k"], p["phi"])
        states = []
        for i, item in enumerate(doc["set"]):
            try:
                if "amplitudes" in item:
                    states.append(bloch_of_pure([_cplx(z) for z in item["amplitudes"]]))
                else:
                    states.append(pure_from_bloch(item["bloch"], tol=1e-6))
            except StateError as exc:
                raise StateError(f"set/{i}: {exc}") from exc
    except StateError as exc:
        raise CliError(EXIT_STATE, str(exc))
    return Instance(target, states, SolverOptions(tol=tol, oracle_step=options.get("step")))


def _finite_or_none(x):
    return None if x is None or not math.isfinite(x) else float(x)


def solve_document(doc: dict, tol=None) -> dict:
    report = best_approximation(build_instance(doc, tol))
    res = report.result
    return {
        "distance": res.distance,
        "fidelity": res.fidelity,
        "weights": [float(w) for w in res.weights],
        "support": list(res.support),
        "branch": res.branch.value,
        "kkt_residual": _finite_or_none(res.kkt_residual),
        "candidates_evaluated": report.candidates_evaluated,
    }


def _emit(obj):
    sys.stdout.write(json.dumps(obj, indent=2) + "\n")


def cmd_solve(args):
    doc = parse_document(_read_text(args.input))
    _emit(solve_document(doc, args.tol))
    return EXIT_OK


def cmd_verify(args):
    doc = parse_document(_read_text(args.input))
    instance = build_instance(doc, args.tol)
    step = args.step if args.step is not None else instance.options.oracle_step
    try:
        cmp = verify_against_oracle(instance, step)
    except BudgetExceeded as exc:
        _emit({"error": "budget exceeded", "required": exc.required, "cap": exc.cap})
        return EXIT_BUDGET
    _emit({"closed": cmp.closed, "grid": cmp.grid, "gap": cmp.gap,
           "evaluations": cmp.evaluations, "bound": cmp.bound})
    return EXIT_OK if cmp.ok else EXIT_REGRESSION


def _parse_fixed(items):
    fixed = {}
    for item in items or []:
        name, sep, value = item.partition("=")
        if not sep:
            raise CliError(EXIT_SCHEMA, f"--fixed expects name=value, got {item!r}")
        try:
            fixed[name.strip()] = float(value)
        except ValueError:
            raise CliError(EXIT_SCHEMA, f"--fixed value for {name!r} is not a number")
    return fixed


def cmd_figure(args):
    try:
        spec = figures.make_spec(
            args.figure, args.panel, count=args.count, start=args.start, stop=args.stop,
            fixed=_parse_fixed(args.fixed), curves=args.curves,
            with_oracle=args.with_oracle, oracle_step=args.step,
        )
    except figures.FigureSpecError as exc:
        raise CliError(EXIT_SCHEMA, str(exc))
    try:
        text = figures.render_csv(spec)
    except BudgetExceeded as exc:
        raise CliError(EXIT_BUDGET, str(exc))
    figures.write_atomic(args.out, text)
    return EXIT_OK


def random_document(seed: int, n: int) -> dict:
    """Haar-random pure states and a target with uniform (a, k, phi)."""
    if n < 1:
        raise CliError(EXIT_SCHEMA, "--n must be >= 1")
    rng = np.random.default_rng(seed)
    a, k = float(rng.uniform()), float(rng.uniform())
    phi = float(rng.uniform(0.0, 2 * math.pi))
    states = []
    for _ in range(n):
        v = rng.normal(size=2) + 1j * rng.normal(size=2)
        v = v / np.linalg.norm(v)
        states.append({"amplitudes": [[float(z.real), float(z.imag)] for z in v]})
    return {"target": {"params": {"a": a, "k": k, "phi": phi}}, "set": states}


def cmd_random(args):
    _emit(random_document(args.seed, args.n))
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise CliError(EXIT_SCHEMA, message)


def build_parser():
    parser = _Parser(prog="qubit-approx", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="optimal mixture for an instance document")
    p.add_argument("input", nargs="?", default="-", help="JSON file, '-' for stdin")
    p.add_argument("--tol", type=float, default=None, help="density validation tolerance")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="compare the solver against the grid oracle")
    p.add_argument("input", nargs="?", default="-")
    p.add_argument("--step", type=float, default=None, help="grid step (default by set size)")
    p.add_argument("--tol", type=float, default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("figure", help="write a distance sweep as CSV")
    p.add_argument("figure", choices=figures.FIGURES)
    p.add_argument("--panel", required=True, choices=figures.PANELS)
    p.add_argument("--out", required=True)
    p.add_argument("--count", type=int, default=101)
    p.add_argument("--from", dest="start", type=float, default=None)
    p.add_argument("--to", dest="stop", type=float, default=None)
    p.add_argument("--fixed", action="append", metavar="NAME=VALUE")
    p.add_argument("--curves", type=lambda s: [float(v) for v in s.split(",")], default=None)
    p.add_argument("--with-oracle", action="store_true")
    p.add_argument("--step", type=float, default=None, help="oracle grid step")
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("random", help="emit a seeded random instance document")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_random)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "step", None) is not None and not (0.0 < args.step <= 0.5):
            raise CliError(EXIT_SCHEMA, "--step must be in (0, 0.5]")
        return args.func(args)
    except CliError as exc:
        print(f"qubit-approx: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
