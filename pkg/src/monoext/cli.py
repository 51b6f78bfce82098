"""Command-line entry point.

Subcommands: solve, oracle, grid-exp, cont-bound, cont-extremal,
proc-bound, proc-sim, selftest.  Results are printed as JSON with sorted
keys; exact rationals are serialized as "p/q" strings.  Exit codes:
0 success, 2 validation error, 3 enumeration cap exceeded, 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import selftest as _selftest
from .continuous import (
    eval_extremal_surface,
    grid_experiment,
    line_integral_bound,
    line_integral_on_surface,
    verify_membership,
)
from .errors import CapExceeded, MonoextError, ValidationError
from .func1d import EmpiricalRV, MonotoneMap1D
from .oracle import brute_min_max
from .poset import DEFAULT_CAP, Poset, QuerySet, build_poset, grid_poset
from .process import (
    expectation_at_tau,
    expectation_bound,
    make_extremal_process,
    simplified_bound,
    verify_process_membership,
)
from .solver import scale_from_m, solve_max, solve_min
from .values import BoundResult, ValueScale

USAGE_EXIT = 64
VALIDATION_EXIT = 2
CAP_EXIT = 3


@dataclass
class RunConfig:
    tol: float = 1e-9
    cap: int = DEFAULT_CAP
    seed: int = 0
    format: str = "json"
    verbosity: int = 0

    def validate(self) -> "RunConfig":
        if not self.tol > 0:
            raise ValidationError("tol must be positive")
        if self.cap < 1:
            raise ValidationError("cap must be at least 1")
        return self


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_EXIT)


def _frac(v) -> str:
    f = Fraction(v)
    return f"{f.numerator}/{f.denominator}"


def _labelize(obj):
    """JSON labels to internal labels: lists become tuples, recursively."""
    if isinstance(obj, list):
        return tuple(_labelize(x) for x in obj)
    return obj


def _label_json(lab):
    if isinstance(lab, tuple):
        return [_label_json(x) for x in lab]
    return lab


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as e:
        raise ValidationError(f"cannot read {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ValidationError(f"{path} is not valid JSON: {e}") from e


def load_poset(path: str) -> Poset:
    doc = _load_json(path)
    if "grid" in doc:
        g = doc["grid"]
        return grid_poset(int(g["n"]), g.get("order", "product"))
    if "labels" not in doc or "covers" not in doc:
        raise ValidationError("poset JSON needs 'labels'+'covers' or 'grid'")
    labels = [_labelize(x) for x in doc["labels"]]
    covers = [(_labelize(a), _labelize(b)) for a, b in doc["covers"]]
    return build_poset(labels, covers)


def parse_map_spec(spec) -> MonotoneMap1D:
    if isinstance(spec, dict):
        kind = spec.get("kind")
        if kind == "identity":
            return MonotoneMap1D.identity()
        if kind == "power":
            return MonotoneMap1D.power(float(spec["p"]))
        if kind == "pwl":
            return MonotoneMap1D.piecewise_linear(
                [(float(x), float(y)) for x, y in spec["points"]]
            )
        if kind == "const":
            return MonotoneMap1D.constant(float(spec["alpha"]))
        raise ValidationError(f"unknown map kind {kind!r}")
    raise ValidationError(f"map spec must be an object, got {spec!r}")


def load_map(arg: str) -> MonotoneMap1D:
    """Shorthand ("id", "power:2", "const:0.5", "pwl:x,y;x,y;...") or a
    path to a map-spec JSON file."""
    if arg in ("id", "identity"):
        return MonotoneMap1D.identity()
    if arg.startswith("power:"):
        return MonotoneMap1D.power(float(arg.split(":", 1)[1]))
    if arg.startswith("const:"):
        return MonotoneMap1D.constant(float(arg.split(":", 1)[1]))
    if arg.startswith("pwl:"):
        pts = []
        for chunk in arg.split(":", 1)[1].split(";"):
            x, y = chunk.split(",")
            pts.append((float(x), float(y)))
        return MonotoneMap1D.piecewise_linear(pts)
    return parse_map_spec(_load_json(arg))


def load_scale(path: str) -> ValueScale:
    doc = _load_json(path)
    if "values" in doc:
        vals = []
        for v in doc["values"]:
            vals.append(Fraction(v) if isinstance(v, str) else v)
        return ValueScale(vals)
    if "from_m" in doc:
        sub = doc["from_m"]
        m = (
            load_map(sub["m"])
            if isinstance(sub["m"], str)
            else parse_map_spec(sub["m"])
        )
        return scale_from_m(m, int(sub["n"]))
    raise ValidationError("scale JSON needs 'values' or 'from_m'")


def load_query(path: str, poset: Poset) -> QuerySet:
    doc = _load_json(path)
    if "query" not in doc:
        raise ValidationError("query JSON needs a 'query' list")
    return QuerySet(poset, [_labelize(x) for x in doc["query"]])


def load_samples(path: str) -> EmpiricalRV:
    try:
        with open(path) as fh:
            lines = [ln.strip() for ln in fh if ln.strip()]
    except OSError as e:
        raise ValidationError(f"cannot read {path}: {e}") from e
    try:
        return EmpiricalRV.from_samples(float(ln) for ln in lines)
    except ValueError as e:
        raise ValidationError(f"{path}: non-numeric sample line ({e})") from e


def _bound_result_json(res: BoundResult, include_witness: bool) -> dict:
    out = {
        "objective": _frac(res.objective),
        "witness_perm": [p + 1 for p in res.witness_perm],
    }
    if include_witness:
        out["witness_fn"] = [
            [_label_json(lab), _frac(val)] for lab, val in res.witness_fn.items()
        ]
        out["per_node_values"] = [_frac(v) for v in res.per_node_values]
    return out


def _emit(payload: dict, config: RunConfig, stream) -> None:
    print(json.dumps(payload, sort_keys=True), file=stream)


def _build_parser() -> _Parser:
    parser = _Parser(prog="monoext")
    parser.add_argument("--config", help="JSON file with RunConfig overrides")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="extremal query sums via the solver")
    p.add_argument("--poset", required=True)
    p.add_argument("--scale", required=True)
    p.add_argument("--query", required=True)
    p.add_argument("--mode", choices=["min", "max", "both"], default="both")
    p.add_argument("--witness", action="store_true")
    p.add_argument("--cap", type=int)

    p = sub.add_parser("oracle", help="brute-force extremal query sums")
    p.add_argument("--poset", required=True)
    p.add_argument("--scale", required=True)
    p.add_argument("--query", required=True)
    p.add_argument("--witness", action="store_true")
    p.add_argument("--cap", type=int)

    p = sub.add_parser("grid-exp", help="square-grid discretization record")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)

    p = sub.add_parser("cont-bound", help="line-integral lower bound")
    p.add_argument("--m", required=True)
    p.add_argument("--t", required=True)
    p.add_argument("--tol", type=float)

    p = sub.add_parser("cont-extremal", help="extremal surface CSV + membership")
    p.add_argument("--m", required=True)
    p.add_argument("--t", required=True)
    p.add_argument("--grid", type=int, required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("proc-bound", help="expected-value lower bound")
    p.add_argument("--m", required=True)
    p.add_argument("--tau", required=True)
    p.add_argument("--simplified", action="store_true")
    p.add_argument("--tol", type=float)

    p = sub.add_parser("proc-sim", help="extremal process simulation")
    p.add_argument("--m", required=True)
    p.add_argument("--tau", required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--verify", help="grid_t,grid_y for the membership check")

    p = sub.add_parser("selftest", help="run the acceptance checks")
    p.add_argument("--quick", action="store_true")
    return parser


def _make_config(args) -> RunConfig:
    config = RunConfig()
    if args.config:
        doc = _load_json(args.config)
        for key in ("tol", "cap", "seed", "format", "verbosity"):
            if key in doc:
                setattr(config, key, doc[key])
    env_seed = os.environ.get("MONOEXT_SEED")
    if env_seed is not None:
        try:
            config.seed = int(env_seed)
        except ValueError:
            raise ValidationError("MONOEXT_SEED must be an integer") from None
    if getattr(args, "cap", None) is not None:
        config.cap = args.cap
    if getattr(args, "tol", None) is not None:
        config.tol = args.tol
    if getattr(args, "seed", None) is not None:
        config.seed = args.seed
    return config.validate()


def _cmd_solve(args, config, stdout) -> int:
    poset = load_poset(args.poset)
    scale = load_scale(args.scale)
    query = load_query(args.query, poset)
    payload = {}
    if args.mode in ("min", "both"):
        payload["min"] = _bound_result_json(
            solve_min(poset, scale, query, cap=config.cap), args.witness
        )
    if args.mode in ("max", "both"):
        payload["max"] = _bound_result_json(
            solve_max(poset, scale, query, cap=config.cap), args.witness
        )
    if args.mode != "both":
        payload = payload[args.mode]
    _emit(payload, config, stdout)
    return 0


def _cmd_oracle(args, config, stdout) -> int:
    poset = load_poset(args.poset)
    scale = load_scale(args.scale)
    query = load_query(args.query, poset)
    bmin, bmax, count = brute_min_max(poset, scale, query, cap=config.cap)
    payload = {
        "min": _bound_result_json(bmin, args.witness),
        "max": _bound_result_json(bmax, args.witness),
        "count": count,
    }
    _emit(payload, config, stdout)
    return 0


def _cmd_grid_exp(args, config, stdout) -> int:
    record = grid_experiment(args.alpha, args.n, args.k)
    _emit(record.as_dict(), config, stdout)
    return 0


def _cmd_cont_bound(args, config, stdout) -> int:
    m = load_map(args.m)
    t = load_map(args.t)
    payload = {
        "bound": line_integral_bound(m, t, config.tol),
        "surface_integral": line_integral_on_surface(m, t, config.tol),
    }
    _emit(payload, config, stdout)
    return 0


def _cmd_cont_extremal(args, config, stdout) -> int:
    m = load_map(args.m)
    t = load_map(args.t)
    if args.grid < 2:
        raise ValidationError("--grid must be at least 2")
    with open(args.out, "w") as fh:
        fh.write("x,y,value\n")
        for i in range(args.grid):
            x = (i + 0.5) / args.grid
            for j in range(args.grid):
                y = (j + 0.5) / args.grid
                fh.write(f"{x!r},{y!r},{eval_extremal_surface(m, t, x, y)!r}\n")
    report = verify_membership(m, t, args.grid)
    _emit(
        {
            "out": args.out,
            "grid": args.grid,
            "membership": {
                "ok": report.ok,
                "max_distribution_deviation": report.max_distribution_deviation,
                "worst_u": report.worst_u,
                "budget": report.budget,
            },
        },
        config,
        stdout,
    )
    return 0


def _cmd_proc_bound(args, config, stdout) -> int:
    m = load_map(args.m)
    tau = load_samples(args.tau)
    payload = {"bound": expectation_bound(m, tau, config.tol)}
    if args.simplified:
        payload["simplified"] = _frac(simplified_bound(tau))
    _emit(payload, config, stdout)
    return 0


def _cmd_proc_sim(args, config, stdout) -> int:
    m = load_map(args.m)
    tau = load_samples(args.tau)
    proc = make_extremal_process(m, tau, seed=config.seed)
    bound = expectation_bound(m, tau, config.tol)
    value, stderr = expectation_at_tau(
        proc, "montecarlo", trials=args.trials, seed=config.seed
    )
    payload = {"bound": bound, "expectation": value, "stderr": stderr}
    if args.verify:
        try:
            gt, gy = (int(x) for x in args.verify.split(","))
        except ValueError:
            raise ValidationError("--verify expects 'grid_t,grid_y'") from None
        report = verify_process_membership(proc, gt, gy)
        payload["membership_report"] = {
            "ok": report.ok,
            "max_deviation": report.max_deviation,
            "worst_level": report.worst_level,
            "budget": report.budget,
        }
    _emit(payload, config, stdout)
    return 0


def _cmd_selftest(args, config, stdout) -> int:
    results = _selftest.run_all(quick=args.quick)
    for r in results:
        print(r.line(), file=stdout)
    return 0 if all(r.passed for r in results) else 1


_COMMANDS = {
    "solve": _cmd_solve,
    "oracle": _cmd_oracle,
    "grid-exp": _cmd_grid_exp,
    "cont-bound": _cmd_cont_bound,
    "cont-extremal": _cmd_cont_extremal,
    "proc-bound": _cmd_proc_bound,
    "proc-sim": _cmd_proc_sim,
    "selftest": _cmd_selftest,
}


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else USAGE_EXIT
    try:
        config = _make_config(args)
        return _COMMANDS[args.command](args, config, stdout)
    except CapExceeded as e:
        _emit({"error": {"type": "CapExceeded", "message": str(e), "cap": e.cap}},
              RunConfig(), stderr)
        return CAP_EXIT
    except MonoextError as e:
        _emit({"error": {"type": type(e).__name__, "message": str(e)}},
              RunConfig(), stderr)
        return VALIDATION_EXIT


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
