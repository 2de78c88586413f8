"""Command-line front end: generate, solve, bench, enumerate, reduce, verify.

Machine-readable JSON goes to stdout (one object per invocation); human
progress and error text goes to stderr.  Exit codes: 0 success (including
solver fallbacks), 1 input error, 2 budget refusal, 3 internal
consistency failure.

Seed scheme: a run's master seed s derives component streams as tuples
(s, 1) for advice and (s, 2) for algorithm randomness, so parallel and
serial bench execution agree run for run.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import fileio, verify
from .advice import LabelAdvice, SubsetAdvice, gen_label_advice, gen_subset_advice, subset_to_label
from .enumeration import DEFAULT_CAP, enumerate_solve
from .errors import AdviceCspError, BudgetError, InputError, InternalError
from .instances import (
    KLinInstance,
    evaluate,
    graph_to_klin,
    plant_bipartite_regular,
    plant_klin,
)
from .max3lin import solve_max3lin_with_advice
from .maxcut import MaxCutParams, solve_maxcut_with_advice
from .qp_advice import solve_2lin_with_advice
from .reduce4lin import three_to_four_lin
from .twolin_sdp import TwoLinConfig, solve_2lin

ALGORITHMS = ("maxcut-lp", "qp-advice", "max3lin", "twolin-sdp")


def _emit(report: dict) -> None:
    json.dump(report, sys.stdout, indent=2, default=_json_default)
    sys.stdout.write("\n")


def _json_default(obj):
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj)}")


def _log(msg: str) -> None:
    print(msg, file=sys.stderr)


def _refuse_existing(paths, force: bool):
    if force:
        return
    clashes = [p for p in paths if os.path.exists(p)]
    if clashes:
        raise InputError(f"refusing to overwrite {clashes[0]} (pass --force to allow)")


def _worker_count(n_jobs: int) -> int:
    raw = os.environ.get("ADVICE_CSP_THREADS", "1")
    try:
        cap = max(1, int(raw))
    except ValueError:
        raise InputError(f"ADVICE_CSP_THREADS must be an integer, got {raw!r}") from None
    return max(1, min(cap, n_jobs))


# ---------------------------------------------------------------------------
# gen


def _gen_advice(kind: str, x_star, epsilon: float, seed):
    if kind == "label":
        return gen_label_advice(x_star, epsilon, seed)
    if kind == "subset":
        return gen_subset_advice(x_star, epsilon, seed)
    raise InputError(f"unknown advice model {kind!r}")


def cmd_gen(args) -> int:
    prefix = args.out
    paths = {
        "instance": f"{prefix}.instance",
        "assignment": f"{prefix}.assignment",
    }
    if args.advice is not None:
        paths["advice"] = f"{prefix}.advice"
    _refuse_existing(paths.values(), args.force)
    if args.kind == "maxcut-planted":
        plant = plant_bipartite_regular(args.n, args.d, args.gamma, seed=args.seed)
        total = len(plant.instance.edges)
    else:
        plant = plant_klin(args.n, args.k, args.m, args.delta, seed=args.seed)
        total = plant.instance.m
    fileio.write_instance(paths["instance"], plant.instance)
    fileio.write_assignment(paths["assignment"], plant.x_star)
    report = {
        "command": "gen",
        "kind": args.kind,
        "seeds": {"master": args.seed},
        "planted_value": plant.planted_value,
        "planted_fraction": plant.planted_value / total if total else 1.0,
        "files": paths,
    }
    if args.advice is not None:
        advice = _gen_advice(args.advice, plant.x_star, args.epsilon, seed=(args.seed, 1))
        fileio.write_advice(paths["advice"], advice)
        report["advice"] = {"model": args.advice, "epsilon": args.epsilon,
                            "seed": [args.seed, 1]}
    _emit(report)
    return 0


# ---------------------------------------------------------------------------
# solve


def _load_label_advice(path, n, seed) -> LabelAdvice:
    advice = fileio.read_advice(path)
    if isinstance(advice, SubsetAdvice):
        advice = subset_to_label(advice, seed)
    if advice.n != n:
        raise InputError(f"advice length {advice.n} does not match instance n={n}")
    return advice


def _solve_dispatch(algorithm, instance, advice, args, seed):
    """Returns (value, fraction, diagnostics dict, routed_to or None)."""
    if algorithm == "maxcut-lp":
        try:
            graph = fileio.instance_to_graph(instance)
        except AdviceCspError:
            graph = None
        if graph is None or graph.regular_degree is None:
            value, fraction, diag, _ = _solve_dispatch("qp-advice", instance, advice, args, seed)
            return value, fraction, diag, "qp-advice"
        params = MaxCutParams(args.c1, args.c2)
        res = solve_maxcut_with_advice(graph, advice, params, seed=(seed, 2))
        d = res.diagnostics
        diag = {
            "lp_status": d.lp_status,
            "lp_value": None if math.isnan(d.lp_value) else d.lp_value,
            "f_y": d.f_y,
            "balance_violations": d.balance_violations,
            "fallback": d.fallback,
            "committed": int(res.split.committed.size),
            "undecided": int(res.split.undecided.size),
            "assignment": res.assignment,
        }
        total = len(graph.edges)
        return res.cut_weight, res.cut_weight / total if total else 1.0, diag, None
    if algorithm == "qp-advice":
        x, weight = solve_2lin_with_advice(instance, advice)
        _, fraction = evaluate(instance, x)
        return weight, fraction, {"assignment": x, "fallback": False}, None
    if algorithm == "twolin-sdp":
        config = TwoLinConfig(
            rank=args.rank,
            sweeps=args.sweeps,
            trials=args.trials,
            hint=advice.values if advice is not None else None,
        )
        x, weight = solve_2lin(instance, config, seed=(seed, 2))
        _, fraction = evaluate(instance, x)
        return weight, fraction, {"assignment": x, "fallback": False}, None
    if algorithm == "max3lin":
        res = solve_max3lin_with_advice(
            instance, advice, delta=args.delta, epsilon=args.epsilon, seed=(seed, 2)
        )
        d = res.diagnostics
        diag = {
            "threshold": d.threshold,
            "heavy_pair_count": d.heavy_pair_count,
            "heavy_constraint_count": d.heavy_constraint_count,
            "light_constraint_count": d.light_constraint_count,
            "psi_size": d.psi_size,
            "sigma_zero_count": d.sigma_zero_count,
            "psi_fraction": d.psi_fraction,
            "unsat_total": d.unsat_total,
            "heavy_implication_violations": d.heavy_implication_violations,
            "in_guarantee": d.in_guarantee,
            "fallback": False,
            "assignment": res.assignment,
        }
        weight = res.satisfied_fraction * instance.total_weight
        return weight, res.satisfied_fraction, diag, None
    raise InputError(f"unknown algorithm {algorithm!r}")


def cmd_solve(args) -> int:
    t0 = time.monotonic()
    instance = fileio.read_instance(args.instance)
    advice = None
    if args.advice is not None:
        advice = _load_label_advice(args.advice, instance.n, seed=(args.seed, 1))
    elif args.algorithm != "twolin-sdp":
        raise InputError(f"algorithm {args.algorithm} requires --advice")
    value, fraction, diag, routed = _solve_dispatch(
        args.algorithm, instance, advice, args, args.seed
    )
    assignment = diag.pop("assignment", None)
    if args.out is not None:
        _refuse_existing([args.out], args.force)
        fileio.write_assignment(args.out, assignment)
    report = {
        "command": "solve",
        "algorithm": {"name": args.algorithm},
        "routed_to": routed,
        "instance": {"path": args.instance, "n": instance.n, "m": instance.m,
                     "k": instance.k},
        "advice": None if advice is None else {
            "path": args.advice, "epsilon": advice.epsilon,
        },
        "seeds": {"master": args.seed, "advice_stream": [args.seed, 1],
                  "algorithm_stream": [args.seed, 2]},
        "output": {"value": value, "fraction": fraction, "diagnostics": diag},
        "wall_time_s": round(time.monotonic() - t0, 4),
    }
    if args.algorithm == "max3lin":
        report["algorithm"]["delta"] = args.delta
        report["algorithm"]["epsilon"] = args.epsilon
    if args.algorithm == "maxcut-lp":
        report["algorithm"]["threshold_coeff"] = args.c1
        report["algorithm"]["slack_coeff"] = args.c2
    _emit(report)
    return 0


# ---------------------------------------------------------------------------
# bench


_REQUIRED_BENCH_KEYS = ("name", "generator", "advice", "algorithm", "seeds", "threshold")


def _bench_one(config: dict, seed: int) -> dict:
    gen = config["generator"]
    kind = gen.get("kind")
    if kind == "maxcut-planted":
        plant = plant_bipartite_regular(gen["n"], gen["d"], gen.get("gamma", 0.0), seed=seed)
        total = len(plant.instance.edges)
    elif kind == "klin-planted":
        plant = plant_klin(gen["n"], gen["k"], gen["m"], gen.get("delta", 0.0), seed=seed)
        total = plant.instance.m
    else:
        raise InputError(f"unknown generator kind {kind!r}")
    adv_cfg = config["advice"]
    advice = _gen_advice(adv_cfg.get("model", "label"), plant.x_star,
                         adv_cfg["epsilon"], seed=(seed, 1))
    if isinstance(advice, SubsetAdvice):
        advice = subset_to_label(advice, seed=(seed, 1, 1))
    algo = config["algorithm"]
    name = algo.get("name")
    if name == "maxcut-lp":
        params = MaxCutParams(algo.get("threshold_coeff", 20.0), algo.get("slack_coeff", 30.0))
        res = solve_maxcut_with_advice(plant.instance, advice, params, seed=(seed, 2))
        value, fraction = res.cut_weight, res.cut_weight / total
    elif name == "qp-advice":
        inst = plant.instance if isinstance(plant.instance, KLinInstance) else graph_to_klin(plant.instance)
        _, value = solve_2lin_with_advice(inst, advice)
        fraction = value / inst.total_weight
    elif name == "twolin-sdp":
        inst = plant.instance if isinstance(plant.instance, KLinInstance) else graph_to_klin(plant.instance)
        _, value = solve_2lin(inst, TwoLinConfig(hint=advice.values), seed=(seed, 2))
        fraction = value / inst.total_weight
    elif name == "max3lin":
        res = solve_max3lin_with_advice(
            plant.instance, advice, delta=algo["delta"],
            epsilon=algo.get("epsilon"), seed=(seed, 2),
        )
        fraction = res.satisfied_fraction
        value = fraction * plant.instance.total_weight
    else:
        raise InputError(f"unknown algorithm {name!r}")
    thr = config["threshold"]
    metric = value if thr.get("metric", "value") == "value" else fraction
    return {
        "seed": seed,
        "value": value,
        "fraction": fraction,
        "planted_value": plant.planted_value,
        "planted_fraction": plant.planted_value / total if total else 1.0,
        "passed": bool(metric >= thr["min"]),
    }


def cmd_bench(args) -> int:
    t0 = time.monotonic()
    with open(args.config, "r", encoding="utf-8") as fh:
        config = json.load(fh)
    for key in _REQUIRED_BENCH_KEYS:
        if key not in config:
            raise InputError(f"bench config missing key {key!r}")
    if "min" not in config["threshold"]:
        raise InputError("bench config missing key 'threshold.min'")
    seeds = config["seeds"]
    if isinstance(seeds, dict):
        seeds = list(range(seeds.get("start", 0), seeds.get("start", 0) + seeds["count"]))
    seeds = [int(s) for s in seeds]
    workers = _worker_count(len(seeds))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda s: _bench_one(config, s), seeds))
    else:
        rows = [_bench_one(config, s) for s in seeds]
    rows.sort(key=lambda r: seeds.index(r["seed"]))
    csv_path = args.csv or f"{config['name']}.csv"
    _refuse_existing([csv_path], args.force)
    with open(csv_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(
            fh, fieldnames=["seed", "value", "fraction", "planted_value",
                            "planted_fraction", "passed"])
        writer.writeheader()
        writer.writerows(rows)
    pass_count = sum(r["passed"] for r in rows)
    need = config.get("pass_rate", 1.0) * len(rows)
    summary = {
        "command": "bench",
        "name": config["name"],
        "rows": len(rows),
        "csv": csv_path,
        "pass_count": pass_count,
        "pass_rate": pass_count / len(rows) if rows else 1.0,
        "passed": pass_count >= need - 1e-9,
        "wall_time_s": round(time.monotonic() - t0, 4),
    }
    _emit(summary)
    return 0


# ---------------------------------------------------------------------------
# enumerate / reduce / verify


def cmd_enumerate(args) -> int:
    t0 = time.monotonic()
    instance = fileio.read_instance(args.instance)

    if args.inner == "qp-advice":
        def inner(inst, sub, seed):
            return solve_2lin_with_advice(inst, subset_to_label(sub, seed))[0]
    else:
        def inner(inst, sub, seed):
            return solve_2lin(inst, TwoLinConfig(hint=subset_to_label(sub, seed).values),
                              seed=seed)[0]

    result = enumerate_solve(instance, args.epsilon, inner, seed=args.seed, cap=args.cap)
    _, fraction = evaluate(instance, result.assignment)
    report = {
        "command": "enumerate",
        "instance": {"path": args.instance, "n": instance.n, "m": instance.m},
        "epsilon": args.epsilon,
        "inner": args.inner,
        "seeds": {"master": args.seed},
        "runs": result.runs,
        "best_subset": list(result.subset),
        "best_pattern": list(result.pattern),
        "output": {"value": result.value, "fraction": fraction},
        "wall_time_s": round(time.monotonic() - t0, 4),
    }
    if args.out is not None:
        _refuse_existing([args.out], args.force)
        fileio.write_assignment(args.out, result.assignment)
    _emit(report)
    return 0


def cmd_reduce(args) -> int:
    instance = fileio.read_instance(args.instance)
    lift = three_to_four_lin(instance, args.t)
    _refuse_existing([args.out], args.force)
    fileio.write_instance(args.out, lift.phi4)
    _emit({
        "command": "reduce",
        "instance": {"path": args.instance, "n": instance.n, "m": instance.m},
        "t": args.t,
        "lifted": {"path": args.out, "n": lift.phi4.n, "m": lift.phi4.m},
    })
    return 0


def cmd_verify(args) -> int:
    t0 = time.monotonic()
    results = verify.run_suite(args.suite, seeds=args.seeds)
    failures = [r for r in results if not r.passed]
    for r in failures[:1]:
        _log(f"FIRST FAILURE: [{r.suite}] {r.name}: {r.detail or 'no detail'}")
    _emit({
        "command": "verify",
        "suite": args.suite,
        "seeds": args.seeds,
        "checks": [
            {"name": r.name, "passed": r.passed, "detail": r.detail} for r in results
        ],
        "passed": not failures,
        "wall_time_s": round(time.monotonic() - t0, 4),
    })
    return 0 if not failures else 1


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="advice-csp",
        description="Max-Cut and Max k-Lin solvers with noisy oracle advice.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a planted instance (plus advice)")
    p.add_argument("kind", choices=["maxcut-planted", "klin-planted"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, help="degree (maxcut-planted)")
    p.add_argument("--gamma", type=float, default=0.0, help="intra-side fraction")
    p.add_argument("--k", type=int, default=3, help="arity (klin-planted)")
    p.add_argument("--m", type=int, help="constraint count (klin-planted)")
    p.add_argument("--delta", type=float, default=0.0, help="noise rate (klin-planted)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output path prefix")
    p.add_argument("--advice", choices=["label", "subset"], help="also write advice")
    p.add_argument("--epsilon", type=float, default=0.5)
    p.add_argument("--force", action="store_true")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("solve", help="run one solver on instance and advice files")
    p.add_argument("algorithm", choices=ALGORITHMS)
    p.add_argument("--instance", required=True)
    p.add_argument("--advice")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--c1", type=float, default=20.0, help="maxcut threshold coefficient")
    p.add_argument("--c2", type=float, default=30.0, help="maxcut slack coefficient")
    p.add_argument("--delta", type=float, help="max3lin near-satisfiability parameter")
    p.add_argument("--epsilon", type=float, help="max3lin advice parameter override")
    p.add_argument("--rank", type=int, help="twolin-sdp embedding rank")
    p.add_argument("--sweeps", type=int, default=200)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--out", help="write the solution assignment here")
    p.add_argument("--force", action="store_true")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("bench", help="run a seeded benchmark from a JSON config")
    p.add_argument("config")
    p.add_argument("--csv", help="per-seed CSV path (default: <name>.csv)")
    p.add_argument("--force", action="store_true")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("enumerate", help="deterministic subset-advice enumeration")
    p.add_argument("--instance", required=True)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--inner", choices=["qp-advice", "twolin-sdp"], default="qp-advice")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.add_argument("--out", help="write the best assignment here")
    p.add_argument("--force", action="store_true")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("reduce", help="lift a 3-Lin instance to 4-Lin")
    p.add_argument("--instance", required=True)
    p.add_argument("--t", type=int, required=True, help="number of new variables")
    p.add_argument("--out", required=True)
    p.add_argument("--force", action="store_true")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("verify", help="run a named invariant suite")
    p.add_argument("--suite", required=True, choices=sorted(verify.SUITES))
    p.add_argument("--seeds", type=int, default=100)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "solve" and args.algorithm == "max3lin" and args.delta is None:
        _log("error: max3lin requires --delta")
        return 1
    if args.command == "gen":
        if args.kind == "maxcut-planted" and args.d is None:
            _log("error: maxcut-planted requires --d")
            return 1
        if args.kind == "klin-planted" and args.m is None:
            _log("error: klin-planted requires --m")
            return 1
    try:
        return args.func(args)
    except BudgetError as exc:
        _log(f"budget refused: {exc}")
        return 2
    except InternalError as exc:
        _log(f"internal consistency failure: {exc}")
        return 3
    except AdviceCspError as exc:
        _log(f"error: {exc}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
