"""Command-line front end.

Subcommands: sol, gowers, min-sol, max-sol, max-free, construct,
kernelize, nil, scan, reproduce.  Extremal commands emit JSON
{value, certificate, method, boundKind, verification}.  Exit codes:
0 success, 1 input error, 2 budget exhaustion.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import acceptance
from .counting import CyclicFunction, CyclicSubset, sol_count, sol_fast
from .extremal import (
    interval_free_set,
    max_free_density_exact,
    max_free_density_heuristic,
    max_sol,
    min_sol,
    multiplicative_free_set,
    weyl_set,
)
from .forms import LinearFormSystem, kernelize
from .gowers import gowers_norm
from .harness import scan_convergence
from .nil.model import FilteredNilmanifoldModel, model_by_name
from .periodic import (
    build_periodic_irrational,
    character_sum,
    vertical_sum,
    verify_periodicity,
)
from .nil.characters import enumerate_characters, is_irrational


class BudgetExceeded(RuntimeError):
    pass


def _load_system(path: str) -> LinearFormSystem:
    return LinearFormSystem.load(path)


def _load_family(path: str) -> list[LinearFormSystem]:
    obj = json.loads(Path(path).read_text(encoding="utf-8"))
    if isinstance(obj, dict) and "systems" in obj:
        obj = obj["systems"]
    if not isinstance(obj, list):
        raise ValueError('family files hold a list of systems or {"systems": [...]}')
    return [LinearFormSystem.from_json(json.dumps(item)) for item in obj]


def _load_model(name_or_path: str) -> FilteredNilmanifoldModel:
    if Path(name_or_path).exists():
        return FilteredNilmanifoldModel.load(name_or_path)
    return model_by_name(name_or_path)


def _load_function_csv(path: str) -> CyclicFunction:
    rows = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line.lower().startswith("index"):
            continue
        idx_text, value_text = line.split(",")
        rows[int(idx_text)] = float(value_text)
    n = len(rows)
    if sorted(rows) != list(range(n)):
        raise ValueError("function CSV must cover indices 0..N-1 exactly")
    return CyclicFunction(n, np.array([rows[i] for i in range(n)], dtype=np.complex128))


def _emit(args, payload: dict) -> None:
    if getattr(args, "out", None):
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        path = out_dir / f"{payload.get('command', 'result')}.json"
        path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    print(json.dumps(payload, indent=2))


def _alpha(text: str) -> Fraction:
    return Fraction(text)


def cmd_sol(args) -> int:
    system = _load_system(args.system)
    subset = CyclicSubset.load(args.set)
    if args.fast:
        kp = kernelize(system)
        value = sol_fast([subset.indicator()] * system.t, system, kp)
        payload = {
            "command": "sol",
            "value": value.real,
            "method": "fast",
            "modulus": subset.modulus,
        }
    else:
        measure = sol_count(subset, system)
        payload = {
            "command": "sol",
            "count": measure.count,
            "points": measure.points,
            "value": str(measure.fraction),
            "valueFloat": float(measure.fraction),
            "method": "brute",
            "modulus": subset.modulus,
        }
    _emit(args, payload)
    return 0


def cmd_gowers(args) -> int:
    if args.set:
        f = CyclicSubset.load(args.set).indicator()
        source = args.set
    elif args.function:
        f = _load_function_csv(args.function)
        source = args.function
    else:
        raise ValueError("need --set or --function")
    value = gowers_norm(f, args.d)
    _emit(
        args,
        {"command": "gowers", "d": args.d, "norm": value, "modulus": f.modulus, "input": source},
    )
    return 0


def _extremal_payload(command: str, result) -> dict:
    payload = result.as_json_dict()
    payload["command"] = command
    return payload


def cmd_min_sol(args) -> int:
    system = _load_system(args.system)
    mode = "heuristic" if args.heuristic else "exact"
    kw = {"seed": args.seed, "budget": args.budget} if args.heuristic else {}
    result = min_sol(system, args.alpha, args.n, mode=mode, **kw)
    _emit(args, _extremal_payload("min-sol", result))
    return 0


def cmd_max_sol(args) -> int:
    system = _load_system(args.system)
    mode = "heuristic" if args.heuristic else "exact"
    kw = {"seed": args.seed, "budget": args.budget} if args.heuristic else {}
    result = max_sol(system, args.alpha, args.n, mode=mode, **kw)
    _emit(args, _extremal_payload("max-sol", result))
    return 0


def cmd_max_free(args) -> int:
    family = _load_family(args.family)
    if args.heuristic:
        result = max_free_density_heuristic(
            family, args.n, seed=args.seed, ignore_constant_configs=args.ignore_constant
        )
    else:
        result = max_free_density_exact(
            family, args.n, ignore_constant_configs=args.ignore_constant
        )
    _emit(args, _extremal_payload("max-free", result))
    return 0


def cmd_construct(args) -> int:
    if args.construction == "weyl":
        subset = weyl_set(args.p, args.k, args.d)
        payload = {
            "command": "construct-weyl",
            "value": str(subset.density),
            "valueFloat": float(subset.density),
            "certificate": {"modulus": subset.modulus, "members": list(subset.members)},
            "method": "construction",
            "boundKind": "lowerBound",
            "verification": {"solExactlyZero": True},
        }
    elif args.construction == "mult":
        subset = multiplicative_free_set(args.k, args.p)
        payload = {
            "command": "construct-mult",
            "value": str(subset.density),
            "valueFloat": float(subset.density),
            "certificate": {"modulus": subset.modulus, "members": list(subset.members)},
            "method": "construction",
            "boundKind": "lowerBound",
            "verification": {"solExactlyZero": True},
        }
    else:  # interval
        system = _load_system(args.system)
        result = interval_free_set(system, args.n)
        if result is None:
            payload = {
                "command": "construct-interval",
                "value": None,
                "certificate": None,
                "method": "construction",
                "boundKind": "lowerBound",
                "verification": {"note": "no free interval within the denominator budget"},
            }
        else:
            payload = _extremal_payload("construct-interval", result)
    _emit(args, payload)
    return 0


def cmd_kernelize(args) -> int:
    system = _load_system(args.system)
    kp = kernelize(system)
    _emit(
        args,
        {
            "command": "kernelize",
            "matrix": [list(r) for r in kp.matrix],
            "badModulus": kp.bad_modulus,
            "invariantFactors": list(kp.invariant_factors),
            "k": kp.k,
        },
    )
    return 0


def cmd_nil(args) -> int:
    model = _load_model(args.model)
    poly = build_periodic_irrational(model, args.q, args.A, seed=args.seed)
    coeff_coords = [
        [str(c) for c in model.malcev_coords(g)] for g in poly.coefficients
    ]
    payload = {
        "command": "nil-build-periodic",
        "model": model.name,
        "q": args.q,
        "A": args.A,
        "seed": args.seed,
        "taylorCoefficients": coeff_coords,
    }
    if args.verify in ("basic", "full"):
        ok, witness = is_irrational(poly, args.A)
        verification = {
            "periodicSample": verify_periodicity(poly, args.q, args.q),
            "irrational": ok,
        }
        if args.verify == "full":
            sums = {}
            for xi in enumerate_characters(model, 1, args.A):
                value = character_sum(poly, xi, args.q)
                sums[str(list(xi.frequency))] = [value.real, value.imag]
            verification["levelOneCharacterSums"] = sums
            verification["verticalSum"] = vertical_sum(poly, args.q)
            verification["verticalSumCalibration"] = (
                "empirical Gauss-sum scale; 2/sqrt(q) is a calibration choice, "
                "not a derived rate"
            )
        payload["verification"] = verification
    _emit(args, payload)
    return 0


def cmd_scan(args) -> int:
    system = _load_system(args.system)
    moduli = [int(x) for x in args.moduli.split(",") if x.strip()]
    records, csv_text = scan_convergence(
        system,
        args.quantity,
        args.alpha,
        moduli,
        mode=args.mode,
        seed=args.seed,
        out_dir=args.out,
        min_prime_factor=args.min_p1,
        budget_ms=args.budget_ms,
    )
    skipped = [r.n for r in records if r.method == "skipped"]
    if args.format == "csv":
        print(csv_text, end="")
    else:
        _emit(
            args,
            {
                "command": "scan",
                "rows": [r.csv_row() for r in records],
                "skipped": skipped,
            },
        )
    if args.budget_ms is not None and skipped:
        return 2
    if skipped and len(skipped) == len(records):
        return 2
    return 0


def cmd_reproduce(args) -> int:
    try:
        report = acceptance.reproduce(args.id)
    except KeyError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    payload = {
        "command": "reproduce",
        "criterion": report.criterion,
        "passed": report.passed,
        "elapsedSeconds": report.elapsed_s,
        "details": {k: str(v) for k, v in report.details.items()},
        "failures": report.failures,
    }
    _emit(args, payload)
    print(report.line())
    return 0 if report.passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cyclicforms",
        description="solution measures, uniformity norms, extremal sets, periodic nil-orbits",
    )
    parser.add_argument("--out", help="directory for JSON/CSV/SVG artifacts")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--budget-ms", type=int, default=None, dest="budget_ms")
    parser.add_argument("--format", choices=("csv", "json"), default="json")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sol", help="solution measure of a set across a system")
    p.add_argument("--system", required=True)
    p.add_argument("--set", required=True)
    p.add_argument("--fast", action="store_true")
    p.set_defaults(func=cmd_sol)

    p = sub.add_parser("gowers", help="Gowers uniformity norm of a set or function")
    p.add_argument("--set")
    p.add_argument("--function")
    p.add_argument("--d", type=int, required=True)
    p.set_defaults(func=cmd_gowers)

    for name, fn in (("min-sol", cmd_min_sol), ("max-sol", cmd_max_sol)):
        p = sub.add_parser(name, help=f"{name} extremal value")
        p.add_argument("--system", required=True)
        p.add_argument("--alpha", type=_alpha, required=True)
        p.add_argument("--n", type=int, required=True)
        group = p.add_mutually_exclusive_group()
        group.add_argument("--exact", action="store_true")
        group.add_argument("--heuristic", action="store_true")
        p.add_argument("--budget", type=int, default=4000)
        p.add_argument("--seed", type=int, default=argparse.SUPPRESS)
        p.set_defaults(func=fn)

    p = sub.add_parser("max-free", help="maximum free density for a family")
    p.add_argument("--family", required=True)
    p.add_argument("--n", type=int, required=True)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--exact", action="store_true")
    group.add_argument("--heuristic", action="store_true")
    p.add_argument("--ignore-constant", action="store_true", dest="ignore_constant")
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    p.set_defaults(func=cmd_max_free)

    p = sub.add_parser("construct", help="explicit free-set constructions")
    csub = p.add_subparsers(dest="construction", required=True)
    w = csub.add_parser("weyl")
    w.add_argument("--p", type=int, required=True)
    w.add_argument("--k", type=int, required=True)
    w.add_argument("--d", type=int, required=True)
    w.set_defaults(func=cmd_construct)
    m = csub.add_parser("mult")
    m.add_argument("--k", type=int, required=True)
    m.add_argument("--p", type=int, required=True)
    m.set_defaults(func=cmd_construct)
    i = csub.add_parser("interval")
    i.add_argument("--system", required=True)
    i.add_argument("--n", type=int, required=True)
    i.set_defaults(func=cmd_construct)

    p = sub.add_parser("kernelize", help="kernel presentation of a system")
    p.add_argument("--system", required=True)
    p.set_defaults(func=cmd_kernelize)

    p = sub.add_parser("nil", help="nilmanifold constructions")
    nsub = p.add_subparsers(dest="nil_command", required=True)
    b = nsub.add_parser("build-periodic")
    b.add_argument("--model", required=True)
    b.add_argument("--q", type=int, required=True)
    b.add_argument("--A", type=int, required=True)
    b.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    b.add_argument("--verify", choices=("none", "basic", "full"), default="basic")
    b.set_defaults(func=cmd_nil)

    p = sub.add_parser("scan", help="convergence scan over moduli")
    p.add_argument("--system", required=True)
    p.add_argument("--quantity", choices=("m", "M", "d"), required=True)
    p.add_argument("--alpha", type=_alpha, default=Fraction(1, 2))
    p.add_argument("--moduli", required=True, help="comma-separated list")
    p.add_argument("--mode", choices=("exact", "heuristic"), default="exact")
    p.add_argument("--min-p1", type=int, default=1, dest="min_p1")
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("reproduce", help="re-run an acceptance criterion by id")
    p.add_argument("--id", required=True)
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except BudgetExceeded as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
