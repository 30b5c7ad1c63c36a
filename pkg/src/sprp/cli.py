"""Command line: ``sprp generate | solve | bench``.

Exit codes: 0 success, 1 usage or input error, 2 validation failure,
3 solver limit reached.
"""
from __future__ import annotations

import argparse
import csv
import itertools
import sys
from concurrent.futures import ProcessPoolExecutor
from decimal import ROUND_HALF_UP, Decimal, localcontext
from fractions import Fraction
from pathlib import Path

from . import instance_io
from .formulations import VarMap, WalkError, reconstruct_walk
from .generator import GeneratorSpec, generate_instance
from .mip.lpformat import SolutionFormatError, export_lp, read_solution, write_solution
from .mip.model import OPTIMAL, evaluate
from .numbers import decimal_str, is_decimal, parse_fraction
from .solve import SolverMismatch, solve_instance, standard_counterpart
from .warehouse import VARIANTS, InstanceError, reduce_to_relevant
from .formulations import build_model

EXIT_OK, EXIT_ERROR, EXIT_INVALID, EXIT_LIMIT = 0, 1, 2, 3


def fmt(value) -> str:
    if value is None:
        return "-"
    value = Fraction(value)
    return decimal_str(value) if is_decimal(value) else str(value)


def fmt_pct(value: Fraction) -> str:
    with localcontext() as ctx:
        ctx.prec = 50
        d = (Decimal(value.numerator) / Decimal(value.denominator)).quantize(
            Decimal("0.01"), rounding=ROUND_HALF_UP)
    text = format(d, "f")
    return "0.00" if text == "-0.00" else text


# -- generate -------------------------------------------------------------------------

def _spec_from(args, **over) -> GeneratorSpec:
    fields = dict(variant=args.variant, m=args.m, n=args.n, a=args.a, alpha=args.alpha,
                  capacity=args.capacity, beta=parse_fraction(args.beta), sigma=args.sigma,
                  max_demand=args.max_demand, cross_gap=args.cross_gap)
    fields.update(over)
    return GeneratorSpec(**fields)


def cmd_generate(args) -> int:
    spec = _spec_from(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for seed in range(args.seed, args.seed + args.seeds):
        inst = generate_instance(spec, seed)
        name = f"{spec.variant}_m{spec.m}_n{spec.n}_a{spec.a}_s{seed}.json"
        instance_io.save(inst, out / name)
    print(f"wrote {args.seeds} instance(s) to {out}")
    return EXIT_OK


# -- solve ----------------------------------------------------------------------------

def _external(args, instance) -> int:
    reduced, _ = reduce_to_relevant(instance)
    model, vmap = build_model(reduced)
    if args.export_lp:
        lp_path = Path(args.export_lp)
        lp_path.write_text(export_lp(model), encoding="utf-8")
        Path(str(lp_path) + ".map").write_text(vmap.sidecar(), encoding="utf-8")
        print(f"wrote {lp_path} and {lp_path}.map")
    if not args.import_sol:
        return EXIT_OK
    sidecar = Path(args.sidecar) if args.sidecar else (
        Path(str(args.export_lp) + ".map") if args.export_lp else None)
    if sidecar is not None and sidecar.exists():
        vmap = VarMap.from_sidecar(model, sidecar.read_text(encoding="utf-8"))
    imported = read_solution(model, Path(args.import_sol).read_text(encoding="utf-8"))
    if imported.missing:
        print(f"warning: {len(imported.missing)} variable(s) missing from the solution, set to 0")
    values = [imported.values[v.name] for v in model.variables]
    ev = evaluate(model, values)
    print(f"objective: {fmt(ev.objective)}")
    if not ev.feasible:
        print(f"infeasible: violates {', '.join((ev.out_of_bounds + ev.violated)[:10])}")
        return EXIT_INVALID
    print("status: feasible")
    if args.validate:
        try:
            walk = reconstruct_walk(instance.variant, reduced, vmap, values)
        except WalkError as exc:
            print(f"validation failed: {exc}")
            return EXIT_INVALID
        print(f"walk: {walk.summary()}")
    return EXIT_OK


def cmd_solve(args) -> int:
    instance = instance_io.load(args.instance)
    if args.solver == "external":
        return _external(args, instance)
    if args.solver == "dp" and instance.variant != "standard":
        raise SolverMismatch(f"--solver dp handles standard instances only, got {instance.variant}")
    try:
        rep = solve_instance(instance, args.solver, time_limit=args.time_limit,
                             node_limit=args.node_limit, validate=args.validate)
    except WalkError as exc:
        print(f"validation failed: {exc}")
        return EXIT_INVALID
    print(f"objective: {fmt(rep.objective)}")
    print(f"status: {rep.status}")
    print(f"time: {rep.seconds:.3f}s")
    if rep.walk is not None:
        print(f"walk: {rep.walk.summary()}")
    for note in rep.notes:
        print(f"note: {note}")
    if rep.model is not None:
        if args.export_lp:
            lp_path = Path(args.export_lp)
            lp_path.write_text(export_lp(rep.model), encoding="utf-8")
            Path(str(lp_path) + ".map").write_text(rep.vmap.sidecar(), encoding="utf-8")
        if args.write_sol and rep.values is not None:
            Path(args.write_sol).write_text(write_solution(rep.model, rep.values, rep.objective),
                                            encoding="utf-8")
    if rep.status != OPTIMAL:
        return EXIT_LIMIT if rep.status in ("time-limit", "bound-limit") else EXIT_ERROR
    return EXIT_OK


# -- bench ----------------------------------------------------------------------------

def _bench_one(task):
    spec, seed, time_limit = task
    inst = generate_instance(spec, seed)
    rep = solve_instance(inst, "bb", time_limit=time_limit)
    base = standard_counterpart(inst)
    delta = None
    if base is not None and rep.status == OPTIMAL:
        std = solve_instance(base, "dp").objective
        delta = (rep.objective - std) / std * 100
    return rep.status, rep.seconds, delta


def _grid(args):
    axes = {"m": args.m, "a": args.a}
    if args.variant == "decoupling":
        axes["capacity"] = args.capacity
        axes["beta"] = args.beta
    if args.variant == "multidepot":
        axes["sigma"] = args.sigma
    if args.variant == "scattered":
        axes["alpha"] = args.alpha
    keys = list(axes)
    for combo in itertools.product(*(axes[k] for k in keys)):
        yield dict(zip(keys, combo))


def cmd_bench(args) -> int:
    rows = []
    groups = list(_grid(args))
    tasks, owners = [], []
    for gi, group in enumerate(groups):
        over = dict(group)
        if "beta" in over:
            over["beta"] = parse_fraction(over["beta"])
        spec = GeneratorSpec(variant=args.variant, n=args.n, cross_gap=args.cross_gap,
                             max_demand=args.max_demand,
                             **{k: over.get(k, d) for k, d in
                                (("m", None), ("a", None), ("alpha", 1), ("capacity", 2),
                                 ("beta", Fraction(1, 2)), ("sigma", 0.5))})
        for seed in range(args.seed, args.seed + args.seeds):
            tasks.append((spec, seed, args.time_limit))
            owners.append(gi)
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_bench_one, tasks))
    else:
        results = [_bench_one(t) for t in tasks]
    worst = EXIT_OK
    for gi, group in enumerate(groups):
        mine = [r for r, o in zip(results, owners) if o == gi]
        statuses = [s for s, _, _ in mine]
        times = [t for _, t, _ in mine]
        unsolved = [s for s in statuses if s != OPTIMAL]
        deltas = [d for _, _, d in mine if d is not None]
        row = {"group": ";".join(f"{k}={v}" for k, v in group.items())}
        row.update({k: v for k, v in group.items()})
        row["instances"] = len(mine)
        if unsolved:
            row["delta_avg"] = ""
            row["status"] = unsolved[0]
            worst = EXIT_LIMIT
        else:
            row["delta_avg"] = fmt_pct(sum(deltas, Fraction(0)) / len(deltas)) if deltas else ""
            row["status"] = "ok"
        row["t_avg"] = f"{sum(times) / len(times):.3f}"
        row["t_max"] = f"{max(times):.3f}"
        rows.append(row)
    fields = list(rows[0]) if rows else ["group", "instances", "delta_avg", "status", "t_avg", "t_max"]
    out = open(args.out, "w", newline="", encoding="utf-8") if args.out else sys.stdout
    try:
        writer = csv.DictWriter(out, fieldnames=fields)
        writer.writeheader()
        writer.writerows(rows)
    finally:
        if args.out:
            out.close()
    return worst


# -- parser ---------------------------------------------------------------------------

def _spec_args(p, multi=False):
    nargs = "+" if multi else None
    p.add_argument("--variant", choices=VARIANTS, default="standard")
    p.add_argument("--m", type=int, nargs=nargs, required=True, help="number of aisles")
    p.add_argument("--n", type=int, default=30, help="positions per aisle")
    p.add_argument("--a", type=int, nargs=nargs, required=True, help="required positions / SKUs")
    p.add_argument("--alpha", type=int, nargs=nargs, default=[1] if multi else 1)
    p.add_argument("--capacity", type=int, nargs=nargs, default=[2] if multi else 2)
    p.add_argument("--beta", nargs=nargs, default=["0.5"] if multi else "0.5")
    p.add_argument("--sigma", type=float, nargs=nargs, default=[0.5] if multi else 0.5)
    p.add_argument("--max-demand", type=int, default=1)
    p.add_argument("--cross-gap", type=int, default=5)
    p.add_argument("--seed", type=int, default=0, help="first seed")
    p.add_argument("--seeds", type=int, default=1, help="number of consecutive seeds")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sprp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write random instances")
    _spec_args(g)
    g.add_argument("--out", default=".", help="output directory")
    g.set_defaults(func=cmd_generate)

    s = sub.add_parser("solve", help="solve one instance file")
    s.add_argument("instance")
    s.add_argument("--solver", choices=("bb", "dp", "oracle", "external"), default="bb")
    s.add_argument("--export-lp", help="write the model in LP format (plus a .map sidecar)")
    s.add_argument("--import-sol", help="read an external 'name value' solution file")
    s.add_argument("--sidecar", help="variable map for --import-sol (default: <lp>.map)")
    s.add_argument("--write-sol", help="write the bundled solver's solution")
    s.add_argument("--validate", action="store_true", help="rebuild and check the picker walk")
    s.add_argument("--time-limit", type=float, default=60.0)
    s.add_argument("--node-limit", type=int)
    s.set_defaults(func=cmd_solve)

    b = sub.add_parser("bench", help="run an experiment grid and emit CSV")
    _spec_args(b, multi=True)
    b.add_argument("--out", help="CSV path (default stdout)")
    b.add_argument("--jobs", type=int, default=1)
    b.add_argument("--time-limit", type=float, default=60.0)
    b.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InstanceError, SolverMismatch, SolutionFormatError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
