"""Command-line entry point.

Exit codes: 0 success, 1 input error, 2 numerical failure.
"""
from __future__ import annotations

import argparse
import logging
import sys
import time

import numpy as np

from . import enclosing, formulation, regular, solver, special, weissbach
from .errors import CylinderError, InputError, NumericalError
from .serialization import closed_form, dumps_report, parse_simplex, render_text

log = logging.getLogger(__name__)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(f"usage: {message}")


def _common(p):
    p.add_argument("--seed", type=int, default=42, help="seed for random starts and sampling")
    p.add_argument("--restarts", type=int, default=None, help="random Newton starts for the critical-point solver")
    p.add_argument("--tol", type=float, default=1e-12, help="Newton residual tolerance")
    p.add_argument("--output", default=None, help="write the report here instead of stdout")
    p.add_argument("--format", choices=("json", "text"), default="text")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="cylsimplex", description="Extreme circumscribing and enclosing cylinders of simplices.")
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True
    p = sub.add_parser("circumscribe", help="all critical circumscribing cylinders and the global minimum")
    p.add_argument("file")
    _common(p)
    p = sub.add_parser("enclose", help="smallest enclosing cylinder of a tetrahedron")
    p.add_argument("file")
    p.add_argument("--samples", type=int, default=200_000, help="oracle sample count (0 disables)")
    _common(p)
    p = sub.add_parser("regular", help="critical directions of the regular simplex")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--census", action="store_true", help="include every census entry")
    _common(p)
    p = sub.add_parser("weissbach", help="solution census of the quartic-sum Lagrange system")
    p.add_argument("--dim", type=int, required=True)
    _common(p)
    p = sub.add_parser("oracle", help="direction-sampling estimate of the enclosing radius")
    p.add_argument("file")
    p.add_argument("--samples", type=int, default=200_000)
    _common(p)
    return ap


def _read(path: str):
    try:
        if path == "-":
            data = sys.stdin.buffer.read()
        else:
            with open(path, "rb") as fh:
                data = fh.read()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    return parse_simplex(data)


def _radius(r: float) -> dict:
    return {"value": r, "closed_form": closed_form(r)}


def _config(cfg: solver.SolverConfig, n: int) -> dict:
    return {"rng_seed": cfg.rng_seed, "tol": cfg.newton_tol, "restarts": cfg.n_restarts(n),
            "newton_max_iter": cfg.newton_max_iter, "dedup_angle_tol": cfg.dedup_angle_tol}


def _solver_cfg(args, **overrides) -> solver.SolverConfig:
    kw = dict(rng_seed=args.seed, newton_tol=args.tol)
    if args.restarts is not None:
        kw["restarts"] = args.restarts
    kw.update(overrides)
    try:
        return solver.SolverConfig(**kw)
    except ValueError as e:
        raise InputError(str(e)) from None


def _input_echo(s, label):
    return {"dim": s.dim, "label": label, "vertices": np.asarray(s.vertices)}


def _classification(s) -> dict | None:
    if s.dim != 3:
        return None
    c = special.classify(s)
    out = {"tag": c.tag, "area_partition": c.area_partition, "areas": c.areas,
           "extrema_bound": c.extrema_bound, "bound_breakdown": c.bound_breakdown}
    if c.tag == "equifacial":
        b = special.box_params(s)
        cyl = special.equifacial_min_cylinder(s)
        out["box_w"] = b.w
        out["equifacial_min"] = {"radius": _radius(cyl.radius), "u": cyl.axis.u, "v": cyl.axis.v}
    return out


def _point_row(p: solver.CriticalPoint) -> dict:
    return {"v": p.v, "u": p.u, "r": p.r, "kind": p.kind, "residual": p.residual,
            "basin_count": p.basin_count, "lambda1": p.lambda1, "lambda2": p.lambda2}


def cmd_circumscribe(args) -> dict:
    s, label = _read(args.file)
    cfg = _solver_cfg(args)
    t0 = time.perf_counter()
    points = solver.critical_points(s, cfg)
    best = solver.global_min(points)
    elapsed = time.perf_counter() - t0
    return {
        "summary": f"{len(points)} critical directions; smallest circumscribing radius {best.radius!r}",
        "command": "circumscribe",
        "input": _input_echo(s, label),
        "classification": _classification(s),
        "critical_points": [_point_row(p) for p in points],
        "global_min": {"radius": _radius(best.radius), "u": best.axis.u, "v": best.axis.v},
        "bounds": formulation.bezout_bounds(s.dim),
        "config": _config(cfg, s.dim),
        "timings": {"solve_s": elapsed},
    }


def cmd_enclose(args) -> dict:
    s, label = _read(args.file)
    if s.dim != 3:
        raise InputError("enclose is defined for tetrahedra (dim 3)")
    overrides = {} if args.restarts is not None else dict(
        restarts=enclosing.ENCLOSING_RESTARTS, newton_max_iter=enclosing.ENCLOSING_NEWTON_ITERS)
    cfg = _solver_cfg(args, **overrides)
    t0 = time.perf_counter()
    res = enclosing.smallest_enclosing_cylinder(s, cfg=cfg, oracle_samples=args.samples or None, rng_seed=args.seed)
    elapsed = time.perf_counter() - t0
    cyl = res.cylinder
    oracle = None
    if res.oracle_gap is not None:
        oracle = {"radius": res.detail["oracle_radius"], "direction": res.detail["oracle_direction"],
                  "gap": res.oracle_gap, "samples": args.samples}
    return {
        "summary": f"smallest enclosing radius {cyl.radius!r} ({res.witness})",
        "command": "enclose",
        "input": _input_echo(s, label),
        "classification": _classification(s),
        "enclosing": {"radius": _radius(cyl.radius), "u": cyl.axis.u, "v": cyl.axis.v,
                      "witness": res.witness, "support": res.support, "triple": res.detail["triple"],
                      "circumscribing_min": res.detail["circumscribing_min"],
                      "n_candidates": res.detail["n_candidates"]},
        "oracle": oracle,
        "config": _config(cfg, 3),
        "timings": {"solve_s": elapsed},
    }


def cmd_regular(args) -> dict:
    n = args.dim
    t0 = time.perf_counter()
    census = regular.enumerate_all_critical(n)
    r, v = regular.regular_min_radius(n, census)
    elapsed = time.perf_counter() - t0
    R = regular.regular_vertices(n)
    shapes = {}
    for key, entries in census.by_shape().items():
        shapes["+".join(map(str, key))] = {"counts": [e.count for e in entries],
                                            "real": [e.real for e in entries],
                                            "total": sum(e.count for e in entries)}
    out = {
        "summary": f"regular {n}-simplex: smallest circumscribing radius {r!r}; census total {census.total}",
        "command": "regular",
        "dim": n,
        "edge_length": float(np.sqrt(2.0)),
        "min_radius": _radius(r),
        "direction_embedded": v,
        "direction_chart": R.to_chart(v),
        "census": {
            "total": census.total,
            "real_total": sum(e.count for e in census.real_entries),
            "canonical_real_directions": census.canonical_real_directions,
            "by_shape": shapes,
            "two_block_exceptions": census.empty_block_exceptions,
        },
        "bounds": formulation.bezout_bounds(n),
        "config": {"rng_seed": args.seed},
        "timings": {"solve_s": elapsed},
    }
    if n <= 7:
        out["stirling_check"] = regular.stirling_census_check(n, census)
    if args.census:
        out["census"]["entries"] = [
            {"partition": e.partition, "values": e.values, "real": e.real, "count": e.count,
             "sign_paired": e.sign_paired, "sigma4": regular.sigma_eval(e.vector())[3]}
            for e in census.entries
        ]
    return out


def cmd_weissbach(args) -> dict:
    n = args.dim
    t0 = time.perf_counter()
    c = weissbach.enumerate_solutions(n)
    elapsed = time.perf_counter() - t0
    fam = c.family_counts()
    out = {
        "summary": f"{c.total} solutions ({fam['lambda2_zero']} + {fam['lambda2_nonzero']})",
        "command": "weissbach",
        "dim": n,
        "total": c.total,
        "lambda2_zero": fam["lambda2_zero"],
        "lambda2_nonzero": fam["lambda2_nonzero"],
        "lambda2_zero_closed_form": weissbach.lambda2_zero_census(n),
        "all_real": c.all_real,
        "positive_dimensional_shapes": c.positive_dimensional_shapes,
        "orbits": [{"values": o.values, "multiplicities": o.multiplicities, "lambda1": o.lambda1,
                    "lambda2": o.lambda2, "size": o.size, "family": o.family} for o in c.orbits],
        "config": {"rng_seed": args.seed},
        "timings": {"solve_s": elapsed},
    }
    if n in (3, 4):
        out["printed_tuples"] = weissbach.verify_listed_tuples(n)
    return out


def cmd_oracle(args) -> dict:
    s, label = _read(args.file)
    if args.samples < 1:
        raise InputError("--samples must be positive")
    t0 = time.perf_counter()
    r, v = enclosing.oracle_min_enclosing(s.vertices, n_samples=args.samples, rng_seed=args.seed)
    elapsed = time.perf_counter() - t0
    return {
        "summary": f"oracle enclosing radius {r!r}",
        "command": "oracle",
        "input": _input_echo(s, label),
        "oracle": {"radius": _radius(r), "direction": v, "samples": args.samples},
        "config": {"rng_seed": args.seed},
        "timings": {"solve_s": elapsed},
    }


COMMANDS = {"circumscribe": cmd_circumscribe, "enclose": cmd_enclose, "regular": cmd_regular,
            "weissbach": cmd_weissbach, "oracle": cmd_oracle}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        report = COMMANDS[args.command](args)
        text = dumps_report(report) if args.format == "json" else render_text(report)
        if args.output:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return 0
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except (NumericalError, CylinderError, np.linalg.LinAlgError) as e:
        print(f"numerical failure: {e}", file=sys.stderr)
        return 2
    except SystemExit as e:  # --help
        return int(e.code or 0)


if __name__ == "__main__":
    sys.exit(main())
