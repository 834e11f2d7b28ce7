"""Acceptance criteria 1-9, one test each.

Every test records a PASS/FAIL line that is printed in the terminal summary.
"""
import io
import json
import time
from contextlib import redirect_stdout

import numpy as np

import conftest
from cylsimplex.cli import main
from cylsimplex.enclosing import oracle_min_enclosing, smallest_enclosing_cylinder
from cylsimplex.errors import DegenerateError
from cylsimplex.formulation import bezout_bounds, build
from cylsimplex.geometry import SimplexN, box_simplex, recover_axis, regular_tetrahedron
from cylsimplex.regular import (SigmaPoint, enumerate_all_critical, project_to_feasible, radius_sq_from_sigma4,
                                regular_vertices)
from cylsimplex.solver import SolverConfig, critical_points, global_min
from cylsimplex.special import OPPOSITE_PAIRS, equifacial_min_cylinder
from cylsimplex.weissbach import enumerate_solutions, verify_listed_tuples

from _util import random_rotation, random_simplex

R4 = float(7 * np.sqrt(5) / 20)


def record(num, checks: dict, detail: str):
    ok = all(checks.values())
    failed = [k for k, v in checks.items() if not v]
    conftest.ACCEPTANCE_LINES.append((num, ok, detail + (f"  failed: {', '.join(failed)}" if failed else "")))
    assert ok, f"criterion {num} failed: {failed} ({detail})"


def test_criterion_1_regular_e4_radius():
    buf = io.StringIO()
    t0 = time.perf_counter()
    with redirect_stdout(buf):
        code = main(["regular", "--dim", "4", "--format", "json"])
    elapsed = time.perf_counter() - t0
    r = json.loads(buf.getvalue())["min_radius"]["value"]
    record(1, {"exit": code == 0, "radius": abs(r - R4) < 1e-9, "runtime": elapsed < 1.0},
           f"r = {r!r} (target {R4!r}), {elapsed:.3f} s")


def test_criterion_2_regular_e4_census():
    t0 = time.perf_counter()
    c = enumerate_all_critical(4)
    elapsed = time.perf_counter() - t0
    shapes = c.by_shape()
    a, b = shapes.get((1, 1, 3), []), shapes.get((1, 2, 2), [])
    checks = {
        "total": c.total == 150,
        "shapes": set(shapes) == {(1, 1, 3), (1, 2, 2)},
        "k=l=1 blocks": sorted(e.count for e in a) == [20, 20, 20],
        "k=l=1 complex": sum(e.count for e in a if not e.real) == 40,
        "k=1,l=2 blocks": sorted(e.count for e in b) == [30, 30, 30],
        "k=1,l=2 real": all(e.real for e in b),
        "runtime": elapsed < 2.0,
    }
    record(2, checks, f"total {c.total}: {[e.count for e in a]} + {[e.count for e in b]}, {elapsed:.3f} s")


def test_criterion_3_weissbach():
    t0 = time.perf_counter()
    c3, c4 = enumerate_solutions(3), enumerate_solutions(4)
    res = max(verify_listed_tuples(3)["max_residual"], verify_listed_tuples(4)["max_residual"])
    elapsed = time.perf_counter() - t0
    f3, f4 = c3.family_counts(), c4.family_counts()
    checks = {
        "n=3": (c3.total, f3["lambda2_zero"], f3["lambda2_nonzero"]) == (26, 18, 8),
        "n=4": (c4.total, f4["lambda2_zero"], f4["lambda2_nonzero"]) == (80, 50, 30),
        "tuples": res < 1e-12,
        "runtime": elapsed < 2.0,
    }
    record(3, checks, f"n=3 {c3.total} ({f3['lambda2_zero']}+{f3['lambda2_nonzero']}), "
                      f"n=4 {c4.total} ({f4['lambda2_zero']}+{f4['lambda2_nonzero']}), "
                      f"tuple residual {res:.1e}, {elapsed:.3f} s")


def test_criterion_4_regular_tetrahedron():
    s = regular_tetrahedron()
    pts = critical_points(s)
    E = s.edge_directions()
    n_edge = sum(any(abs(abs(p.v @ e) - 1) < 1e-9 for e in E) for p in pts)
    r_solver = global_min(pts).radius
    r_closed = equifacial_min_cylinder(s).radius
    r_oracle, _ = oracle_min_enclosing(s.vertices)
    target = 1 / np.sqrt(2)
    checks = {
        "nine": len(pts) == 9,
        "six edge": n_edge == 6,
        "three cross": len(pts) - n_edge == 3,
        "closed form": abs(r_closed - target) < 1e-12 and abs(r_solver - r_closed) < 1e-6,
        "oracle": abs(r_oracle - r_solver) < 1e-4,
    }
    record(4, checks, f"{len(pts)} directions ({n_edge} edge), solver {r_solver!r}, closed form {r_closed!r}, "
                      f"oracle {r_oracle!r}")


def test_criterion_5_edge_direction_lemma():
    rng = np.random.default_rng(2024)
    worst_g1 = worst_eq = 0.0
    count = 0
    for n in range(2, 7):
        for _ in range(100):
            s = random_simplex(n, rng, min_cond=1e-3)
            F = build(s)
            scale = F.scale**4
            for v in s.edge_directions():
                rec = recover_axis(v, s)
                worst_g1 = max(worst_g1, abs(F.g1(v)) / scale)
                d = np.linalg.norm((s.vertices - s.origin - rec.u) - np.outer((s.vertices - s.origin) @ v, v), axis=1)
                worst_eq = max(worst_eq, np.abs(d - rec.r).max() / rec.r)
                count += 1
    record(5, {"g1": worst_g1 < 1e-10, "equidistant": worst_eq < 1e-9},
           f"{count} edge directions, max |g1|/scale {worst_g1:.1e}, max relative spread {worst_eq:.1e}")


def test_criterion_6_bound_tables():
    stirling = [bezout_bounds(n)["stirling"] for n in range(2, 8)]
    checks = {
        "e3": bezout_bounds(3)["e3_system"] == 36,
        "general": all(bezout_bounds(n)["general"] == 2 * 3 ** (n + 1) for n in range(2, 8)),
        "stirling": stirling == [6, 36, 150, 540, 1806, 5796],
    }
    record(6, checks, f"stirling row {stirling}")


def test_criterion_7_equifacial_pipeline():
    rng = np.random.default_rng(77)
    worst_solver = worst_oracle = worst_orth = 0.0
    cfg = SolverConfig(restarts=1500)
    for _ in range(50):
        w = rng.uniform(0.2, 3.0, 3)
        s = box_simplex(*w).transformed(random_rotation(3, rng), rng.standard_normal(3))
        cyl = equifacial_min_cylinder(s)
        r = cyl.radius
        r_solver = global_min(critical_points(s, cfg)).radius
        r_oracle, _ = oracle_min_enclosing(s.vertices)
        worst_solver = max(worst_solver, abs(r - r_solver) / r)
        worst_oracle = max(worst_oracle, abs(r - r_oracle))
        V = s.vertices
        orth = min(max(abs(cyl.axis.v @ (V[b] - V[a])) / np.linalg.norm(V[b] - V[a]),
                       abs(cyl.axis.v @ (V[d] - V[c])) / np.linalg.norm(V[d] - V[c]))
                   for (a, b), (c, d) in OPPOSITE_PAIRS)
        worst_orth = max(worst_orth, orth)
    checks = {"solver": worst_solver < 1e-8, "oracle": worst_oracle < 1e-4, "orthogonal": worst_orth < 1e-10}
    record(7, checks, f"50 boxes: solver rel {worst_solver:.1e}, oracle {worst_oracle:.1e}, "
                      f"axis/edge cos {worst_orth:.1e}")


def _flattened(rng):
    while True:
        T = rng.standard_normal((3, 3))
        T[:, 2] = 0.0
        p = np.append(T[:, :2].mean(0) + 0.3 * rng.standard_normal(2), 1e-3 * rng.uniform(0.5, 2))
        Q = random_rotation(3, rng)
        try:
            return SimplexN(np.vstack([T, p]) @ Q.T)
        except DegenerateError:
            continue


def test_criterion_8_enclosing_vs_oracle():
    rng = np.random.default_rng(88)
    simplices = [random_simplex(3, rng) for _ in range(90)] + [_flattened(rng) for _ in range(10)]
    worst_gap = worst_out = 0.0
    wins: dict = {}
    t0 = time.perf_counter()
    for s in simplices:
        res = smallest_enclosing_cylinder(s, oracle_samples=200_000)
        r_or = res.detail["oracle_radius"]
        worst_gap = max(worst_gap, abs(res.radius - r_or) / res.radius)
        worst_out = max(worst_out, (res.cylinder.distances(s.vertices).max() - res.radius) / res.radius)
        wins[res.witness] = wins.get(res.witness, 0) + 1
    elapsed = time.perf_counter() - t0
    checks = {"oracle": worst_gap < 1e-4, "enclosure": worst_out <= 1e-9, "runtime": elapsed < 60}
    record(8, checks, f"max relative gap {worst_gap:.1e}, max excess {worst_out:.1e}, {elapsed:.1f} s, "
                      f"winners {dict(sorted(wins.items()))}")


def _central_diff(fun, v, h=1e-5):
    E = np.eye(len(v)) * h
    return np.array([(fun(v + e) - fun(v - e)) / (2 * h) for e in E])


def test_criterion_9_numerical_hygiene():
    rng = np.random.default_rng(99)
    worst_grad = worst_f = 0.0
    for _ in range(1000):
        n = int(rng.integers(2, 7))
        s = random_simplex(n, rng)
        F = build(s)
        v = rng.standard_normal(n)
        v /= np.linalg.norm(v)
        for fun, g in zip((F.f, F.g1, F.g2), F.gradients(v)):
            fd = _central_diff(fun, v)
            worst_grad = max(worst_grad, np.linalg.norm(fd - g) / np.linalg.norm(g))
        worst_f = max(worst_f, abs(F.f(v) - np.sum(recover_axis(v, s).u ** 2)) / F.f(v))
    worst_sigma = 0.0
    for n in (3, 4, 5):
        R = regular_vertices(n)
        for _ in range(1000):
            v = project_to_feasible(rng.standard_normal(n + 1))
            sp = SigmaPoint.from_vector(v)
            assert sp.is_feasible()
            r = recover_axis(R.to_chart(v), R.chart).r
            worst_sigma = max(worst_sigma, abs(radius_sq_from_sigma4(n, sp.sigma4) - r * r))
    checks = {"gradients": worst_grad < 1e-6, "f = |u|^2": worst_f < 1e-10, "sigma identity": worst_sigma < 1e-9}
    record(9, checks, f"gradient rel {worst_grad:.1e}, f rel {worst_f:.1e}, sigma identity {worst_sigma:.1e}")
