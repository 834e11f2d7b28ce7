"""Compare the compiled and numpy projection-radius kernels.

    python benchmarks/bench_kernels.py [--directions K] [--dim N] [--repeat R]
"""
import argparse
import time

import numpy as np

from cylsimplex.kernels import available_backends, get_backend


def _time(fn, repeat):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--directions", type=int, default=200_000)
    ap.add_argument("--dim", type=int, nargs="+", default=[3, 4])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    backends = available_backends()
    print(f"backends: {', '.join(backends)}")
    for n in args.dim:
        X = rng.standard_normal((n + 1, n))
        V = rng.standard_normal((args.directions, n))
        V /= np.linalg.norm(V, axis=1, keepdims=True)
        results = {}
        for name in backends:
            kernel = get_backend(name).batch_projection_radii
            kernel(X, V[:100])  # warm caches
            t, out = _time(lambda: kernel(X, V), args.repeat)
            results[name] = (t, out)
            print(f"n={n} K={args.directions} {name:>7}: {t * 1e3:9.1f} ms  ({args.directions / t:,.0f} dirs/s)")
        if len(results) == 2:
            (tp, rp), (tc, rc) = results["python"], results["cython"]
            print(f"n={n} speedup {tp / tc:.1f}x, max |diff| {np.max(np.abs(rp - rc)):.2e}")


if __name__ == "__main__":
    main()
