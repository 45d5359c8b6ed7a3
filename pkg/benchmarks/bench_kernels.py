"""Compare the compiled and pure-Python peeling / XOR kernels.

    python benchmarks/bench_kernels.py --n 10000 100000 --repeat 3
"""
import argparse
import sys
import timeit

import numpy as np

from mixedcore import _backend
from mixedcore.hypergraph import generate_mixed, peel
from mixedcore.optimizer import optimize_pair


def bench(n: int, density: float, repeat: int) -> list[tuple[str, str, float]]:
    mix = optimize_pair(3, 16).mix
    h = generate_mixed(n, int(density * n), mix, seed=n)
    res = peel(h)
    if res.core_edge_count:
        print(f"n={n}: core not empty at c={density}, xor timing skipped", file=sys.stderr)
    values = np.random.default_rng(0).integers(0, 1 << 16, size=h.m).astype(np.uint64)
    backends = {"python": _backend.python_kernels}
    if _backend.compiled_kernels is not None:
        backends["cython"] = _backend.compiled_kernels

    rows = []
    for name, k in backends.items():
        t = min(timeit.repeat(lambda: k.peel_csr(h.n, h.offsets, h.nodes), number=1, repeat=repeat))
        rows.append((name, "peel", t))
        if not res.core_edge_count:
            t = min(timeit.repeat(
                lambda: k.xor_solve(h.n, h.offsets, h.nodes, res.removed_nodes, res.removed_edges, values),
                number=1, repeat=repeat))
            rows.append((name, "xor_solve", t))
    return rows


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[10_000, 100_000, 1_000_000])
    ap.add_argument("--density", type=float, default=0.85)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    print(f"active backend: {_backend.BACKEND}")
    print(f"{'n':>9} {'kernel':>10} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    for n in args.n:
        times = {(b, k): t for b, k, t in bench(n, args.density, args.repeat)}
        for kernel in ("peel", "xor_solve"):
            py = times.get(("python", kernel))
            cy = times.get(("cython", kernel))
            if py is None:
                continue
            if cy is None:
                print(f"{n:>9} {kernel:>10} {py:>10.4f} {'-':>10} {'-':>8}")
            else:
                print(f"{n:>9} {kernel:>10} {py:>10.4f} {cy:>10.4f} {py / cy:>7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
