"""Time the compiled cube kernel against the numpy fallback.

    python benchmarks/bench_kernel.py [--level 4] [--repeat 3]
"""
import argparse
import time

import numpy as np

from doubleoctic.arrangement import load_arrangements
from doubleoctic.chamber import Chart, apply_chart, chambers_of
from doubleoctic.cli import DATA
from doubleoctic.quadrature import BACKEND, _fallback, cube
from doubleoctic.quadrature.rules import tanh_sinh_grid


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - start)
    return min(times), out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--level", type=int, default=4)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    arr = {a.label: a for a in load_arrangements(DATA / "arrangements.txt")}["1"]
    aff = apply_chart(arr, Chart.substitution("t -> t - x"))
    slab = cube.slabs(chambers_of(aff)[0].prisms[0], aff)[0]
    num, den = slab.corner_tables()
    g = tanh_sinh_grid(args.level)
    call = (num, den, g.offset, g.side, g.weight, g.node_level, args.level + 1)
    n = len(g) ** 3
    print(f"level {args.level}: {len(g)} nodes per axis, {n:,} evaluations")

    t_py, (s_py, _, _) = best_of(lambda: _fallback.cube_sums(*call), args.repeat)
    print(f"numpy fallback  {t_py:8.3f} s  {n / t_py / 1e6:8.2f} M evals/s")
    if BACKEND != "cython":
        print("compiled kernel not built; run `python setup.py build_ext --inplace`")
        return
    from doubleoctic.quadrature._kernel import cube_sums

    t_cy, (s_cy, _, _) = best_of(lambda: cube_sums(*call), args.repeat)
    print(f"cython kernel   {t_cy:8.3f} s  {n / t_cy / 1e6:8.2f} M evals/s")
    print(f"speedup {t_py / t_cy:.1f}x, max rel difference "
          f"{np.max(np.abs(s_cy - s_py) / np.maximum(np.abs(s_py), 1e-300)):.1e}")


if __name__ == "__main__":
    main()
