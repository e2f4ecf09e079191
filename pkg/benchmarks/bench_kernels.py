"""Time the numba and numpy kernels on the workloads the library actually runs.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Both backends are called directly through ``kernels.IMPLEMENTATIONS``, so the
``PLANEPOVM_BACKEND`` setting does not matter here.  The first numba call
(compilation) is excluded.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from planepovm import kernels, son


def workloads():
    rng = np.random.default_rng(0)
    # one compat scan: 256 alpha values, four disks each
    cx, cy = rng.normal(size=(256, 4)), rng.normal(size=(256, 4))
    rad = rng.uniform(0.1, 2.0, size=(256, 4))
    grid = son.HaarGrid.build(4)
    cols, planes = son._factor_order(4)
    angles = np.ascontiguousarray(grid.angles[:, cols])
    planes = np.array(planes, dtype=np.int64)
    rots = kernels.IMPLEMENTATIONS["numpy"]["euler_product"](angles, planes, 4)
    mid = np.diag([0.2, 0.0, 0.0, -0.2])
    return {
        "max_slack (256 x 4 disks)": ("max_slack", (cx, cy, rad, 60)),
        f"euler_product (SO(4), {grid.size} nodes)": ("euler_product", (angles, planes, 4)),
        f"congruence_sum (SO(4), {grid.size} nodes)": ("congruence_sum", (rots, grid.weights, mid)),
        f"second_moments (SO(4), {grid.size} nodes)": ("second_moments", (rots, grid.weights)),
    }


def best_time(fn, args, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    backends = [b for b in ("numpy", "numba") if b in kernels.IMPLEMENTATIONS]
    if "numba" not in backends:
        print("numba not installed; timing numpy only")
    print(f"{'kernel':44s}" + "".join(f"{b:>12s}" for b in backends) + ("     speedup" if len(backends) == 2 else ""))
    for label, (name, call_args) in workloads().items():
        row = {}
        for b in backends:
            fn = kernels.IMPLEMENTATIONS[b][name]
            fn(*call_args)  # warm-up / compile
            row[b] = best_time(fn, call_args, args.repeat)
        line = f"{label:44s}" + "".join(f"{row[b] * 1e3:10.2f}ms" for b in backends)
        if len(backends) == 2:
            line += f"{row['numpy'] / row['numba']:11.1f}x"
        print(line)


if __name__ == "__main__":
    main()
