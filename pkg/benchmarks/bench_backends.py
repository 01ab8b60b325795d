"""Compare the compiled kernels against the pure-numpy fallback.

Runs three representative workloads in this process (whatever backend
CURVB_BACKEND selects, normally the compiled one), then re-runs them in a
subprocess forced to CURVB_BACKEND=numpy and prints a side-by-side table.

    python3 benchmarks/bench_backends.py [--pairs 20000] [--budget 5000]
"""

import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np


def build_workloads(pairs: int, budget: int):
    import curvb.kernels as kernels
    from curvb import (
        AmbientModel,
        Kind,
        build_structure,
        certify_h,
        estimate_range,
    )
    from curvb.spaces import kernel_pack

    grass = AmbientModel(kind=Kind.COMPLEX_GRASSMANNIAN, n=8)
    grass_ops = build_structure(grass)
    quadric = AmbientModel(kind=Kind.COMPLEX_QUADRIC, n=6)
    pack = kernel_pack(quadric, build_structure(quadric))

    rng = np.random.default_rng(0)
    Xs, Ys, valid = kernels.orthonormalize_pairs(
        rng.standard_normal((pairs, 6)), rng.standard_normal((pairs, 6))
    )
    Xs = np.ascontiguousarray(Xs[valid])
    Ys = np.ascontiguousarray(Ys[valid])

    def run_estimate():
        estimate_range(grass, grass_ops, budget=budget, refine_steps=16, seed=0)

    def run_certify():
        certify_h(tol=1e-6)

    def run_batches():
        kernels.batch_sectional(*pack, Xs, Ys)
        kernels.batch_closed_form(*pack, Xs, Ys)

    return {
        f"estimate_range (grassmannian n=8, budget {budget})": run_estimate,
        "certify_h (tol 1e-6)": run_certify,
        f"batch tensor+closed ({Xs.shape[0]} pairs)": run_batches,
    }


def time_workloads(pairs: int, budget: int, repeat: int) -> dict:
    workloads = build_workloads(pairs, budget)
    timings = {}
    for name, fn in workloads.items():
        fn()  # warm caches and JIT before timing
        best = float("inf")
        for _ in range(repeat):
            start = time.perf_counter()
            fn()
            best = min(best, time.perf_counter() - start)
        timings[name] = best
    return timings


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--pairs", type=int, default=20000)
    parser.add_argument("--budget", type=int, default=5000)
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--as-child", action="store_true", help=argparse.SUPPRESS)
    args = parser.parse_args()

    timings = time_workloads(args.pairs, args.budget, args.repeat)
    if args.as_child:
        json.dump(timings, sys.stdout)
        return 0

    from curvb._backend import USING_NUMBA

    here = "numba" if USING_NUMBA else "numpy"
    env = dict(os.environ, CURVB_BACKEND="numpy")
    child = subprocess.run(
        [
            sys.executable,
            os.path.abspath(__file__),
            "--as-child",
            "--pairs",
            str(args.pairs),
            "--budget",
            str(args.budget),
            "--repeat",
            str(args.repeat),
        ],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    fallback = json.loads(child.stdout)

    width = max(len(name) for name in timings)
    print(f"{'workload'.ljust(width)}  {here:>10}  {'numpy':>10}  speedup")
    for name, here_t in timings.items():
        other = fallback[name]
        print(
            f"{name.ljust(width)}  {here_t:>9.4f}s  {other:>9.4f}s  "
            f"{other / here_t:>6.1f}x"
        )
    return 0


if __name__ == "__main__":
    sys.exit(main())
