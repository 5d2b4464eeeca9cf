"""Benchmark the phase-space kernel: compiled extension vs NumPy fallback.

Builds the reduced density matrix of a five-packet superposition (the
hot workload behind the ``ecs`` and ``wigner`` subcommands) and times
``wigner_values`` on square grids with both backends.  Run from the
repository root:

    python3 benchmarks/bench_wigner.py [--points 161 241] [--repeats 5]
"""

import argparse
import time

import numpy as np

from bimodal._kernels import BACKEND, HAVE_COMPILED, wigner_values
from bimodal.ecs import ECSSchedule, ecs_state
from bimodal.hilbert import HilbertSpace
from bimodal.observables import partial_trace


def workload(n_max: int = 40) -> np.ndarray:
    space = HilbertSpace(n_max, n_max, 0)
    psi = ecs_state(space, 3.0, 2.0, ECSSchedule(2, 5, 1.0), method="packets")
    return partial_trace(psi, "a").matrix


def best_of(repeats: int, func) -> float:
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        func()
        times.append(time.perf_counter() - start)
    return min(times)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--points", type=int, nargs="+", default=[161, 241])
    parser.add_argument("--threads", type=int, nargs="+", default=[1, 4])
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--extent", type=float, default=8.0)
    args = parser.parse_args()

    rho = workload()
    print("density matrix: %dx%d, default backend: %s" % (*rho.shape, BACKEND))
    backends = ["numpy"] + (["compiled"] if HAVE_COMPILED else [])
    if not HAVE_COMPILED:
        print("compiled extension not importable; timing the fallback only")

    header = "%8s %8s" % ("points", "threads")
    for name in backends:
        header += " %12s" % name
    if len(backends) == 2:
        header += " %9s" % "speedup"
    print(header)

    for points in args.points:
        qs = np.linspace(-args.extent, args.extent, points)
        for threads in args.threads:
            row = "%8d %8d" % (points, threads)
            timings = {}
            grids = {}
            for name in backends:
                timings[name] = best_of(
                    args.repeats,
                    lambda name=name: grids.__setitem__(
                        name,
                        wigner_values(rho, qs, qs, threads=threads, backend=name),
                    ),
                )
                row += " %10.1f ms" % (1e3 * timings[name])
            if len(backends) == 2:
                row += " %8.1fx" % (timings["numpy"] / timings["compiled"])
                mismatch = float(
                    np.max(np.abs(grids["numpy"] - grids["compiled"]))
                )
                if mismatch > 1e-10:
                    print(row)
                    print("backend mismatch %.2e" % mismatch)
                    return 1
            print(row)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
