"""Compiled vs pure-Python kernels on the scalar code search.

    python benchmarks/bench_kernels.py [--repeat N]

Times an exhaustive GF(2) scan that finds nothing (the full space is
visited), a batch of session-matrix evaluations, and a random search.
"""

import argparse
import time

import numpy as np

from netcode import instances
from netcode.codelab.scalar import compile_problem, exhaustive_search, field_params, random_search
from netcode.field import field
from netcode.kernels import available_backends


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = available_backends()
    if "compiled" not in backends:
        print("compiled kernels not built; only the Python backend is available")

    net = instances.gap_instance_rates(2, 1)
    shared = instances.load("shared_edge")
    fld = field(4)
    prob = compile_problem(net)
    rng = np.random.default_rng(0)
    batch = rng.integers(0, fld.order, (2000, prob.n_vars)).astype(np.uint32)
    fp = field_params(fld)

    cases = {
        "exhaustive GF(2), rate (2,1), 262144 points": lambda k: exhaustive_search(net, 1, kernel=k),
        "eval_session x2000, GF(16)": lambda k: [k.eval_session(prob.prob, fp, row) for row in batch],
        "random search GF(2^8), no code exists, 200 trials": lambda k: random_search(shared, 8, trials=200, seed=1, kernel=k),
    }
    print(f"{'case':48} " + " ".join(f"{n:>10}" for n in sorted(backends)) + "   speedup")
    for label, fn in cases.items():
        t = {n: best_of(lambda: fn(b), args.repeat) for n, b in sorted(backends.items())}
        speed = f"{t['python'] / t['compiled']:8.1f}x" if "compiled" in t else ""
        print(f"{label:48} " + " ".join(f"{t[n]:9.3f}s" for n in sorted(t)) + f"  {speed}")


if __name__ == "__main__":
    main()
