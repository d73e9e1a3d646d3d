"""Compare the compiled and pure-Python Numerov kernels.

Run ``python3 benchmarks/bench_kernels.py``; prints a small timing table
for the raw propagation kernel and for a full eigenvalue solve.
"""
import argparse
import math
import timeit
from contextlib import contextmanager

import numpy as np

from kgyukawa import kernels
from kgyukawa.oracle import numerov_eigenvalue


@contextmanager
def use_backend(module):
    saved = kernels.numerov_propagate, kernels.count_sign_changes
    kernels.numerov_propagate, kernels.count_sign_changes = module.numerov_propagate, module.count_sign_changes
    try:
        yield
    finally:
        kernels.numerov_propagate, kernels.count_sign_changes = saved


def best_of(stmt, repeat):
    return min(timeit.repeat(stmt, number=1, repeat=repeat))


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--points", type=int, default=20_000)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)

    backends = [("python", kernels.python_backend)]
    if kernels.compiled_backend is not None:
        backends.append(("compiled", kernels.compiled_backend))
    else:
        print("compiled extension not available; timing the Python backend only")

    f = np.linspace(-2.0, 5.0, args.points)
    h = 50.0 / args.points
    print(f"{'task':<28}{'backend':<10}{'seconds':>12}")
    timings = {}
    for name, mod in backends:
        t = best_of(lambda: mod.numerov_propagate(f, h, 0.0, 1e-6), args.repeat)
        timings[("propagate", name)] = t
        print(f"{'propagate, ' + str(args.points) + ' pts':<28}{name:<10}{t:>12.6f}")
    for name, mod in backends:
        with use_backend(mod):
            t = best_of(lambda: numerov_eigenvalue(math.sqrt(2), 0.0707, 1, 0, check_refinement=False),
                        max(1, args.repeat // 5) if name == "python" else args.repeat)
        timings[("solve", name)] = t
        print(f"{'eigenvalue solve (2p)':<28}{name:<10}{t:>12.6f}")
    if len(backends) == 2:
        for task in ("propagate", "solve"):
            print(f"speedup {task}: {timings[(task, 'python')] / timings[(task, 'compiled')]:.1f}x")


if __name__ == "__main__":
    main()
