"""Compiled vs pure-Python orbit kernels.

Run ``python benchmarks/bench_kernels.py [--n N] [--repeat R]``. Each case
builds digits for a few seeded points on both backends, checks that the
outputs are identical and reports the best wall time per backend.
"""

import argparse
import time

import numpy as np

from betafreq.balanced import balanced_expand
from betafreq.beta import greedy_expand, make_beta, sample_points
from betafreq.density import orbit_histogram
from betafreq.orbit import available_backends
from betafreq.tuned import pseudo_golden, target_to_cut, tuned_expand


def cases(n):
    pg2 = target_to_cut(pseudo_golden(2), 2, "0.5")
    pg5 = target_to_cut(pseudo_golden(5), 5, "0.5")
    b25, b33 = make_beta("2.5"), make_beta("3.3")
    return [
        ("tuned pg:2 (lattice)", pg2.beta, lambda x, bk: tuned_expand(pg2, x, n, backend=bk).digits),
        ("tuned pg:5 (lattice)", pg5.beta, lambda x, bk: tuned_expand(pg5, x, n, backend=bk).digits),
        ("balanced 2.5 (window)", b25, lambda x, bk: balanced_expand(b25, x, n, backend=bk).digits),
        ("greedy 3.3 (window)", b33, lambda x, bk: greedy_expand(b33, x, n, backend=bk).digits),
        ("histogram pg:2, 256 bins", pg2.beta,
         lambda x, bk: orbit_histogram(pg2, x, 10 * n, 0, 256, backend=bk)),
    ]


def best_time(fn, xs, backend, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = [fn(x, backend) for x in xs]
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=100_000)
    ap.add_argument("--samples", type=int, default=3)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = available_backends()
    if "cython" not in backends:
        print("compiled kernels not built; only the Python backend is available")
    print(f"n = {args.n}, {args.samples} points per case, best of {args.repeat}")
    print(f"{'case':28s}" + "".join(f"{b:>12s}" for b in backends) + "   speedup  same")
    for name, beta, fn in cases(args.n):
        xs = sample_points(beta, args.samples, 1)
        times, outs = [], []
        for bk in backends:
            t, o = best_time(fn, xs, bk, args.repeat)
            times.append(t)
            outs.append(o)
        same = all(np.array_equal(a, b) for a, b in zip(outs[0], outs[-1]))
        speed = f"{times[-1] / times[0]:8.1f}x" if len(times) > 1 else "       -"
        print(f"{name:28s}" + "".join(f"{t:11.3f}s" for t in times) + f"  {speed}  {same}")


if __name__ == "__main__":
    main()
