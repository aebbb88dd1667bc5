"""Compare the numba and numpy kernels on the hot paths.

    python3 benchmarks/bench_backends.py [--repeat 3]

Results are checked for agreement before timings are printed.
"""
import argparse
import time

import numpy as np

from majvote.dynamics import default_budget
from majvote.graph import erdos_renyi, grid
from majvote.kernels import available_backends, get_backend
from majvote.search import serpentine_opinions


def best_of(fn, repeat):
    out, best = None, float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return out, best


def cases():
    g = grid(40, 40).graph
    yield "voting_time grid40 serpentine", g, lambda k: k.voting_time(
        g.indptr, g.indices, g.loops, serpentine_opinions(40, 40), default_budget(g)
    )[0]

    h = erdos_renyi(2000, 0.01, seed=1).graph
    f = np.random.default_rng(1).integers(0, 2, h.n, dtype=np.uint8)
    yield "voting_time G(2000, 0.01)", h, lambda k: k.voting_time(
        h.indptr, h.indices, h.loops, f, default_budget(h)
    )[0]

    s = grid(3, 5).graph
    yield "worst_case_range grid3x5", s, lambda k: tuple(
        int(x) for x in k.worst_case_range(s.indptr, s.indices, s.loops, s.n, 0, 1 << (s.n - 1), default_budget(s))
    )


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    backends = available_backends()
    for name in backends:  # warm the JIT so compile time is not measured
        k = get_backend(name)
        for _, _, fn in cases():
            fn(k)
    print(f"{'case':<32}" + "".join(f"{b:>12}" for b in backends) + f"{'speedup':>10}")
    for label, _, fn in cases():
        results, times = [], []
        for name in backends:
            out, dt = best_of(lambda: fn(get_backend(name)), args.repeat)
            results.append(out)
            times.append(dt)
        assert all(r == results[0] for r in results), f"backends disagree on {label}: {results}"
        speed = f"{times[-1] / times[0]:.1f}x" if len(times) > 1 else "-"
        print(f"{label:<32}" + "".join(f"{t * 1e3:>10.2f}ms" for t in times) + f"{speed:>10}")


if __name__ == "__main__":
    main()
