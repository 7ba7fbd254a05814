"""Compare the compiled and pure-Python reachability kernels.

    python benchmarks/bench_reach.py [--sizes 64,256,1024] [--density 2.0] [--repeat 5]
"""

from __future__ import annotations

import argparse
import random
import timeit

from extt import _reach_py

try:
    from extt import _reach
except ImportError:
    _reach = None


def random_graph(n: int, density: float, seed: int) -> list[tuple[int, int]]:
    rng = random.Random(seed)
    return [(rng.randrange(n), rng.randrange(n)) for _ in range(int(n * density))]


def bench(fn, n, edges, repeat):
    return min(timeit.repeat(lambda: fn(n, edges), number=1, repeat=repeat))


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="64,256,1024")
    ap.add_argument("--density", type=float, default=2.0, help="edges per atom")
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if _reach is None:
        print("compiled kernel not built; only timing the Python fallback")
    print(f"{'atoms':>6} {'edges':>7} {'python ms':>10} {'cython ms':>10} {'speedup':>8}")
    for n in map(int, args.sizes.split(",")):
        edges = random_graph(n, args.density, seed=n)
        py = bench(_reach_py.transitive_closure, n, edges, args.repeat)
        if _reach is None:
            print(f"{n:>6} {len(edges):>7} {py * 1e3:>10.2f} {'-':>10} {'-':>8}")
            continue
        assert _reach.transitive_closure(n, edges) == _reach_py.transitive_closure(n, edges)
        cy = bench(_reach.transitive_closure, n, edges, args.repeat)
        print(f"{n:>6} {len(edges):>7} {py * 1e3:>10.2f} {cy * 1e3:>10.2f} {py / cy:>7.1f}x")


if __name__ == "__main__":
    main()
