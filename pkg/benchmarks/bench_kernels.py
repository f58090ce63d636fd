"""Time the six scan/search kernels on both backends.

Imports ``cyclespan.kernels._python`` and ``cyclespan.kernels._numba``
side by side (independent of the ``CYCLESPAN_BACKEND`` selection, which is
reported for reference) and runs each kernel on a workload sized like real
use: brute-force certification masks at n = 20-24 and cycle searches on
sparse regular graphs. Prints a table of best-of-N wall times.

Usage:
    python3 benchmarks/bench_kernels.py [--repeat N] [--json FILE]
"""

from __future__ import annotations

import argparse
import json
import time
from collections import deque
from fractions import Fraction

import numpy as np

from cyclespan import kernels
from cyclespan.generators import (
    binomial_random,
    clique_plus_isolated,
    complete_bipartite,
    random_regular,
)
from cyclespan.graph import Graph
from cyclespan.kernels import _python

try:
    from cyclespan.kernels import _numba
except ImportError:
    _numba = None


def dist_within(g: Graph, a: int) -> np.ndarray:
    """BFS distance to ``a`` using only vertices >= ``a`` (n + 1 = unreachable)."""
    dist = np.full(g.n, g.n + 1, dtype=np.int64)
    dist[a] = 0
    queue = deque([a])
    while queue:
        u = queue.popleft()
        for w in g.neighbors(u):
            if w >= a and dist[w] > dist[u] + 1:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def workloads() -> list[tuple[str, str, tuple]]:
    """(kernel name, workload label, args) triples shared by both backends."""
    rr20 = random_regular(20, 3, seed=1)
    gnp20 = binomial_random(20, Fraction(1, 2), seed=3)
    witness24 = clique_plus_isolated(24, Fraction(1, 6))
    gnp24 = binomial_random(24, Fraction(1, 2), seed=5)
    indptr, indices = gnp24.csr()
    bip = complete_bipartite(12, 12)
    bip_ptr, bip_idx = bip.csr()
    budget = 2 * 10**5  # both backends do exactly this many pushes
    return [
        ("min_ratio_upto", "rr(20,3) k=10", (20, rr20.adjacency_masks(), 10)),
        ("min_nbr_at_size", "rr(20,3) s=8", (20, rr20.adjacency_masks(), 8)),
        ("first_violator", "gnp(20,1/2) k=5", (20, gnp20.adjacency_masks(), 5, 1, 2)),
        ("beta_violation", "clique+isolated(24) s=4", (24, witness24.adjacency_masks(), 4)),
        (
            "spectrum_lengths",
            "gnp(24,1/2) capped scan",
            (indptr, indices, 24, budget, 24, np.zeros(25, dtype=bool)),
        ),
        (
            "find_cycle_at_anchor",
            "K(12,12) odd ell, capped",
            (bip_ptr, bip_idx, 24, 0, 13, dist_within(bip, 0), budget),
        ),
    ]


def prepare(backend, name: str, args: tuple) -> tuple:
    """Per-backend argument normalization, mirroring the package wrappers."""
    out = []
    for a in args:
        if isinstance(a, tuple):  # adjacency masks
            a = np.asarray(a, dtype=np.int64) if backend is _numba else [int(m) for m in a]
        elif isinstance(a, np.ndarray) and a.dtype == bool:
            a = a.copy()  # the found array is written in place
        out.append(a)
    return tuple(out)


def best_of(fn, args: tuple, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3, help="runs per timing (best kept)")
    parser.add_argument("--json", help="also write rows to this JSON file")
    args = parser.parse_args()

    print(f"selected backend (CYCLESPAN_BACKEND): {kernels.active_backend()}")
    if _numba is None:
        print("numba backend unavailable; timing pure python only")

    rows = []
    header = f"{'kernel':<22} {'workload':<26} {'python':>10} {'numba':>10} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for name, label, raw in workloads():
        row = {"kernel": name, "workload": label}
        py_time = best_of(getattr(_python, name), prepare(_python, name, raw), args.repeat)
        row["python_s"] = py_time
        if _numba is not None:
            fn = getattr(_numba, name)
            fn(*prepare(_numba, name, raw))  # compile before timing
            nb_time = best_of(fn, prepare(_numba, name, raw), args.repeat)
            row["numba_s"] = nb_time
            speedup = f"{py_time / nb_time:7.1f}x"
            nb_text = f"{nb_time * 1e3:8.2f}ms"
        else:
            row["numba_s"] = None
            speedup, nb_text = "-", "-"
        print(f"{name:<22} {label:<26} {py_time * 1e3:8.2f}ms {nb_text:>10} {speedup:>8}")
        rows.append(row)

    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)
            fh.write("\n")
        print(f"wrote {args.json}")


if __name__ == "__main__":
    main()
