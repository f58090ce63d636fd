"""Deterministic graph generators.

Random generators take an integer seed and use :func:`numpy.random.default_rng`,
so the same seed always produces the same graph on every platform.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .errors import GenerationFailure, PreconditionError
from .graph import Graph


def random_regular(n: int, d: int, seed: int, max_attempts: int = 10_000) -> Graph:
    """A uniform-ish random ``d``-regular graph via the pairing model.

    All ``n * d`` stubs are shuffled and paired; any attempt producing a
    self-loop or repeated edge is discarded and retried from scratch, which
    keeps the conditional distribution uniform over simple ``d``-regular
    graphs. Raises :class:`GenerationFailure` after ``max_attempts`` rejected
    pairings.
    """
    if d < 0 or n < 0:
        raise PreconditionError("n and d must be nonnegative", n=n, d=d)
    if (n * d) % 2 != 0:
        raise PreconditionError("n * d must be even", n=n, d=d)
    if d >= n and n > 0:
        raise PreconditionError("degree must be below vertex count", n=n, d=d)
    if d == 0 or n == 0:
        return Graph(n, [])
    rng = np.random.default_rng(seed)
    stubs = np.repeat(np.arange(n), d)
    for _ in range(max_attempts):
        perm = rng.permutation(stubs)
        pairs = perm.reshape(-1, 2)
        edges = set()
        ok = True
        for u, v in pairs:
            u, v = int(u), int(v)
            if u == v:
                ok = False
                break
            if u > v:
                u, v = v, u
            if (u, v) in edges:
                ok = False
                break
            edges.add((u, v))
        if ok:
            return Graph(n, edges)
    raise GenerationFailure(
        "pairing model kept producing collisions", n=n, d=d, attempts=max_attempts
    )


def binomial_random(n: int, p: float, seed: int) -> Graph:
    """The binomial random graph: each pair is an edge with probability ``p``.

    Pairs are examined in lexicographic order with one uniform draw each, so
    the output is a pure function of ``(n, p, seed)``.
    """
    if not 0.0 <= p <= 1.0:
        raise PreconditionError("edge probability must lie in [0, 1]", p=p)
    rng = np.random.default_rng(seed)
    draws = rng.random(n * (n - 1) // 2) if n > 1 else np.empty(0)
    edges = []
    k = 0
    for u in range(n):
        for v in range(u + 1, n):
            if draws[k] < p:
                edges.append((u, v))
            k += 1
    return Graph(n, edges)


def petersen() -> Graph:
    """The Petersen graph: outer 5-cycle 0-4, inner 5-star 5-9, spokes."""
    edges = []
    for i in range(5):
        edges.append((i, (i + 1) % 5))
        edges.append((i, i + 5))
        edges.append((5 + i, 5 + (i + 2) % 5))
    return Graph(10, edges)


def complete(n: int) -> Graph:
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph(a + b, [(u, a + v) for u in range(a) for v in range(b)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise PreconditionError("cycle needs at least 3 vertices", n=n)
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def clique_plus_isolated(n: int, beta: float | Fraction) -> Graph:
    """K on ``n+1-ceil(beta*n)`` vertices plus ``ceil(beta*n)-1`` loose ones.

    Total ``n`` vertices. The circumference is exactly ``n+1-ceil(beta*n)``,
    the extremal configuration showing the longest-cycle bound for graphs
    where every two disjoint ``ceil(beta*n)``-sets are joined by an edge.
    """
    bf = Fraction(beta)
    s = math.ceil(bf * n)
    if s < 1:
        raise PreconditionError("need beta * n >= 1", n=n, beta=float(bf))
    clique = n + 1 - s
    edges = [(u, v) for u in range(clique) for v in range(u + 1, clique)]
    return Graph(n, edges)
