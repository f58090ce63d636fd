"""Independent oracles and hypothesis strategies shared by the test modules.

Everything here recomputes answers from first principles (plain dict/set
code over ``g.n`` and ``g.edges``), deliberately avoiding the package's own
kernels, so a bug in an optimized path cannot hide behind itself.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from hypothesis import strategies as st

from cyclespan.graph import Graph


def adjacency(g: Graph) -> dict[int, set[int]]:
    adj: dict[int, set[int]] = {v: set() for v in range(g.n)}
    for u, v in g.edges:
        adj[u].add(v)
        adj[v].add(u)
    return adj


def oracle_cycle_lengths(g: Graph) -> set[int]:
    """All simple cycle lengths, by exhaustive path extension.

    Each cycle is rooted at its minimum vertex; only larger vertices may
    appear after the root, which visits every cycle (twice, once per
    orientation) without missing any. Exponential, so keep n small.
    """
    adj = adjacency(g)
    lengths: set[int] = set()

    def extend(root: int, path: list[int], on_path: set[int]) -> None:
        tail = path[-1]
        for w in adj[tail]:
            if w == root and len(path) >= 3:
                lengths.add(len(path))
            elif w > root and w not in on_path:
                path.append(w)
                on_path.add(w)
                extend(root, path, on_path)
                on_path.remove(w)
                path.pop()

    for root in range(g.n):
        extend(root, [root], {root})
    return lengths


def oracle_has_path(g: Graph, sources: set[int], targets: set[int], blocked: set[int]) -> bool:
    adj = adjacency(g)
    frontier = [v for v in sources if v not in blocked]
    seen = set(frontier)
    while frontier:
        v = frontier.pop()
        if v in targets:
            return True
        for w in adj[v]:
            if w not in seen and w not in blocked:
                seen.add(w)
                frontier.append(w)
    return False


def oracle_min_vertex_cut(g: Graph, a: set[int], b: set[int]) -> int:
    """Smallest vertex set whose removal leaves no a-to-b path.

    Cut vertices may come from ``a`` and ``b`` themselves (the set-to-set
    disjoint-path model). Exhaustive over subset sizes, so keep n small.
    """
    for size in range(g.n + 1):
        for cut in itertools.combinations(range(g.n), size):
            if not oracle_has_path(g, a, b, set(cut)):
                return size
    raise AssertionError("removing all vertices always disconnects")


def oracle_expansion(g: Graph, k: int) -> Fraction:
    """min |N(U)| / |U| over nonempty U with |U| <= k, by enumeration."""
    adj = adjacency(g)
    best = Fraction(g.n)
    for size in range(1, k + 1):
        for combo in itertools.combinations(range(g.n), size):
            inside = set(combo)
            boundary = set()
            for v in combo:
                boundary |= adj[v] - inside
            best = min(best, Fraction(len(boundary), size))
    return best


def oracle_is_connected(g: Graph) -> bool:
    if g.n == 0:
        return True
    return oracle_has_path(g, {0}, set(range(g.n)) - {0}, set()) or g.n == 1


@st.composite
def small_graphs(draw: st.DrawFn, max_n: int = 10) -> Graph:
    n = draw(st.integers(min_value=1, max_value=max_n))
    pairs = list(itertools.combinations(range(n), 2))
    edges = [e for e in pairs if draw(st.booleans())]
    return Graph(n, edges)


@st.composite
def connected_graphs(draw: st.DrawFn, max_n: int = 10) -> Graph:
    """A random spanning tree plus random extra edges."""
    n = draw(st.integers(min_value=1, max_value=max_n))
    edges = set()
    for v in range(1, n):
        parent = draw(st.integers(min_value=0, max_value=v - 1))
        edges.add((parent, v))
    for u, v in itertools.combinations(range(n), 2):
        if (u, v) not in edges and draw(st.booleans()):
            edges.add((u, v))
    return Graph(n, sorted(edges))
