"""Immutable simple graphs and the tree/path/cycle plumbing built on them.

Conventions used throughout the package:

* vertices are ``0..n-1``; graphs are simple and undirected,
* a *path* is a vertex sequence, its length is its edge count,
* a *cycle certificate* stores the vertex sequence without repeating the
  start, so its length equals its vertex count (>= 3),
* tree levels are indexed by depth, ``level 0 = {root}``.

Every cycle the package emits goes through :func:`validate_cycle`; nothing
else mints :class:`CycleCertificate` objects.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import NotACycle, PreconditionError

VertexSet = frozenset  # alias: vertex sets are plain frozensets of ids


class Graph:
    """Immutable simple undirected graph on vertices ``0..n-1``.

    Adjacency lists are kept sorted; construction rejects self-loops,
    duplicate edges and out-of-range endpoints.
    """

    __slots__ = ("n", "_adj", "_edges", "_masks", "_csr")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]]) -> None:
        if n < 0:
            raise PreconditionError("vertex count must be nonnegative", n=n)
        canon = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise PreconditionError("self-loop rejected", vertex=u)
            if not (0 <= u < n and 0 <= v < n):
                raise PreconditionError("edge endpoint out of range", edge=(u, v), n=n)
            if u > v:
                u, v = v, u
            if (u, v) in canon:
                raise PreconditionError("duplicate edge rejected", edge=(u, v))
            canon.add((u, v))
        self.n = n
        self._edges = tuple(sorted(canon))
        adj: list[list[int]] = [[] for _ in range(n)]
        for u, v in self._edges:
            adj[u].append(v)
            adj[v].append(u)
        self._adj = tuple(tuple(sorted(a)) for a in adj)
        self._masks: tuple[int, ...] | None = None
        self._csr: tuple[np.ndarray, np.ndarray] | None = None

    # -- basic accessors ---------------------------------------------------

    @property
    def m(self) -> int:
        return len(self._edges)

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return self._edges

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def max_degree(self) -> int:
        return max((len(a) for a in self._adj), default=0)

    def has_edge(self, u: int, v: int) -> bool:
        a = self._adj[u]
        lo, hi = 0, len(a)
        while lo < hi:
            mid = (lo + hi) // 2
            if a[mid] < v:
                lo = mid + 1
            else:
                hi = mid
        return lo < len(a) and a[lo] == v

    def vertices(self) -> range:
        return range(self.n)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self._edges == other._edges

    def __hash__(self) -> int:
        return hash((self.n, self._edges))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"

    # -- derived representations (cached) ----------------------------------

    def adjacency_masks(self) -> tuple[int, ...]:
        """Per-vertex neighborhoods as Python int bitmasks."""
        if self._masks is None:
            masks = [0] * self.n
            for u, v in self._edges:
                masks[u] |= 1 << v
                masks[v] |= 1 << u
            self._masks = tuple(masks)
        return self._masks

    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        """Adjacency in CSR form ``(indptr, indices)`` as int32 arrays."""
        if self._csr is None:
            indptr = np.zeros(self.n + 1, dtype=np.int32)
            for v in range(self.n):
                indptr[v + 1] = indptr[v] + len(self._adj[v])
            indices = np.empty(indptr[-1], dtype=np.int32)
            pos = 0
            for v in range(self.n):
                for w in self._adj[v]:
                    indices[pos] = w
                    pos += 1
            self._csr = (indptr, indices)
        return self._csr

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.float64)
        for u, v in self._edges:
            a[u, v] = 1.0
            a[v, u] = 1.0
        return a

    def induced(self, keep: Iterable[int]) -> tuple["Graph", tuple[int, ...]]:
        """Induced subgraph on ``keep``; returns ``(graph, old_id_of_new)``."""
        old = tuple(sorted(set(keep)))
        index = {o: i for i, o in enumerate(old)}
        edges = [
            (index[u], index[v])
            for u, v in self._edges
            if u in index and v in index
        ]
        return Graph(len(old), edges), old


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def set_of(mask: int) -> frozenset[int]:
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return frozenset(out)


# -- neighborhoods and components ------------------------------------------


def neighborhood(g: Graph, vertices: Iterable[int]) -> frozenset[int]:
    """External neighborhood ``N(U) = (union of N(v)) minus U``."""
    vs = set(vertices)
    out: set[int] = set()
    for v in vs:
        out.update(g.neighbors(v))
    return frozenset(out - vs)


def components(g: Graph, within: Iterable[int] | None = None) -> list[frozenset[int]]:
    """Connected components (of ``g[within]`` if given), sorted by min vertex."""
    allowed = set(g.vertices()) if within is None else set(within)
    seen: set[int] = set()
    comps = []
    for start in sorted(allowed):
        if start in seen:
            continue
        comp = {start}
        queue = deque([start])
        seen.add(start)
        while queue:
            v = queue.popleft()
            for w in g.neighbors(v):
                if w in allowed and w not in seen:
                    seen.add(w)
                    comp.add(w)
                    queue.append(w)
        comps.append(frozenset(comp))
    return comps


def bfs_distances(
    g: Graph,
    sources: Iterable[int],
    within: Iterable[int] | None = None,
) -> dict[int, int]:
    """BFS distance from the source set, restricted to ``within``."""
    allowed = None if within is None else set(within)
    dist: dict[int, int] = {}
    queue: deque[int] = deque()
    for s in sorted(set(sources)):
        if allowed is not None and s not in allowed:
            continue
        dist[s] = 0
        queue.append(s)
    while queue:
        v = queue.popleft()
        for w in g.neighbors(v):
            if w in dist:
                continue
            if allowed is not None and w not in allowed:
                continue
            dist[w] = dist[v] + 1
            queue.append(w)
    return dist


def shortest_path(
    g: Graph,
    source: int,
    targets: Iterable[int],
    within: Iterable[int] | None = None,
) -> tuple[int, ...] | None:
    """A shortest path from ``source`` to the nearest member of ``targets``.

    Ties break toward smaller vertex ids (BFS scans neighbors in ascending
    order and the first target dequeued wins). Returns ``None`` when no
    target is reachable.
    """
    goal = set(targets)
    allowed = None if within is None else set(within)
    if allowed is not None and source not in allowed:
        return None
    if source in goal:
        return (source,)
    parent = {source: source}
    queue = deque([source])
    while queue:
        v = queue.popleft()
        for w in g.neighbors(v):
            if w in parent:
                continue
            if allowed is not None and w not in allowed:
                continue
            parent[w] = v
            if w in goal:
                path = [w]
                while path[-1] != source:
                    path.append(parent[path[-1]])
                path.reverse()
                return tuple(path)
            queue.append(w)
    return None


def ball(g: Graph, u: Iterable[int], r: int, within: Iterable[int] | None = None) -> frozenset[int]:
    """All vertices at distance at most ``r`` from the set ``u``."""
    if r < 0:
        raise PreconditionError("ball radius must be nonnegative", r=r)
    dist = bfs_distances(g, u, within=within)
    return frozenset(v for v, d in dist.items() if d <= r)


def component_diameter(g: Graph, v: int, within: Iterable[int] | None = None) -> int:
    """Exact diameter of ``v``'s connected component (within ``g[within]``).

    Computed by BFS from every vertex of the component; no heuristic
    two-sweep shortcuts.
    """
    allowed = None if within is None else set(within)
    comp = sorted(bfs_distances(g, [v], within=allowed))
    best = 0
    for w in comp:
        dist = bfs_distances(g, [w], within=comp)
        best = max(best, max(dist.values()))
    return best


# -- paths and cycles --------------------------------------------------------


class Path(tuple):
    """A simple path as an immutable vertex sequence."""

    def __new__(cls, vertices: Iterable[int]) -> "Path":
        return super().__new__(cls, tuple(int(v) for v in vertices))

    @property
    def length(self) -> int:
        """Edge count."""
        return len(self) - 1

    def check(self, g: Graph) -> "Path":
        """Assert simplicity and adjacency in ``g``; returns self."""
        if len(set(self)) != len(self):
            raise PreconditionError("path repeats a vertex", vertices=list(self))
        for a, b in zip(self, self[1:]):
            if not g.has_edge(a, b):
                raise PreconditionError("path uses a non-edge", edge=(a, b))
        return self


@dataclass(frozen=True)
class CycleCertificate:
    """A validated simple cycle; ``length`` is the vertex (= edge) count."""

    vertices: tuple[int, ...]
    length: int

    def to_json(self) -> dict:
        return {"vertices": list(self.vertices), "length": self.length}


def validate_cycle(g: Graph, sequence: Sequence[int]) -> CycleCertificate:
    """Validate a vertex sequence as a simple cycle of ``g``.

    The sequence must not repeat the start vertex at the end. Raises
    :class:`NotACycle` with the offending reason and index otherwise. This is
    the single gatekeeper through which every emitted cycle passes.
    """
    seq = tuple(int(v) for v in sequence)
    if len(seq) < 3:
        raise NotACycle("fewer than 3 vertices", len(seq))
    seen: dict[int, int] = {}
    for i, v in enumerate(seq):
        if not (0 <= v < g.n):
            raise NotACycle("vertex out of range", i)
        if v in seen:
            raise NotACycle("repeated vertex", i)
        seen[v] = i
    for i in range(len(seq)):
        u, w = seq[i], seq[(i + 1) % len(seq)]
        if not g.has_edge(u, w):
            raise NotACycle("missing edge", i)
    return CycleCertificate(vertices=seq, length=len(seq))


# -- rooted trees ------------------------------------------------------------


@dataclass(frozen=True)
class RootedTree:
    """A rooted tree inside a host graph, stored as parent pointers + levels.

    ``levels[d]`` holds the vertices at depth ``d`` (``levels[0] == (root,)``)
    in discovery order. ``order`` is the global discovery order.
    """

    root: int
    parent: dict[int, int]
    levels: tuple[tuple[int, ...], ...]
    order: tuple[int, ...]
    degree_cap: int | None = None
    _children: dict[int, tuple[int, ...]] | None = field(default=None, repr=False, compare=False)
    _depth: dict[int, int] | None = field(default=None, repr=False, compare=False)

    @property
    def size(self) -> int:
        return len(self.order)

    @property
    def vertex_set(self) -> frozenset[int]:
        return frozenset(self.order)

    @property
    def num_levels(self) -> int:
        return len(self.levels)

    def __contains__(self, v: int) -> bool:
        return v in self.depth_map()

    def depth_map(self) -> dict[int, int]:
        if self._depth is None:
            d = {v: i for i, lvl in enumerate(self.levels) for v in lvl}
            object.__setattr__(self, "_depth", d)
        return self._depth

    def depth_of(self, v: int) -> int:
        return self.depth_map()[v]

    def children_map(self) -> dict[int, tuple[int, ...]]:
        if self._children is None:
            kids: dict[int, list[int]] = {v: [] for v in self.order}
            for v in self.order:
                if v != self.root:
                    kids[self.parent[v]].append(v)
            object.__setattr__(self, "_children", {v: tuple(k) for v, k in kids.items()})
        return self._children

    def tree_degree(self, v: int) -> int:
        d = len(self.children_map()[v])
        return d if v == self.root else d + 1

    def path_to_root(self, v: int) -> tuple[int, ...]:
        path = [v]
        while path[-1] != self.root:
            path.append(self.parent[path[-1]])
        return tuple(path)

    def tree_path(self, u: int, v: int) -> tuple[int, ...]:
        """The unique tree path from ``u`` to ``v``."""
        up, vp = self.path_to_root(u), self.path_to_root(v)
        su = set(up)
        lca = next(x for x in vp if x in su)
        head = up[: up.index(lca) + 1]
        tail = vp[: vp.index(lca)]
        return head + tuple(reversed(tail))

    def subtree_vertices(self, v: int) -> frozenset[int]:
        kids = self.children_map()
        out = [v]
        stack = [v]
        while stack:
            x = stack.pop()
            for c in kids[x]:
                out.append(c)
                stack.append(c)
        return frozenset(out)

    def subtree_sizes(self) -> dict[int, int]:
        kids = self.children_map()
        size = {v: 1 for v in self.order}
        for v in reversed(self.order):
            for c in kids[v]:
                size[v] += size[c]
        return size

    def band(self, lo: int, hi: int) -> frozenset[int]:
        """Vertices at depths ``lo..hi`` inclusive."""
        out: list[int] = []
        for d in range(max(lo, 0), min(hi, self.num_levels - 1) + 1):
            out.extend(self.levels[d])
        return frozenset(out)


def truncate_tree(tree: RootedTree, size: int) -> RootedTree:
    """The subtree induced by the first ``size`` vertices in discovery order.

    A discovery-order prefix is always closed under parents, so the result
    is a valid rooted tree; for BFS trees it equals halting the walk the
    moment the tree reached ``size`` vertices.
    """
    if not 1 <= size <= tree.size:
        raise ValueError(f"size must be in [1, {tree.size}], got {size}")
    keep = tree.order[:size]
    kept = set(keep)
    depth = tree.depth_map()
    max_depth = max(depth[v] for v in keep)
    levels = tuple(
        tuple(v for v in tree.levels[d] if v in kept) for d in range(max_depth + 1)
    )
    parent = {v: tree.parent[v] for v in keep if v != tree.root}
    parent[tree.root] = tree.root
    return RootedTree(
        root=tree.root,
        parent=parent,
        levels=levels,
        order=keep,
        degree_cap=tree.degree_cap,
    )


def bfs_tree(
    g: Graph,
    root: int,
    order: Sequence[int] | None = None,
    stop_size: int | None = None,
    cap: tuple[int, int] | None = None,
    forbidden: Iterable[int] = (),
) -> RootedTree:
    """Grow a BFS tree from ``root``.

    ``order`` is an exploration priority over vertices (default ascending
    ids): each dequeued vertex adds its unseen, non-forbidden neighbors in
    that priority order. ``stop_size`` halts growth at level granularity: the
    first time the tree reaches ``stop_size`` vertices, the current level
    still finishes expanding and then the walk stops. ``cap`` is
    ``(degree_cap, activation_size)``: once the tree has at least
    ``activation_size`` vertices, every vertex expanded from then on attaches
    at most ``degree_cap - 1`` children.
    """
    banned = set(forbidden)
    if root in banned:
        raise PreconditionError("root is forbidden", root=root)
    rank = list(range(g.n)) if order is None else [0] * g.n
    if order is not None:
        if sorted(order) != list(range(g.n)):
            raise PreconditionError("order must be a permutation of the vertices")
        for r, v in enumerate(order):
            rank[v] = r

    parent: dict[int, int] = {root: root}
    levels: list[tuple[int, ...]] = [(root,)]
    disc: list[int] = [root]
    in_tree = {root}
    frontier = [root]
    while frontier:
        nxt: list[int] = []
        for v in frontier:
            capped = cap is not None and len(in_tree) >= cap[1]
            added = 0
            for w in sorted(g.neighbors(v), key=lambda x: rank[x]):
                if w in in_tree or w in banned:
                    continue
                if capped and added >= cap[0] - 1:
                    break
                parent[w] = v
                in_tree.add(w)
                disc.append(w)
                nxt.append(w)
                added += 1
        if nxt:
            levels.append(tuple(nxt))
        if stop_size is not None and len(in_tree) >= stop_size:
            break
        frontier = nxt
    return RootedTree(
        root=root,
        parent=parent,
        levels=tuple(levels),
        order=tuple(disc),
        degree_cap=cap[0] if cap else None,
    )


def extend_bfs_tree(
    g: Graph,
    tree: RootedTree,
    forbidden: Iterable[int] = (),
    max_new_levels: int | None = None,
) -> RootedTree:
    """Resume BFS from ``tree``'s deepest levels, avoiding ``forbidden``.

    New vertices attach below their first discovered tree neighbor; growth
    stops after ``max_new_levels`` complete new levels (or exhaustion). The
    input tree's vertices and levels are preserved unchanged.
    """
    banned = set(forbidden)
    parent = dict(tree.parent)
    levels = [list(l) for l in tree.levels]
    disc = list(tree.order)
    in_tree = set(disc)
    base_depth = len(levels) - 1
    # only the last level may have unexpanded members; earlier levels were
    # fully processed by construction, and re-scanning them is harmless
    frontier = [v for v in disc if tree.depth_of(v) >= base_depth - 1]
    depth = {v: tree.depth_of(v) for v in frontier}
    new_levels = 0
    while frontier:
        if max_new_levels is not None and new_levels >= max_new_levels:
            break
        nxt: list[int] = []
        for v in frontier:
            for w in g.neighbors(v):
                if w in in_tree or w in banned:
                    continue
                parent[w] = v
                in_tree.add(w)
                disc.append(w)
                nxt.append(w)
                d = depth[v] + 1
                depth[w] = d
                while len(levels) <= d:
                    levels.append([])
                levels[d].append(w)
        if not nxt:
            break
        new_levels += 1
        frontier = nxt
    return RootedTree(
        root=tree.root,
        parent=parent,
        levels=tuple(tuple(l) for l in levels),
        order=tuple(disc),
        degree_cap=tree.degree_cap,
    )


def minimal_subtree(tree: RootedTree, members: Iterable[int]) -> RootedTree:
    """The minimal subtree of ``tree`` spanning ``members``.

    The result is rooted at the vertex closest to ``tree``'s root (the common
    ancestor of all members). When no member is an ancestor of the others the
    root has at least two children.
    """
    mem = sorted(set(members))
    if not mem:
        raise PreconditionError("minimal_subtree of empty member set")
    chains = [tree.path_to_root(v) for v in mem]
    common = set(chains[0])
    for c in chains[1:]:
        common &= set(c)
    lca = chains[0][next(i for i, x in enumerate(chains[0]) if x in common)]
    keep: set[int] = set()
    for c in chains:
        for x in c:
            keep.add(x)
            if x == lca:
                break
    parent = {v: tree.parent[v] for v in keep if v != lca}
    parent[lca] = lca
    base = tree.depth_of(lca)
    depth_lists: dict[int, list[int]] = {}
    for v in sorted(keep, key=lambda x: tree.order.index(x)):
        depth_lists.setdefault(tree.depth_of(v) - base, []).append(v)
    levels = tuple(tuple(depth_lists[d]) for d in range(max(depth_lists) + 1))
    order = tuple(v for lvl in levels for v in lvl)
    return RootedTree(root=lca, parent=parent, levels=levels, order=order)


# -- structural operations ---------------------------------------------------


def subdivide(g: Graph, m: int) -> Graph:
    """Replace every edge by a path with ``m`` interior vertices.

    New vertices are numbered after the originals, in edge-sorted order:
    edge index ``e`` receives ids ``n + e*m .. n + e*m + m - 1``, oriented
    from the smaller endpoint. ``m = 0`` returns an equal graph.
    """
    if m < 0:
        raise PreconditionError("subdivision count must be >= 0", m=m)
    if m == 0:
        return Graph(g.n, g.edges)
    edges: list[tuple[int, int]] = []
    for e, (u, v) in enumerate(g.edges):
        chain = [u] + [g.n + e * m + i for i in range(m)] + [v]
        edges.extend(zip(chain, chain[1:]))
    return Graph(g.n + g.m * m, edges)


def contract_partition(
    g: Graph, parts: Sequence[Iterable[int]]
) -> tuple[Graph, dict[int, int], dict[tuple[int, int], tuple[int, int]]]:
    """Contract each part to a single vertex.

    ``parts`` must partition ``V(g)``. Part ids are assigned by ascending
    smallest member. Returns ``(h, block_of, witness)`` where ``block_of``
    maps original vertices to part ids and ``witness`` maps each contracted
    edge ``(a, b)`` (a < b) to its lexicographically smallest original edge.
    Self-loops arising from intra-part edges are dropped.
    """
    blocks = sorted((tuple(sorted(set(p))) for p in parts), key=lambda b: b[0])
    block_of: dict[int, int] = {}
    for i, b in enumerate(blocks):
        if not b:
            raise PreconditionError("empty part in partition")
        for v in b:
            if v in block_of:
                raise PreconditionError("parts overlap", vertex=v)
            block_of[v] = i
    if len(block_of) != g.n:
        raise PreconditionError("parts do not cover the vertex set", covered=len(block_of))
    witness: dict[tuple[int, int], tuple[int, int]] = {}
    for u, v in g.edges:
        a, b = block_of[u], block_of[v]
        if a == b:
            continue
        if a > b:
            a, b = b, a
            u, v = v, u
        key = (a, b)
        if key not in witness or (u, v) < witness[key]:
            witness[key] = (u, v)
    h = Graph(len(blocks), sorted(witness))
    return h, block_of, witness
