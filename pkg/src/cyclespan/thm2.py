"""Pipeline producing a fan of distinct-length cycles from one expander.

The construction: grow a BFS tree T, pull a long DFS path P out of the
rest of the graph, find the path vertices reachable from T by short
detours, pigeonhole them onto a single tree level, and fan out cycles
through the lowest common ancestor. All cycles share the two tree arcs, so
their lengths differ exactly by position along P, which makes the length
set provably distinct (strictly increasing in P-order).

Every stage checks the size postcondition the construction promises and
raises :class:`StageFailure` with the achieved numbers when one fails.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable

from .errors import ComponentTooSmall, PathShortfall, StageFailure
from .expansion import ceil_log_ratio, long_path_from
from .graph import (
    CycleCertificate,
    Graph,
    Path,
    RootedTree,
    bfs_tree,
    components,
    extend_bfs_tree,
    minimal_subtree,
    truncate_tree,
    validate_cycle,
)

__all__ = ["Thm2Trace", "reachable_on_path", "minimal_subtree", "run_thm2"]


@dataclass(frozen=True)
class Thm2Trace:
    """Everything the cycle-fan construction produced, stage by stage."""

    alpha: float
    T: RootedTree
    P: Path
    k: int
    X0: tuple[int, ...]
    T1: RootedTree
    X1: tuple[int, ...]
    T2: RootedTree
    T3: RootedTree
    Y: tuple[int, ...]
    X2: tuple[int, ...]
    X3: tuple[int, ...]
    v: int
    u: int
    cycles: tuple[CycleCertificate, ...]
    notes: tuple[str, ...] = ()

    @property
    def lengths(self) -> tuple[int, ...]:
        return tuple(c.length for c in self.cycles)

    def to_json(self) -> dict[str, Any]:
        return {
            "alpha": self.alpha,
            "k": self.k,
            "tree_size": self.T.size,
            "path_length": self.P.length,
            "x0_size": len(self.X0),
            "x1_size": len(self.X1),
            "x3_size": len(self.X3),
            "lca": self.v,
            "junction": self.u,
            "cycle_count": len(self.cycles),
            "lengths": list(self.lengths),
            "notes": list(self.notes),
        }


def reachable_on_path(g: Graph, t: Iterable[int], p: Path, k: int) -> tuple[int, ...]:
    """Path vertices reachable from ``t`` by detours of length at most ``k``.

    Multi-source BFS from ``t`` whose internal vertices avoid both ``t`` and
    the path; a path vertex counts as reached the moment an edge lands on it,
    so membership means a connecting walk of at most ``k`` edges whose
    interior stays outside ``t`` and ``V(p)``.
    """
    t_set = set(t)
    p_set = set(p)
    if t_set & p_set:
        raise StageFailure("reachable-set", "tree and path sets overlap")
    dist = {v: 0 for v in t_set}
    hits: dict[int, int] = {}
    queue = deque(sorted(t_set))
    while queue:
        v = queue.popleft()
        d = dist[v] + 1
        if d > k:
            break
        for w in g.neighbors(v):
            if w in p_set:
                if w not in hits:
                    hits[w] = d
            elif w not in dist:
                dist[w] = d
                queue.append(w)
    return tuple(sorted(w for w, d in hits.items() if d <= k))


def _thm2_k(af: Fraction) -> int:
    return 2 * ceil_log_ratio(1 + af / 2, 3 / af) + 1


def run_thm2(g: Graph, alpha: float | Fraction) -> Thm2Trace:
    """Run the full cycle-fan construction on an asserted alpha-expander.

    Returns the trace, whose ``cycles`` all validate and whose lengths are
    strictly increasing. Raises :class:`StageFailure` naming the stage when
    a size postcondition cannot be met (expected on graphs that are not
    actually expanders, or below the construction's feasible scale).
    """
    af = Fraction(alpha)
    n = g.n
    if not 0 < af <= 1:
        raise StageFailure("setup", f"alpha must be in (0, 1], got {float(af)}")
    t_size = max(math.floor(af * n / 4), 1)

    raw = bfs_tree(g, 0, stop_size=t_size)
    if raw.size < t_size:
        raise StageFailure(
            "initial-bfs",
            f"component of 0 exhausted at {raw.size} < {t_size} vertices",
            achieved=raw.size,
            wanted=t_size,
        )
    tree = truncate_tree(raw, t_size)

    rest = [v for v in range(n) if v not in tree.vertex_set]
    if not rest:
        raise StageFailure("long-path", "tree consumed every vertex")
    comp = max(components(g, within=rest), key=len)
    sub, old_of_new = g.induced(sorted(comp))
    ell_req = max(math.ceil(af * n / 4) - 1, 0)
    try:
        lp = long_path_from(sub, 0, k=(n + 1) // 2)
    except ComponentTooSmall as exc:
        raise StageFailure("long-path", str(exc)) from exc
    path = Path(old_of_new[v] for v in lp)
    if path.length < ell_req:
        raise StageFailure(
            "long-path",
            f"deepest path has length {path.length} < {ell_req}",
            achieved=path.length,
            wanted=ell_req,
        )

    k = _thm2_k(af)
    x0 = reachable_on_path(g, tree.vertex_set, path, k)
    if 12 * len(x0) < af * af * n:
        raise StageFailure(
            "reachable-set",
            f"|X0| = {len(x0)} below alpha^2 n/12 = {float(af * af * n / 12):.3f}",
            achieved=len(x0),
        )

    notes: list[str] = []
    t1 = extend_bfs_tree(g, tree, forbidden=set(path), max_new_levels=k - 1)
    lo = max(t1.num_levels - (k + 1), 0)
    band_levels = {
        v: d for d in range(lo, t1.num_levels) for v in t1.levels[d]
    }
    attach_level: dict[int, int] = {}
    for x in x0:
        levs = [band_levels[w] for w in g.neighbors(x) if w in band_levels]
        if levs:
            attach_level[x] = min(levs)
    if len(attach_level) < len(x0):
        notes.append(
            f"{len(x0) - len(attach_level)} of {len(x0)} reachable vertices "
            "lack a neighbor in the last k+1 tree levels; dropped"
        )
    if not attach_level:
        raise StageFailure("attachment", "no reachable vertex attaches to the tree")
    classes: dict[int, list[int]] = {}
    for x, lev in sorted(attach_level.items()):
        classes.setdefault(lev, []).append(x)
    level_c, x1 = max(classes.items(), key=lambda kv: (len(kv[1]), -kv[0]))
    if len(x1) < 2:
        raise StageFailure(
            "attachment-pigeonhole",
            f"largest same-level class has {len(x1)} < 2 vertices",
            achieved=len(x1),
        )

    parent = dict(t1.parent)
    for x in x1:
        parent[x] = min(w for w in g.neighbors(x) if band_levels.get(w) == level_c)
    levels = [list(lvl) for lvl in t1.levels]
    while len(levels) <= level_c + 1:
        levels.append([])
    levels[level_c + 1].extend(x1)
    t2 = RootedTree(
        root=t1.root,
        parent=parent,
        levels=tuple(tuple(lvl) for lvl in levels),
        order=t1.order + tuple(x1),
    )

    t3 = minimal_subtree(t2, x1)
    v = t3.root
    branches = t3.children_map()[v]
    if len(branches) < 2:
        raise AssertionError("minimal subtree of same-depth vertices must branch")
    x1_set = set(x1)
    per_branch = [(len(t3.subtree_vertices(b) & x1_set), b) for b in branches]
    _, y_child = min(per_branch)
    y = tuple(sorted(t3.subtree_vertices(y_child) & x1_set))
    x2 = tuple(w for w in x1 if w not in set(y))
    u = min(y)

    pos = {w: i for i, w in enumerate(path)}
    pu = pos[u]
    earlier = sorted((w for w in x2 if pos[w] < pu), key=lambda w: pu - pos[w])
    later = sorted((w for w in x2 if pos[w] > pu), key=lambda w: pos[w] - pu)
    x3 = tuple(later) if len(later) >= len(earlier) else tuple(earlier)
    forward = len(later) >= len(earlier)

    cycles = []
    for w in x3:
        seg = path[pu + 1 : pos[w]] if forward else path[pos[w] + 1 : pu][::-1]
        cyc = t3.tree_path(v, u) + tuple(seg) + t3.tree_path(w, v)[:-1]
        cycles.append(validate_cycle(g, cyc))
    lengths = [c.length for c in cycles]
    if any(b <= a for a, b in zip(lengths, lengths[1:])):
        raise AssertionError("cycle lengths must strictly increase along the path")
    if not notes:
        floor_bound = -(-len(x0) // (4 * (k + 1)))
        if len(x3) < floor_bound:
            raise AssertionError(
                f"|X3| = {len(x3)} below the guaranteed ceil(|X0|/(4(k+1))) = {floor_bound}"
            )

    return Thm2Trace(
        alpha=float(af),
        T=tree,
        P=path,
        k=k,
        X0=x0,
        T1=t1,
        X1=tuple(x1),
        T2=t2,
        T3=t3,
        Y=y,
        X2=x2,
        X3=x3,
        v=v,
        u=u,
        cycles=tuple(cycles),
        notes=tuple(notes),
    )
