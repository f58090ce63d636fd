"""Exact-length cycles via double-broom embedding.

The route to a cycle of length exactly ell: prune the graph so every small
set expands strongly, embed a double broom (two complete k-ary trees of
depth t joined by a path) whose leaf-to-leaf distance is ell - 1, then close
the cycle through any host edge between the two leaf images. Each broom has
at least ceil(beta * n) leaves, so in a graph where every two disjoint sets
of that size are joined, the closing edge must exist; its absence is itself
a checkable refutation and is reported with the witness pair.

The tree embedder is a validated greedy heuristic, not the existential
machinery behind the expansion-implies-trees theorem; the exact conditions
of that theorem are exposed separately through :func:`haxell_conditions`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Optional

import numpy as np

from . import kernels
from .errors import (
    CutoffExceeded,
    EmbedFailure,
    NoClosingEdge,
    PreconditionError,
    StageFailure,
    TargetOutOfRange,
)
from .expansion import BRUTE_FORCE_CUTOFF, ceil_log_ratio, is_beta_graph, prune_beta
from .graph import (
    CycleCertificate,
    Graph,
    RootedTree,
    bfs_tree,
    components,
    neighborhood,
    set_of,
    validate_cycle,
)

__all__ = [
    "Thm3Params",
    "TreeShape",
    "double_broom",
    "embed_tree",
    "haxell_conditions",
    "run_thm3",
]


@dataclass(frozen=True)
class Thm3Params:
    """Derived constants for one run: broom arity and depth, target window.

    ``k`` and ``t`` drive the broad variant (wide brooms, lengths up to about
    n/2); the binary variant always uses arity 2 and depth ``r`` and covers
    the longer lengths. ``b1``/``b2`` bound the advisory target window
    [b1 log2 n, (1 - b2) n].
    """

    beta: Fraction
    k: int
    t: Optional[int]
    r: int
    b1: float
    b2: Fraction
    variant: str

    @classmethod
    def derive(cls, beta: float | Fraction, n: int, variant: str) -> "Thm3Params":
        bf = Fraction(beta)
        if not 0 < bf < 1:
            raise PreconditionError(f"need 0 < beta < 1, got {float(bf)}")
        if variant not in ("broad", "binary"):
            raise PreconditionError(f"unknown variant {variant!r}")
        k = math.floor(1 / (4 * bf))
        if variant == "broad" and k < 2:
            raise PreconditionError(
                "broad variant needs beta <= 1/8 so the broom arity is >= 2",
                beta=float(bf),
                k=k,
            )
        t = ceil_log_ratio(Fraction(k), bf * n) if k >= 2 else None
        r = ceil_log_ratio(Fraction(2), bf * n)
        return cls(
            beta=bf,
            k=k,
            t=t,
            r=r,
            b1=25.0 / math.log2(1 / float(bf)),
            b2=14 * bf,
            variant=variant,
        )

    @property
    def tree_arity(self) -> int:
        return self.k if self.variant == "broad" else 2

    @property
    def tree_depth(self) -> int:
        if self.variant == "broad":
            assert self.t is not None
            return self.t
        return self.r

    def ell_window(self, n: int) -> tuple[int, int]:
        """Advisory target window [ceil(b1 log2 n), floor((1 - b2) n)].

        May be empty; the structural window below is what the construction
        actually needs.
        """
        return math.ceil(self.b1 * math.log2(n)), math.floor((1 - self.b2) * n)

    def structural_window(self, host_n: int) -> tuple[int, int]:
        """Targets the double broom can physically express inside the host.

        Lower end: the bridge needs at least one edge (ell >= 2 depth + 2)
        and a cycle needs 3 vertices. Upper end: the tree must fit in the
        host, and vertex count grows one-for-one with ell.
        """
        depth = self.tree_depth
        base = double_broom(self.tree_arity, depth, 1).vertex_count
        lo = max(2 * depth + 2, 3)
        hi = host_n - base + 2 * depth + 2
        return lo, hi

    def haxell_preset(self, n: int, ell: int) -> tuple[int, Fraction, Fraction]:
        """The (d, m, M) triple under which the embedding is guaranteed."""
        m = self.beta * n
        if self.variant == "broad":
            d = self.k + 1
            big_m = ell + 2 * (self.k * m - 1) / Fraction(self.k - 1) - 1
        else:
            d = 3
            big_m = ell + 4 * m - 3
        return d, m, big_m

    def to_json(self) -> dict[str, Any]:
        return {
            "beta": float(self.beta),
            "k": self.k,
            "t": self.t,
            "r": self.r,
            "b1": self.b1,
            "b2": float(self.b2),
            "variant": self.variant,
        }


@dataclass(frozen=True)
class TreeShape:
    """A rooted tree to embed, with the two broom leaf layers identified.

    ``leaves_a``/``leaves_b`` are empty for shapes built from a bare tree
    via :meth:`from_tree`; the cycle closer only works on double brooms.
    """

    tree: RootedTree
    leaves_a: tuple[int, ...] = ()
    leaves_b: tuple[int, ...] = ()

    @property
    def vertex_count(self) -> int:
        return self.tree.size

    @property
    def max_degree(self) -> int:
        return max(self.tree.tree_degree(v) for v in self.tree.order)

    @classmethod
    def from_tree(cls, tree: RootedTree) -> "TreeShape":
        return cls(tree=tree)


def double_broom(k: int, t: int, p: int) -> TreeShape:
    """Two complete k-ary trees of depth ``t``, roots joined by a ``p``-path.

    Vertices are numbered level by level: broom A from 0, then the p - 1
    bridge vertices, then broom B. Leaf-to-leaf paths across the bridge all
    have exactly 2t + p edges, which is what makes the closing edge give an
    exact cycle length.
    """
    if k < 1 or t < 0 or p < 1:
        raise PreconditionError("need k >= 1, t >= 0, p >= 1", k=k, t=t, p=p)
    offs = [0]
    for i in range(t + 1):
        offs.append(offs[-1] + k**i)
    broom = offs[-1]
    root_b = broom + p - 1
    total = 2 * broom + p - 1

    edges = []
    for base in (0, root_b):
        for i in range(t):
            for m in range(k**i):
                parent = base + offs[i] + m
                for j in range(k):
                    edges.append((parent, base + offs[i + 1] + m * k + j))
    bridge = [0, *range(broom, root_b), root_b]
    edges.extend(zip(bridge, bridge[1:]))

    tree = bfs_tree(Graph(total, edges), 0)
    leaves_a = tuple(range(offs[t], offs[t] + k**t))
    leaves_b = tuple(range(root_b + offs[t], root_b + offs[t] + k**t))
    return TreeShape(tree=tree, leaves_a=leaves_a, leaves_b=leaves_b)


def _greedy_child(h: Graph, parent_img: int, used: set[int]) -> int | None:
    best = None
    best_key = None
    for w in h.neighbors(parent_img):
        if w in used:
            continue
        key = (-sum(1 for x in h.neighbors(w) if x not in used), w)
        if best_key is None or key < best_key:
            best, best_key = w, key
    return best


def embed_tree(
    h: Graph, shape: TreeShape, seed: int = 0, retries: int = 64
) -> dict[int, int] | None:
    """Injective adjacency-preserving map of ``shape`` into ``h``, or None.

    Greedy BFS-order placement: each tree child goes to the unused neighbor
    of its parent's image with the most unused neighbors left. When a child
    cannot be placed, its parent's placement is rotated among the
    alternatives (re-placing the already-placed siblings); when rotation
    fails too, the attempt is abandoned and restarted from a different root
    image. Successes are validated before being returned; absence of a map
    proves nothing.
    """
    n_tree = shape.vertex_count
    if n_tree > h.n:
        raise PreconditionError(
            "tree larger than host", tree=n_tree, host=h.n
        )
    order = shape.tree.order
    parent = shape.tree.parent
    kids = shape.tree.children_map()
    root = shape.tree.root

    def place(v: int, img: dict[int, int], used: set[int]) -> bool:
        w = _greedy_child(h, img[parent[v]], used)
        if w is None:
            return False
        img[v] = w
        used.add(w)
        return True

    for attempt in range(max(retries, 1)):
        if attempt == 0:
            root_img = max(range(h.n), key=lambda v: (len(h.neighbors(v)), -v))
        else:
            rng = np.random.default_rng([seed, attempt])
            root_img = int(rng.integers(h.n))
        img = {root: root_img}
        used = {root_img}
        ok = True
        rotations = 4 * n_tree
        for v in order[1:]:
            if place(v, img, used):
                continue
            par = parent[v]
            if par == root:
                ok = False
                break
            placed_sibs = [c for c in kids[par] if c in img]
            old_par_img = img[par]
            block = [par, *placed_sibs, v]
            for c in (par, *placed_sibs):
                used.discard(img[c])
                del img[c]
            tried = {old_par_img}
            repaired = False
            while rotations > 0:
                rotations -= 1
                cand = _greedy_child(h, img[parent[par]], used | tried)
                if cand is None:
                    break
                tried.add(cand)
                img[par] = cand
                used.add(cand)
                if all(place(c, img, used) for c in block[1:]):
                    repaired = True
                    break
                for c in block:
                    if c in img:
                        used.discard(img[c])
                        del img[c]
            if not repaired:
                ok = False
                break
        if ok:
            assert len(set(img.values())) == n_tree
            for v in order[1:]:
                assert h.has_edge(img[v], img[parent[v]])
            return img
    return None


def haxell_conditions(
    h: Graph,
    d: int,
    m: float | Fraction,
    big_m: float | Fraction,
    mode: str = "auto",
    cutoff: int = BRUTE_FORCE_CUTOFF,
    trials: int = 200,
    seed: int = 0,
) -> tuple[bool, tuple[int, ...] | None]:
    """Check |N(U)| >= d|U|+1 for |U| <= m and >= d|U|+M for m < |U| <= 2m.

    Exhaustive when the host fits under ``cutoff`` (the witness is then the
    first minimum-neighborhood set at the smallest violating size);
    sampling mode beyond that is one-sided, so True means only that no
    violation was found.
    """
    if mode not in ("auto", "exhaustive", "sample"):
        raise PreconditionError(f"unknown mode {mode!r}")
    mf, bigf = Fraction(m), Fraction(big_m)
    n = h.n
    smax = min(math.floor(2 * mf), n)

    def bound(s: int) -> Fraction:
        return d * s + 1 if s <= mf else d * s + bigf

    exhaustive = mode == "exhaustive" or (mode == "auto" and n <= cutoff)
    if exhaustive:
        if n > cutoff:
            raise CutoffExceeded(
                f"{n} vertices exceeds exhaustive cutoff {cutoff}", n=n, cutoff=cutoff
            )
        masks = h.adjacency_masks()
        for s in range(1, smax + 1):
            cnt, mask = kernels.min_nbr_at_size(n, masks, s)
            if cnt >= 0 and cnt < bound(s):
                return False, tuple(sorted(set_of(mask)))
        return True, None
    rng = np.random.default_rng(seed)
    for s in range(1, smax + 1):
        for _ in range(trials):
            u = sorted(int(x) for x in rng.choice(n, size=s, replace=False))
            if len(neighborhood(h, u)) < bound(s):
                return False, tuple(u)
    return True, None


def _beta_witness_from_components(
    g: Graph, s: int
) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    big = [sorted(c) for c in components(g) if len(c) >= s]
    if len(big) >= 2:
        big.sort(key=len, reverse=True)
        return tuple(big[0][:s]), tuple(big[1][:s])
    return None


def run_thm3(
    g: Graph,
    beta: float | Fraction,
    ell: int,
    params: Thm3Params | None = None,
    seed: int = 0,
    retries: int = 64,
    strict: bool = False,
) -> CycleCertificate:
    """Produce a validated cycle of length exactly ``ell``.

    Prunes, picks the broom variant by where ``ell`` falls (wide brooms for
    targets up to (1/2 - 10 beta) n, binary brooms beyond), embeds, and
    closes through a leaf-to-leaf edge. ``strict`` additionally enforces the
    advisory window [b1 log2 n, (1 - b2) n]; the structural window is always
    enforced. When no closing edge exists the two leaf images of size
    ceil(beta n) are returned as a refutation witness inside the error.
    """
    bf = Fraction(beta)
    n = g.n
    if ell < 3:
        raise TargetOutOfRange(f"cycle length must be at least 3, got {ell}", ell=ell)
    if params is None:
        broad_ok = bf <= Fraction(1, 8) and ell <= (Fraction(1, 2) - 10 * bf) * n
        params = Thm3Params.derive(bf, n, "broad" if broad_ok else "binary")
    if strict:
        lo, hi = params.ell_window(n)
        if not lo <= ell <= hi:
            raise TargetOutOfRange(
                f"target {ell} outside advisory window [{lo}, {hi}]",
                ell=ell,
                window=[lo, hi],
            )
    depth = params.tree_depth
    p = ell - 2 * depth - 1
    if p < 1:
        raise TargetOutOfRange(
            f"target {ell} below the bridge minimum 2*{depth}+2", ell=ell, depth=depth
        )

    survivors = prune_beta(g, bf)
    h, old = g.induced(survivors)
    shape = double_broom(params.tree_arity, depth, p)
    if shape.vertex_count > h.n:
        raise TargetOutOfRange(
            f"double broom needs {shape.vertex_count} vertices, "
            f"pruned host has {h.n}",
            ell=ell,
            max_ell=params.structural_window(h.n)[1],
        )

    emb = embed_tree(h, shape, seed=seed, retries=retries)
    if emb is None:
        s = math.ceil(bf * n)
        witness = _beta_witness_from_components(g, s)
        if witness is None:
            ok, pair = is_beta_graph(g, bf, mode="auto")
            witness = pair if not ok else None
        if witness is not None:
            raise NoClosingEdge(
                "embedding failed and the host is refuted as a beta-graph",
                set_a=witness[0],
                set_b=witness[1],
            )
        raise EmbedFailure(
            "greedy embedder exhausted its restarts",
            tree=shape.vertex_count,
            host=h.n,
            retries=retries,
        )

    img_a = sorted((old[emb[x]], x) for x in shape.leaves_a)
    img_b = sorted((old[emb[y]], y) for y in shape.leaves_b)
    for a_g, x in img_a:
        for b_g, y in img_b:
            if g.has_edge(a_g, b_g):
                seq = [old[emb[v]] for v in shape.tree.tree_path(x, y)]
                cert = validate_cycle(g, seq)
                assert cert.length == ell
                return cert

    s = math.ceil(bf * n)
    set_a = tuple(a for a, _ in img_a)
    set_b = tuple(b for b, _ in img_b)
    if len(set_a) >= s and len(set_b) >= s:
        raise NoClosingEdge(
            "no edge joins the two leaf images; the first ceil(beta n) "
            "vertices of each refute the beta-graph property",
            set_a=set_a[:s],
            set_b=set_b[:s],
        )
    raise StageFailure(
        "closing-edge",
        f"leaf images have {len(set_a)} and {len(set_b)} vertices, "
        f"too few to refute at ceil(beta n) = {s}",
    )
