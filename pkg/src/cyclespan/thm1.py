"""Pipeline producing a cycle whose length lands in a narrow window.

Given an expander and a target length ``ell``, the pipeline first builds a
reusable trace: a small skeleton tree, a degree-capped key tree whose middle
band survives interior pruning, a family of disjoint connector paths from
the skeleton's neighborhood into that band, and one long path threaded
through contracted band subtrees. Assembly then walks, per target, a closed
route whose length is guaranteed to fall in ``[ell, ell + A]``.

Every intermediate set-size bound the construction relies on is checked the
moment it is formed; a failed bound raises stage-failure carrying the
achieved/wanted pair. Checks that only affect guarantees (not correctness
of the output) are recorded as slack numbers instead, so a run on a graph
too small for the guarantees still reports how far off it was. All
tie-breaks are by smallest vertex id, making the trace a pure function of
(graph, alpha, constants, seed).

Constants come in two modes. Paper mode derives everything from alpha with
exact rational arithmetic and is astronomically conservative; practical
mode takes every knob explicitly and is tuned per graph family. Both feed
the same pipeline and the same validation; only the guarantees differ.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Sequence

from .errors import (
    AssemblyViolation,
    CyclespanError,
    PreconditionError,
    StageFailure,
    TargetOutOfRange,
)
from .expansion import (
    ExpansionCertificate,
    disjoint_paths,
    long_path_from,
    prune_interior,
    prune_to_expander,
)
from .graph import (
    CycleCertificate,
    Graph,
    Path,
    RootedTree,
    bfs_tree,
    components,
    contract_partition,
    neighborhood,
    shortest_path,
    truncate_tree,
    validate_cycle,
)

Real = float | Fraction


def _frac(x: Real) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _as_float(x: Real) -> float:
    try:
        return float(x)
    except OverflowError:
        return math.inf


@dataclass(frozen=True)
class PipelineConstants:
    """The tunable constants steering the cycle pipeline.

    ``Delta`` caps key-tree degrees, ``mu`` filters connector paths by
    vertex count, ``A`` is the promised window width, and ``a1``/``a2``
    bound the usable target range ``[a1 * ln n, a2 * n]``. ``C0 .. C3``
    appear in the level-count and subtree-size bounds. The ``*_frac``
    fields are the stage thresholds, expressed as fractions of the ambient
    vertex count (of the pruned subgraph where applicable).
    """

    mode: str
    Delta: int
    C0: Real
    C1: Real
    C2: int
    C3: Real
    mu: Real
    A: int
    a1: Real
    a2: Real
    skeleton_frac: Fraction
    u1_frac: Fraction
    absorb_frac: Fraction
    x1_frac: Fraction
    seed_frac: Fraction
    level_frac: Fraction
    flow_frac: Fraction
    u2_frac: Fraction = Fraction(1, 10)
    u3_frac: Fraction = Fraction(1, 10)

    def __post_init__(self) -> None:
        if self.mode not in ("paper", "practical"):
            raise PreconditionError(f"unknown constants mode {self.mode!r}")
        if self.Delta < 2:
            raise PreconditionError("degree cap must be at least 2", Delta=self.Delta)
        if self.C2 < 1:
            raise PreconditionError("band depth bound must be at least 1", C2=self.C2)

    @classmethod
    def paper(cls, alpha: Real) -> "PipelineConstants":
        """Derive every constant from ``alpha`` by the guarantee formulas.

        Fractional bound constants are rounded up, which only weakens the
        claims they cap. ``A`` anticipates that the full pipeline grows its
        key tree at half the given expansion, so it is three times the band
        bound at ``alpha / 2``, not three times ``C2``.
        """
        af = _frac(alpha)
        if not 0 < af <= 1:
            raise PreconditionError("alpha must be in (0, 1]", alpha=float(af))
        delta = math.ceil(Fraction(1600) / af**5)
        c2 = math.ceil(Fraction(17) / af)
        c3: Real = Fraction(delta) ** (c2 + 1)
        a2: Real = af / (1000 * c3 * c3)
        return cls(
            mode="paper",
            Delta=delta,
            C0=Fraction(15) / af,
            C1=Fraction(201) / af**5,
            C2=c2,
            C3=c3,
            mu=Fraction(200) / af**4,
            A=3 * math.ceil(Fraction(34) / af),
            a1=Fraction(1000) / af + 2 * (Fraction(15) / af),
            a2=a2,
            skeleton_frac=af**2 / 16,
            u1_frac=1 - 3 * af / 16,
            absorb_frac=af**3 / 32,
            x1_frac=af**3 / 33,
            seed_frac=af**4 / 200,
            level_frac=af / 12,
            flow_frac=af**4 / 100,
        )

    @classmethod
    def practical(
        cls,
        *,
        Delta: int,
        C0: Real,
        C1: Real,
        C2: int,
        C3: Real,
        mu: Real,
        a1: Real,
        a2: Real,
        skeleton_frac: Real,
        u1_frac: Real,
        absorb_frac: Real,
        x1_frac: Real,
        seed_frac: Real,
        level_frac: Real,
        flow_frac: Real,
        u2_frac: Real = Fraction(1, 10),
        u3_frac: Real = Fraction(1, 10),
    ) -> "PipelineConstants":
        """Build explicit constants; the window width is pinned to 3 * C2."""
        return cls(
            mode="practical",
            Delta=Delta,
            C0=C0,
            C1=C1,
            C2=C2,
            C3=C3,
            mu=mu,
            A=3 * C2,
            a1=a1,
            a2=a2,
            skeleton_frac=_frac(skeleton_frac),
            u1_frac=_frac(u1_frac),
            absorb_frac=_frac(absorb_frac),
            x1_frac=_frac(x1_frac),
            seed_frac=_frac(seed_frac),
            level_frac=_frac(level_frac),
            flow_frac=_frac(flow_frac),
            u2_frac=_frac(u2_frac),
            u3_frac=_frac(u3_frac),
        )

    def target_window(self, n: int) -> tuple[int, int]:
        """Inclusive target range ``[max(3, ceil(a1 ln n)), floor(a2 n)]``."""
        lo = max(3, math.ceil(float(self.a1) * math.log(max(n, 2))))
        hi_exact = self.a2 * n
        hi = 0 if hi_exact == math.inf else math.floor(hi_exact)
        return lo, hi

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "mode": self.mode,
            "Delta": self.Delta,
            "C0": _as_float(self.C0),
            "C1": _as_float(self.C1),
            "C2": self.C2,
            "C3": _as_float(self.C3),
            "mu": _as_float(self.mu),
            "A": self.A,
            "a1": _as_float(self.a1),
            "a2": _as_float(self.a2),
        }
        for name in (
            "skeleton_frac",
            "u1_frac",
            "absorb_frac",
            "x1_frac",
            "seed_frac",
            "level_frac",
            "flow_frac",
            "u2_frac",
            "u3_frac",
        ):
            out[name] = float(getattr(self, name))
        return out


#: Hand-tuned constants for sparse random regular graphs around n = 200.
PRACTICAL_PRESETS: dict[str, PipelineConstants] = {
    "sparse-200": PipelineConstants.practical(
        Delta=4,
        C0=3,
        C1=12,
        C2=6,
        C3=60,
        mu=Fraction(60),
        a1=Fraction(3),
        a2=Fraction(1, 5),
        skeleton_frac=Fraction(1, 20),
        u1_frac=Fraction(4, 5),
        absorb_frac=Fraction(1, 100),
        x1_frac=Fraction(1, 200),
        seed_frac=Fraction(1, 100),
        level_frac=Fraction(1, 12),
        flow_frac=Fraction(1, 200),
    ),
}


# -- key tree ------------------------------------------------------------------


@dataclass(frozen=True)
class KeyTree:
    """A degree-capped BFS tree with a certified middle band.

    Level indices are 0-based depths: ``k0`` is the first depth whose
    discovery prefix reaches the seed threshold, ``t1``/``t2`` the first
    depths whose prefixes reach n/4 and n/2, and ``[k1, k2]`` the band
    between the last sparse level before ``t1`` and the first sparse level
    after ``t2``. ``X`` holds the vertices of tree degree at least
    ``Delta`` and ``U2`` the pruned band survivors. ``bound_slack`` maps
    each guarantee bound to (bound - achieved); negative entries mean the
    graph was too small for that guarantee, not that the tree is wrong.
    """

    tree: RootedTree
    k0: int
    k1: int
    k2: int
    t1: int
    t2: int
    X: tuple[int, ...]
    U2: tuple[int, ...]
    bound_slack: dict[str, float] = field(default_factory=dict, compare=False)

    def to_json(self) -> dict[str, Any]:
        return {
            "size": self.tree.size,
            "levels": self.tree.num_levels,
            "k0": self.k0,
            "k1": self.k1,
            "k2": self.k2,
            "t1": self.t1,
            "t2": self.t2,
            "heavy": len(self.X),
            "band_survivors": len(self.U2),
            "bound_slack": dict(self.bound_slack),
        }


def key_tree(
    g: Graph,
    v0: int,
    alpha: Real,
    consts: PipelineConstants,
    seed: int = 0,
) -> KeyTree:
    """Grow the capped BFS tree at ``v0`` and prune its band into ``U2``.

    The walk adds whole neighbor batches until the tree has
    ``ceil(seed_frac * n)`` vertices and caps every vertex expanded after
    that at ``Delta - 1`` children (first ones in ascending id order). A
    level is sparse when it has fewer than ``level_frac * n`` vertices; the
    band between the sparse levels bracketing the n/4 .. n/2 growth phase,
    minus the heavy vertices ``X``, is interior-pruned at eps = 1/5 into an
    expander ``U2``.
    """
    n = g.n
    af = _frac(alpha)
    if not 0 < af <= 1:
        raise PreconditionError("alpha must be in (0, 1]", alpha=float(af))
    seed_size = max(math.ceil(consts.seed_frac * n), 1)
    tree = bfs_tree(g, v0, cap=(consts.Delta, seed_size))
    if tree.size < seed_size:
        raise StageFailure(
            "key-seed",
            f"tree reached {tree.size} of the {seed_size} seed vertices",
            achieved=tree.size,
            wanted=seed_size,
        )
    sizes = [len(lvl) for lvl in tree.levels]
    prefix: list[int] = []
    total = 0
    for s in sizes:
        total += s
        prefix.append(total)
    k0 = next(d for d, p in enumerate(prefix) if p >= seed_size)
    t1 = next((d for d, p in enumerate(prefix) if 4 * p >= n), None)
    t2 = next((d for d, p in enumerate(prefix) if 2 * p >= n), None)
    if t1 is None or t2 is None:
        raise StageFailure(
            "key-growth",
            f"tree covers {tree.size} of {n} vertices, never reaching half",
            achieved=tree.size,
            wanted=math.ceil(Fraction(n, 2)),
        )
    level_thr = consts.level_frac * n
    sparse_lo = [d for d in range(t1) if sizes[d] < level_thr]
    k1 = sparse_lo[-1] + 1 if sparse_lo else k0
    sparse_hi = [d for d in range(t2 + 1, len(sizes)) if sizes[d] < level_thr]
    k2 = sparse_hi[0] - 1 if sparse_hi else len(sizes) - 1
    if not 1 <= k0 <= k1 <= t1 <= t2 <= k2:
        raise StageFailure(
            "key-band",
            f"band indices out of order: k0={k0} k1={k1} t1={t1} t2={t2} k2={k2}",
            k0=k0,
            k1=k1,
            t1=t1,
            t2=t2,
            k2=k2,
        )
    if k2 - k1 > consts.C2:
        raise StageFailure(
            "key-band",
            f"band depth {k2 - k1} exceeds C2 = {consts.C2}",
            achieved=k2 - k1,
            wanted=consts.C2,
        )
    band = tree.band(k1, k2)
    for v in band:
        assert tree.tree_degree(v) <= consts.Delta, "cap leaked into the band"
    heavy = tuple(sorted(v for v in tree.order if tree.tree_degree(v) >= consts.Delta))
    w = sorted(band - set(heavy))
    boundary = len(neighborhood(g, w))
    eps = Fraction(1, 5)
    u2 = prune_interior(g, w, af, eps, force=True, seed=seed)
    u2_floor = max(math.ceil(consts.u2_frac * n), 1)
    if len(u2) < u2_floor:
        raise StageFailure(
            "key-interior",
            f"pruned band kept {len(u2)} of the {u2_floor} vertices required",
            achieved=len(u2),
            wanted=u2_floor,
        )
    logn = math.log(max(n, 2))
    slack = {
        "k0_levels": float(consts.C0) * logn - (k0 + 1),
        "k1_minus_k0": float(consts.C1) - (k1 - k0),
        "k2_minus_k1": float(consts.C2 - (k2 - k1)),
        "t2_minus_t1": float(5 / af) - (t2 - t1),
        "t1_minus_k1": float(6 / af) - (t1 - k1),
        "heavy": float(Fraction(2 * n, consts.Delta)) - len(heavy),
        "band_boundary": float(af * eps * n) - boundary,
        "band_size": len(w) - n / 2,
        "band_survivors": float(len(u2) - consts.u2_frac * n),
    }
    return KeyTree(
        tree=tree, k0=k0, k1=k1, k2=k2, t1=t1, t2=t2, X=heavy, U2=u2, bound_slack=slack
    )


# -- trace ---------------------------------------------------------------------


@dataclass(frozen=True)
class Thm1Trace:
    """Everything the per-target assembly needs, in host-graph ids.

    ``Q`` runs from the key root ``y`` through the skeleton to ``x0``, along
    the connector path to its band landing ``v0``, and through ``Qprime`` to
    the long path's start ``u0``; ``m`` is its edge count. ``P`` is the long
    path through the good band subtrees, starting at ``u0``. ``X3`` is the
    pigeonholed connector class that elected ``x0``, ``Y`` the subtrees its
    path eliminates, ``A_G``/``A_B`` the good/bad split of the band, and
    ``D`` the band subtrees that survived into ``U3``.
    """

    g: Graph
    alpha: Fraction
    consts: PipelineConstants
    certificate: ExpansionCertificate | None
    T: RootedTree
    U1: tuple[int, ...]
    Z: tuple[int, ...]
    X0: tuple[int, ...]
    X1: tuple[int, ...]
    X2: tuple[int, ...]
    X3: tuple[int, ...]
    y: int
    key: KeyTree
    Q_family: tuple[Path, ...]
    x0: int
    Y: tuple[int, ...]
    A_G: tuple[int, ...]
    A_B: tuple[int, ...]
    U3: tuple[int, ...]
    D: tuple[int, ...]
    Qprime: Path
    P: Path
    Q: Path
    m: int
    u0: int
    v0: int
    w0: int
    notes: tuple[str, ...] = ()
    stage_slack: dict[str, float] = field(default_factory=dict, compare=False)

    def to_json(self) -> dict[str, Any]:
        lo, hi = self.consts.target_window(self.g.n)
        return {
            "n": self.g.n,
            "alpha": float(self.alpha),
            "mode": self.consts.mode,
            "skeleton": self.T.size,
            "u1": len(self.U1),
            "z": len(self.Z),
            "x0_set": len(self.X0),
            "x1": len(self.X1),
            "x2": len(self.X2),
            "x3": len(self.X3),
            "paths": len(self.Q_family),
            "key": self.key.to_json(),
            "eliminated": len(self.Y),
            "good_band": len(self.A_G),
            "bad_band": len(self.A_B),
            "u3": len(self.U3),
            "d": len(self.D),
            "qprime_length": self.Qprime.length,
            "long_path_length": self.P.length,
            "connector_length": self.m,
            "window": [lo, hi],
            "notes": list(self.notes),
            "stage_slack": dict(self.stage_slack),
        }


def _relabel_tree(tree: RootedTree, old: Sequence[int]) -> RootedTree:
    return RootedTree(
        root=old[tree.root],
        parent={old[v]: old[p] for v, p in tree.parent.items()},
        levels=tuple(tuple(old[v] for v in lvl) for lvl in tree.levels),
        order=tuple(old[v] for v in tree.order),
        degree_cap=tree.degree_cap,
    )


def _check_floor(count: int, floor_exact: Real, stage: str, what: str) -> int:
    """Stage gate: ``count`` must reach ``ceil(floor_exact)`` and be positive."""
    wanted = max(math.ceil(floor_exact), 1)
    if count < wanted:
        raise StageFailure(
            stage, f"{what}: {count} of {wanted}", achieved=count, wanted=wanted
        )
    return wanted


def run_thm1(
    g: Graph,
    alpha: Real | ExpansionCertificate,
    consts: PipelineConstants | None = None,
    targets: Sequence[int] = (),
    seed: int = 0,
) -> tuple[Thm1Trace, list[CycleCertificate | CyclespanError]]:
    """Build the cycle trace on ``g`` and assemble one cycle per target.

    ``alpha`` may be a number or an expansion certificate; it is trusted,
    not re-verified. Missing ``consts`` default to paper mode at ``alpha``.
    The returned list is aligned with ``targets``: each entry is either a
    validated certificate or the error that stopped that target
    (out-of-window, or a connector/path arithmetic mismatch). Trace
    construction itself raises stage-failure when a set-size gate fails.
    """
    certificate = alpha if isinstance(alpha, ExpansionCertificate) else None
    af = _frac(certificate.value if certificate else alpha)
    if not 0 < af <= 1:
        raise PreconditionError("alpha must be in (0, 1]", alpha=float(af))
    n = g.n
    if n < 3:
        raise PreconditionError("need at least 3 vertices", n=n)
    if consts is None:
        consts = PipelineConstants.paper(af)
    notes: list[str] = []
    stage_slack: dict[str, float] = {}
    logn = math.log(max(n, 2))

    # skeleton: a BFS prefix of the whole graph, later grown by absorption
    skel_size = max(math.ceil(consts.skeleton_frac * n), 1)
    raw = bfs_tree(g, 0, stop_size=skel_size)
    if raw.size < skel_size:
        raise StageFailure(
            "skeleton",
            f"BFS from 0 reached {raw.size} of {skel_size} vertices",
            achieved=raw.size,
            wanted=skel_size,
        )
    t0 = truncate_tree(raw, skel_size)

    half = math.ceil(Fraction(n, 2))
    pre_u1 = float(af * af * half) / 8 - t0.size
    stage_slack["u1_precondition"] = pre_u1
    if pre_u1 < 0:
        notes.append("skeleton too large for the u1 pruning guarantee")
    u1 = prune_to_expander(g, t0.vertex_set, half, af, force=True, seed=seed)
    _check_floor(len(u1), consts.u1_frac * n, "u1-prune", "expander survivors")
    u1set = set(u1)
    z = sorted(v for v in range(n) if v not in u1set and v not in t0.vertex_set)

    # absorption: fold dense skeleton boundaries in Z into the skeleton
    parent = dict(t0.parent)
    levels = [list(lvl) for lvl in t0.levels]
    order = list(t0.order)
    tset = set(order)
    depth = {v: d for d, lvl in enumerate(levels) for v in lvl}
    zset = set(z)
    absorb_floor = consts.absorb_frac * n
    while zset:
        boundary_z = sorted(
            v for v in zset if any(w in tset for w in g.neighbors(v))
        )
        if not boundary_z or len(boundary_z) < absorb_floor:
            break
        for v in boundary_z:
            p = min(w for w in g.neighbors(v) if w in tset)
            d = depth[p] + 1
            while len(levels) <= d:
                levels.append([])
            levels[d].append(v)
            depth[v] = d
            parent[v] = p
            order.append(v)
            tset.add(v)
            zset.discard(v)
    skeleton = RootedTree(
        root=0,
        parent=parent,
        levels=tuple(tuple(lvl) for lvl in levels),
        order=tuple(order),
    )
    z_final = tuple(sorted(zset))

    x0_set = sorted(v for v in u1 if any(w in tset for w in g.neighbors(v)))
    _check_floor(len(x0_set), absorb_floor, "x0", "skeleton boundary inside U1")
    y = x0_set[0]
    x1 = [v for v in x0_set if v != y]
    _check_floor(len(x1), consts.x1_frac * n, "x1", "connector sources")

    # the key tree lives in the pruned subgraph, at half the expansion
    g1, old1 = g.induced(sorted(u1))
    new1 = {o: i for i, o in enumerate(old1)}
    n1 = g1.n
    key_consts = consts if consts.mode == "practical" else PipelineConstants.paper(af / 2)
    key = key_tree(g1, new1[y], af / 2, key_consts, seed=seed)
    tree = key.tree
    k1, k2 = key.k1, key.k2
    u2set = set(key.U2)

    # disjoint connector paths from X1 into the band survivors
    x1_l = sorted(new1[v] for v in x1)
    x1set_l = set(x1_l)
    y_l = new1[y]
    assert y_l not in u2set, "key root leaked into its own band"
    trivial = sorted(x1set_l & u2set)
    flow_a = sorted(x1set_l - u2set)
    flow_b = sorted(u2set - x1set_l)
    qmap: dict[int, Path] = {v: Path((v,)) for v in trivial}
    if flow_a and flow_b:
        allowed = sorted(set(range(n1)) - {y_l} - set(trivial))
        gf, oldf = g1.induced(allowed)
        newf = {o: i for i, o in enumerate(oldf)}
        fam = disjoint_paths(gf, [newf[v] for v in flow_a], [newf[v] for v in flow_b])
        for p in fam.paths:
            lifted = Path(tuple(oldf[v] for v in p))
            qmap[lifted[0]] = lifted
    _check_floor(len(qmap), consts.flow_frac * n, "paths", "disjoint connector paths")
    x2_l = sorted(x for x in qmap if len(qmap[x]) <= consts.mu)
    _check_floor(len(x2_l), Fraction(n) / _frac(consts.mu), "x2", "short connector paths")

    # per path, the on-tree vertex with the largest subtree; pigeonhole the
    # band depths of those branch vertices and elect the busiest class
    tset_l = tree.vertex_set
    tsizes = tree.subtree_sizes()
    tdepth = tree.depth_map()
    branch: dict[int, int] = {}
    for x in x2_l:
        on_tree = [v for v in qmap[x] if v in tset_l]
        assert on_tree, "connector path missed the key tree"
        branch[x] = max(on_tree, key=lambda v: (tsizes[v], -v))
    classes: dict[int, list[int]] = {}
    for x in x2_l:
        d = tdepth[branch[x]]
        if key.k0 <= d <= k2:
            classes.setdefault(d, []).append(x)
    if not classes:
        raise StageFailure(
            "pigeonhole",
            "no connector branch vertex lands in the key band",
            band=[key.k0, k2],
        )
    best_d = max(classes, key=lambda d: (len(classes[d]), -d))
    x3_l = sorted(classes[best_d])
    pigeon_floor = Fraction(n) / (
        2 * _frac(consts.mu) * (_frac(key_consts.C1) + key_consts.C2 + 1)
    )
    stage_slack["pigeonhole"] = float(len(x3_l) - pigeon_floor)
    if len(x3_l) < pigeon_floor:
        notes.append("pigeonhole class below its guarantee floor")
    x0_l = min(x3_l, key=lambda x: (tsizes[branch[x]], x))

    # subtrees eliminated by the elected path, and the good/bad band split
    band_set = tree.band(k1, k2)
    yset_l: set[int] = set()
    for v in qmap[x0_l]:
        if v in tset_l:
            yset_l |= tree.subtree_vertices(v)
    good_l: list[int] = []
    bad_l: list[int] = []
    for w in tree.levels[k1]:
        sub = tree.subtree_vertices(w)
        (bad_l if sub & yset_l else good_l).extend(sub & band_set)
    good_l.sort()
    bad_l.sort()
    stage_slack["eliminated"] = float(
        _frac(consts.mu) * Fraction(n) / len(x3_l) - len(yset_l)
    )

    # prune the landing component away from the bad subtrees
    v0_l = qmap[x0_l][-1]
    assert v0_l in u2set, "connector path missed the band survivors"
    comp = next(c for c in components(g1, within=u2set) if v0_l in c)
    _check_floor(len(comp), consts.u2_frac * n1, "k-component", "landing component")
    gk, oldk = g1.induced(sorted(comp))
    newk = {o: i for i, o in enumerate(oldk)}
    badk = sorted(newk[v] for v in bad_l if v in comp)
    k_param = max(math.floor(consts.u2_frac * n1), 1)
    pre_u3 = float((af / 4) ** 2 * k_param) / 8 - len(badk)
    stage_slack["u3_precondition"] = pre_u3
    if pre_u3 < 0:
        notes.append("bad band too large for the u3 pruning guarantee")
    u3_k = prune_to_expander(gk, badk, k_param, af / 4, force=True, seed=seed)
    u3_l = sorted(oldk[i] for i in u3_k)
    _check_floor(len(u3_l), consts.u3_frac * n1, "u3", "good-band survivors")
    u3set = set(u3_l)

    # the reachable good subtrees, and the short hop into them
    droots: list[int] = []
    dset: set[int] = set()
    for w in tree.levels[k1]:
        sub = tree.subtree_vertices(w)
        if sub & u3set:
            droots.append(w)
            dset |= sub & band_set
    assert dset <= set(good_l), "a pruned subtree was still marked bad"
    qprime_l = shortest_path(g1, v0_l, dset, within=comp)
    assert qprime_l is not None, "landing component lost the pruned subtrees"
    u0_l = qprime_l[-1]
    stage_slack["qprime"] = float(280 * logn / af) - (len(qprime_l) - 1)
    w0_l = tree.path_to_root(u0_l)[tdepth[u0_l] - k1]

    # contract each reachable subtree's survivors and thread a long path
    g3, old3 = g1.induced(u3_l)
    groups: dict[int, list[int]] = {}
    for i, v in enumerate(old3):
        root_w = tree.path_to_root(v)[tdepth[v] - k1]
        groups.setdefault(root_w, []).append(i)
    gp, block_of, witness = contract_partition(g3, list(groups.values()))
    pprime = long_path_from(gp, block_of[groups[w0_l][0]])
    p_vertices: list[int] = []
    cur = u0_l
    blocks = list(pprime)
    for i, blk in enumerate(blocks):
        if i + 1 < len(blocks):
            nxt = blocks[i + 1]
            eu, ev = witness[(blk, nxt) if blk < nxt else (nxt, blk)]
            if blk > nxt:
                eu, ev = ev, eu
            exit_l, entry_l = old3[eu], old3[ev]
        else:
            exit_l, entry_l = cur, cur
        p_vertices.extend(tree.tree_path(cur, exit_l))
        cur = entry_l
    p_l = Path(tuple(p_vertices))
    assert len(set(p_l)) == len(p_l), "long path revisited a vertex"
    p_l.check(g1)
    stage_slack["long_path"] = float(p_l.length - _frac(consts.a2) * n)
    if p_l.length < _frac(consts.a2) * n:
        notes.append("long path below the window ceiling's guarantee")

    # the connector: skeleton hop, elected path, short hop
    x0_g = old1[x0_l]
    ty = min(w for w in g.neighbors(y) if w in tset)
    tx = min(w for w in g.neighbors(x0_g) if w in tset)
    q_vertices = [y, *skeleton.tree_path(ty, tx), x0_g]
    q_vertices.extend(old1[v] for v in qmap[x0_l][1:])
    q_vertices.extend(old1[v] for v in qprime_l[1:])
    q_path = Path(tuple(q_vertices))
    assert len(set(q_path)) == len(q_path), "connector revisited a vertex"
    q_path.check(g)
    m = q_path.length
    stage_slack["connector"] = float(consts.a1) * logn - (m + k1 + 1)
    if stage_slack["connector"] < 0:
        notes.append("connector longer than the window floor's guarantee")

    # lift everything back into host ids
    key_g = KeyTree(
        tree=_relabel_tree(tree, old1),
        k0=key.k0,
        k1=k1,
        k2=k2,
        t1=key.t1,
        t2=key.t2,
        X=tuple(old1[v] for v in key.X),
        U2=tuple(sorted(old1[v] for v in key.U2)),
        bound_slack=key.bound_slack,
    )
    d_g = tuple(sorted(old1[v] for v in dset))
    p_g = Path(tuple(old1[v] for v in p_l))
    u0_g = old1[u0_l]
    assert set(q_path) & set(d_g) == {u0_g}, "connector touched the band subtrees"
    assert set(q_path) & set(p_g) == {u0_g}, "connector crossed the long path"
    trace = Thm1Trace(
        g=g,
        alpha=af,
        consts=consts,
        certificate=certificate,
        T=skeleton,
        U1=tuple(u1),
        Z=z_final,
        X0=tuple(x0_set),
        X1=tuple(x1),
        X2=tuple(old1[v] for v in x2_l),
        X3=tuple(old1[v] for v in x3_l),
        y=y,
        key=key_g,
        Q_family=tuple(
            Path(tuple(old1[u] for u in qmap[x])) for x in sorted(qmap)
        ),
        x0=x0_g,
        Y=tuple(sorted(old1[v] for v in yset_l)),
        A_G=tuple(old1[v] for v in good_l),
        A_B=tuple(old1[v] for v in bad_l),
        U3=tuple(old1[v] for v in u3_l),
        D=d_g,
        Qprime=Path(tuple(old1[v] for v in qprime_l)),
        P=p_g,
        Q=q_path,
        m=m,
        u0=u0_g,
        v0=old1[v0_l],
        w0=old1[w0_l],
        notes=tuple(notes),
        stage_slack=stage_slack,
    )
    results: list[CycleCertificate | CyclespanError] = []
    lo, hi = consts.target_window(n)
    for ell in targets:
        if not lo <= ell <= hi:
            results.append(
                TargetOutOfRange(
                    f"target {ell} outside the window [{lo}, {hi}]",
                    ell=ell,
                    lo=lo,
                    hi=hi,
                )
            )
            continue
        try:
            results.append(assemble_cycle(trace, ell, consts))
        except (PreconditionError, TargetOutOfRange) as exc:
            results.append(exc)
    return trace, results


def assemble_cycle(
    trace: Thm1Trace, ell: int, consts: PipelineConstants | None = None
) -> CycleCertificate:
    """Walk one cycle of length in ``[ell, ell + A]`` out of the trace.

    The route runs the connector ``Q``, then ``ell - m - k1 - 1`` steps
    along ``P``, leaves the current band subtree (1 to 2*C2 + 1 steps),
    climbs to the band's top level (at most C2 steps), and descends the key
    tree to its root. Each leg is checked against its step budget;
    assembly-violation means the trace itself is inconsistent and is never
    swallowed. The result passes through ``validate_cycle``.
    """
    if consts is None:
        consts = trace.consts
    tree = trace.key.tree
    k1 = trace.key.k1
    p, q, m = trace.P, trace.Q, trace.m
    need = ell - m - (k1 + 1)
    if need < 0:
        raise PreconditionError(
            f"target {ell} is shorter than the connector route m + k1 = {m + k1 + 1}",
            ell=ell,
            m=m,
            k1=k1 + 1,
        )
    if need > p.length:
        raise TargetOutOfRange(
            f"target {ell} needs {need} long-path steps, only {p.length} exist",
            ell=ell,
            needed=need,
            available=p.length,
        )
    depth = tree.depth_map()
    band_bound = consts.A // 3

    def band_root(v: int) -> int:
        return tree.path_to_root(v)[depth[v] - k1]

    cyc = list(q)
    cyc.extend(p[1 : need + 1])
    w_cur = band_root(p[need])
    j = need
    while True:
        j += 1
        if j > p.length:
            raise TargetOutOfRange(
                f"target {ell} lands in the final subtree of the long path",
                ell=ell,
            )
        if band_root(p[j]) != w_cur:
            break
    exit_steps = j - need
    if exit_steps > 2 * band_bound + 1:
        raise AssemblyViolation(
            f"subtree exit took {exit_steps} steps, budget is {2 * band_bound + 1}",
            steps=exit_steps,
        )
    cyc.extend(p[need + 1 : j + 1])
    chain = tree.path_to_root(p[j])
    climb = depth[p[j]] - k1
    if not 0 <= climb <= band_bound:
        raise AssemblyViolation(
            f"band climb took {climb} steps, budget is {band_bound}", steps=climb
        )
    cyc.extend(chain[1 : climb + 1])
    wprime = chain[climb]
    assert wprime in set(trace.D), "exited into an eliminated subtree"
    descent = tree.path_to_root(wprime)
    cyc.extend(descent[1:-1])
    length = len(cyc)
    if not ell <= length <= ell + consts.A:
        raise AssemblyViolation(
            f"assembled {length} vertices for target {ell}, window is "
            f"[{ell}, {ell + consts.A}]",
            length=length,
            ell=ell,
        )
    return validate_cycle(trace.g, cyc)
