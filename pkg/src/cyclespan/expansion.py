"""Expansion certificates, refutation, pruning processes, and path lemmas.

Three ways to pin down vertex expansion: exhaustive subset enumeration
(exact rational answer, small n only), the spectral lower bound for regular
graphs, and a seeded randomized refuter (one-sided). On top of those sit
the pruning processes that carve certified sub-expanders out of noisy
graphs, the vertex-disjoint path family via max-flow, and the deep-DFS
long path.

All rational arithmetic is exact: thresholds like alpha/2 or
(1 - 3*beta)/(2*beta) are compared by cross-multiplication, never by
floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Sequence

import numpy as np

from .errors import (
    BetaRefuted,
    ComponentTooSmall,
    CutoffExceeded,
    InvalidInput,
    PathShortfall,
    PreconditionError,
)
from .graph import Graph, Path, components, neighborhood, set_of
from . import kernels

BRUTE_FORCE_CUTOFF = 24


# -- certificates ------------------------------------------------------------


@dataclass(frozen=True)
class ExpansionCertificate:
    """Outcome of an expansion check.

    ``kind`` is one of ``exact`` (value is the true minimum of |N(U)|/|U|
    over nonempty U with |U| <= k, as an exact rational, witness attached),
    ``spectral`` (value is the eigenvalue lower bound (d - lam)/(2d), a
    float), or ``refuted`` (witness violates the queried expansion).
    """

    kind: str
    value: Fraction | float
    k: int
    witness: tuple[int, ...] | None = None
    lam: float | None = None
    d: int | None = None

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {"kind": self.kind, "alpha": float(self.value), "k": self.k}
        if isinstance(self.value, Fraction):
            out["alpha_exact"] = [self.value.numerator, self.value.denominator]
        if self.witness is not None:
            out["witness"] = list(self.witness)
        if self.lam is not None:
            out["lambda"] = self.lam
        if self.d is not None:
            out["d"] = self.d
        return out


def exact_expansion(g: Graph, k: int, cutoff: int = BRUTE_FORCE_CUTOFF) -> ExpansionCertificate:
    """Exact minimum of |N(U)|/|U| over nonempty subsets with |U| <= k.

    Brute force over all subsets (size-ascending), so ``g.n`` must not
    exceed ``cutoff``. For the plain one-parameter expansion property use
    ``k = ceil(n/2)``.
    """
    n = g.n
    if not 1 <= k <= n:
        raise PreconditionError(f"need 1 <= k <= n, got k={k}, n={n}")
    if n > cutoff:
        raise CutoffExceeded(
            f"exhaustive expansion needs n <= {cutoff}, got {n}", n=n, cutoff=cutoff
        )
    cnt, size, mask = kernels.min_ratio_upto(n, g.adjacency_masks(), k)
    if size == 0:
        raise AssertionError("empty scan with k >= 1")
    return ExpansionCertificate(
        kind="exact",
        value=Fraction(cnt, size),
        k=k,
        witness=tuple(sorted(set_of(mask))),
    )


def spectral_alpha(g: Graph) -> ExpansionCertificate:
    """Spectral expansion lower bound (d - lam)/(2d) for regular graphs.

    ``lam`` is the largest absolute value among non-Perron adjacency
    eigenvalues, from a full symmetric eigendecomposition. Eigenvalues
    within 1e-9 of an integer are snapped to it, so graphs with integral
    spectra (complete graphs, Petersen) report exact values. The result is
    floored at 0; it certifies expansion at ``k = ceil(n/2)``.
    """
    n = g.n
    if n < 2:
        raise InvalidInput("spectral bound needs at least 2 vertices", n=n)
    degs = {g.degree(v) for v in range(n)}
    if len(degs) != 1:
        raise InvalidInput(f"graph is not regular (degrees {sorted(degs)})")
    d = degs.pop()
    if d < 1:
        raise InvalidInput("spectral bound needs degree >= 1", d=d)
    if len(components(g)) != 1:
        raise InvalidInput("spectral bound needs a connected graph")
    ev = np.linalg.eigvalsh(g.adjacency_matrix())
    lam = float(max(abs(ev[0]), abs(ev[-2])))
    if abs(lam - round(lam)) < 1e-9:
        lam = float(round(lam))
    value = (d - lam) / (2 * d)
    if value < 0.0:
        value = 0.0
    return ExpansionCertificate(kind="spectral", value=value, k=(n + 1) // 2, lam=lam, d=d)


def refute_expansion(
    g: Graph, alpha: float | Fraction, k: int, trials: int = 64, seed: int = 0
) -> tuple[int, ...] | None:
    """Randomized search for a set with |U| <= k and |N(U)| < alpha * |U|.

    Greedy ball-growing from seeded start vertices (always absorbing the
    neighbor that keeps |N(U)| smallest, min id on ties), followed by
    single-vertex swap passes. Returns a verified violating set or None;
    one-sided, so None proves nothing.
    """
    if trials < 1:
        raise PreconditionError(f"need trials >= 1, got {trials}")
    n = g.n
    if n == 0 or k < 1:
        return None
    af = Fraction(alpha)

    def violates(size: int, nbrs: int) -> bool:
        return nbrs * af.denominator < af.numerator * size

    rng = np.random.default_rng(seed)
    for _ in range(trials):
        start = int(rng.integers(n))
        u: set[int] = {start}
        nbr = set(g.neighbors(start))
        if violates(1, len(nbr)):
            return (start,)
        while len(u) < k and nbr:
            best_v, best_nbr = -1, None
            for c in sorted(nbr):
                cand = (nbr | set(g.neighbors(c))) - {c} - u
                if best_nbr is None or len(cand) < len(best_nbr):
                    best_v, best_nbr = c, cand
            u.add(best_v)
            nbr = best_nbr
            if violates(len(u), len(nbr)):
                return tuple(sorted(u))
        # Swap pass: try replacing one member with one outside neighbor.
        improved = True
        while improved and len(u) > 1:
            improved = False
            current = len(neighborhood(g, u))
            for out in sorted(u):
                for inc in sorted(neighborhood(g, u)):
                    cand = (u - {out}) | {inc}
                    cn = len(neighborhood(g, cand))
                    if cn < current:
                        u = cand
                        improved = True
                        if violates(len(u), cn):
                            return tuple(sorted(u))
                        break
                if improved:
                    break
    return None


# -- pruning processes -------------------------------------------------------


def _prune_process(
    g: Graph,
    keep: Iterable[int],
    k: int,
    threshold: Fraction,
    cutoff: int,
    trials: int,
    seed: int,
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Repeatedly delete sets A, |A| <= k, with |N(A)| < threshold * |A|.

    Runs inside the induced subgraph on ``keep``. The violator search is
    exhaustive (size-ascending, first hit) when the current subgraph is
    small enough, otherwise the randomized refuter; in the latter case the
    process is a semi-decision procedure and termination of the guarantee
    is best-effort, but the returned survivor set is always re-checkable.

    Returns ``(survivors, deleted)``, both sorted.
    """
    current = sorted(keep)
    deleted: list[int] = []
    num, den = threshold.numerator, threshold.denominator
    while current:
        h, old_of_new = g.induced(current)
        if h.n <= cutoff:
            mask = kernels.first_violator(h.n, h.adjacency_masks(), k, num, den)
            if mask == 0:
                break
            doomed = {old_of_new[i] for i in set_of(mask)}
        else:
            witness = refute_expansion(h, threshold, k, trials=trials, seed=seed)
            if witness is None:
                break
            doomed = {old_of_new[i] for i in witness}
        deleted.extend(sorted(doomed))
        current = [v for v in current if v not in doomed]
    return tuple(current), tuple(sorted(deleted))


def prune_to_expander(
    g: Graph,
    v0: Iterable[int],
    k: int,
    alpha: float | Fraction,
    force: bool = False,
    cutoff: int = BRUTE_FORCE_CUTOFF,
    trials: int = 64,
    seed: int = 0,
) -> tuple[int, ...]:
    """Carve a (k, alpha/2)-expander out of ``g`` minus the tainted set.

    Starting from V minus ``v0``, repeatedly deletes any A with |A| <= k
    and |N(A)| < (alpha/2)|A| in the current induced graph. When ``g`` is a
    (k, alpha)-expander and eps = |v0|/n <= alpha^2 * k/(8n), the survivor
    set U has |U| >= (1 - 3 eps/alpha) n and g[U] is a (k, alpha/2)-expander.

    The eps precondition is checked exactly; pass ``force=True`` to run the
    process anyway (the output is still re-checkable, the size guarantee is
    simply off the table).
    """
    v0 = sorted(set(v0))
    n = g.n
    af = Fraction(alpha)
    if not force and 8 * len(v0) > af * af * k:
        raise PreconditionError(
            f"|v0| = {len(v0)} exceeds alpha^2 k/8 = {float(af * af * k / 8):.3f}",
            v0_size=len(v0),
            k=k,
            alpha=float(af),
        )
    bad = set(v0)
    survivors, _ = _prune_process(
        g, (v for v in range(n) if v not in bad), k, af / 2, cutoff, trials, seed
    )
    return survivors


def prune_interior(
    g: Graph,
    w: Iterable[int],
    alpha: float | Fraction,
    eps: float | Fraction,
    force: bool = False,
    cutoff: int = BRUTE_FORCE_CUTOFF,
    trials: int = 64,
    seed: int = 0,
) -> tuple[int, ...]:
    """Prune a large low-boundary set into a ((1/2 - 2 eps)n, alpha/2)-expander.

    Preconditions (checked exactly, ``force`` overrides): |w| > n/2,
    |N(w)| <= alpha * eps * n, and 0 < eps < 1/4. The deletion process runs
    inside g[w] on subsets of size at most (1/2 - 2 eps) n; when ``g`` is an
    alpha-expander the survivor set keeps more than (1/2 - 2 eps) n vertices.
    """
    w = sorted(set(w))
    n = g.n
    af = Fraction(alpha)
    ef = Fraction(eps)
    if not force:
        if not 0 < ef < Fraction(1, 4):
            raise PreconditionError(f"need 0 < eps < 1/4, got {float(ef)}")
        if 2 * len(w) <= n:
            raise PreconditionError(f"need |w| > n/2, got |w| = {len(w)}, n = {n}")
        boundary = len(neighborhood(g, w))
        if boundary > af * ef * n:
            raise PreconditionError(
                f"|N(w)| = {boundary} exceeds alpha*eps*n = {float(af * ef * n):.3f}",
                boundary=boundary,
            )
    capf = (Fraction(1, 2) - 2 * ef) * n
    k_del = max(capf.numerator // capf.denominator, 0)
    if k_del == 0:
        return tuple(w)
    survivors, _ = _prune_process(g, w, k_del, af / 2, cutoff, trials, seed)
    return survivors


def prune_beta(
    g: Graph,
    beta: float | Fraction,
    cutoff: int = BRUTE_FORCE_CUTOFF,
    trials: int = 64,
    seed: int = 0,
) -> tuple[int, ...]:
    """Prune so every small set expands at ratio (1 - 3 beta)/(2 beta).

    Repeatedly deletes any U with |U| <= beta*n and
    |N(U)| < ((1 - 3 beta)/(2 beta)) |U|. If the accumulated deletions ever
    reach beta*n the input could not have had the two-large-sets-joined
    property, and a verified witness pair is raised as
    :class:`BetaRefuted`; otherwise the survivor set has more than
    (1 - beta) n vertices.

    The deletion process alone cannot refute every non-example (two
    disjoint cliques survive it untouched), so this doubles as a checker:
    when ``n`` is within the exhaustive cutoff the input is first verified
    outright and any violating pair is raised. Beyond the cutoff the
    caller's assertion that ``g`` has the property is trusted.
    """
    bf = Fraction(beta)
    n = g.n
    if not 0 < bf < 1:
        raise PreconditionError(f"need 0 < beta < 1, got {float(bf)}")
    if n <= cutoff:
        ok, pair = is_beta_graph(g, bf, mode="exhaustive", cutoff=cutoff)
        if not ok:
            raise BetaRefuted(
                "input fails the disjoint-sets-joined property; witness pair attached",
                set_a=pair[0],
                set_b=pair[1],
                beta=float(bf),
            )
    k_del = (bf * n).numerator // (bf * n).denominator
    s = -((-bf * n).numerator // (bf * n).denominator)  # ceil(beta * n)
    threshold = (1 - 3 * bf) / (2 * bf)
    current = list(range(n))
    deleted: list[int] = []
    num, den = threshold.numerator, threshold.denominator
    while current and k_del >= 1 and num > 0:
        if len(deleted) * bf.denominator >= bf.numerator * n:
            a_side = tuple(sorted(deleted)[:s])
            blocked = set(deleted) | neighborhood(g, deleted)
            b_side = tuple(v for v in range(n) if v not in blocked)[:s]
            if len(b_side) < s:
                raise AssertionError("refutation complement smaller than promised")
            for u in a_side:
                for v in b_side:
                    if g.has_edge(u, v):
                        raise AssertionError("refutation pair has a crossing edge")
            raise BetaRefuted(
                f"deleted {len(deleted)} >= beta*n vertices; witness pair attached",
                set_a=a_side,
                set_b=b_side,
                deleted=sorted(deleted),
                beta=float(bf),
            )
        h, old_of_new = g.induced(current)
        if h.n <= cutoff:
            mask = kernels.first_violator(h.n, h.adjacency_masks(), k_del, num, den)
            if mask == 0:
                break
            doomed = {old_of_new[i] for i in set_of(mask)}
        else:
            witness = refute_expansion(h, threshold, k_del, trials=trials, seed=seed)
            if witness is None:
                break
            doomed = {old_of_new[i] for i in witness}
        deleted.extend(sorted(doomed))
        current = [v for v in current if v not in doomed]
    return tuple(current)


def is_beta_graph(
    g: Graph,
    beta: float | Fraction,
    mode: str = "auto",
    trials: int = 200,
    seed: int = 0,
    cutoff: int = BRUTE_FORCE_CUTOFF,
) -> tuple[bool, tuple[tuple[int, ...], tuple[int, ...]] | None]:
    """Does every pair of disjoint ceil(beta*n)-sets have a joining edge?

    Checking size exactly ceil(beta*n) suffices, since supersets inherit
    edges. Exhaustive below ``cutoff`` (or with ``mode="exhaustive"``,
    which errors above it); otherwise seeded random sampling, which can
    only refute: a True from sampling mode means no violation was found.

    Returns ``(verdict, witness_pair)`` with the violating pair on False.
    """
    if mode not in ("auto", "exhaustive", "sample"):
        raise PreconditionError(f"unknown mode {mode!r}")
    bf = Fraction(beta)
    n = g.n
    if not 0 < bf < 1:
        raise PreconditionError(f"need 0 < beta < 1, got {float(bf)}")
    s = -((-bf * n).numerator // (bf * n).denominator)  # ceil(beta * n)
    if 2 * s > n:
        return True, None
    exhaustive = mode == "exhaustive" or (mode == "auto" and n <= cutoff)
    if exhaustive:
        if n > cutoff:
            raise CutoffExceeded(
                f"exhaustive pair scan needs n <= {cutoff}, got {n}", n=n, cutoff=cutoff
            )
        a_mask, b_mask = kernels.beta_violation(n, g.adjacency_masks(), s)
        if a_mask == 0:
            return True, None
        return False, (tuple(sorted(set_of(a_mask))), tuple(sorted(set_of(b_mask))))
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        a_side = set(int(v) for v in rng.choice(n, size=s, replace=False))
        blocked = a_side | set(neighborhood(g, a_side))
        rest = [v for v in range(n) if v not in blocked]
        if len(rest) >= s:
            return False, (tuple(sorted(a_side)), tuple(rest[:s]))
    return True, None


# -- Menger path families ----------------------------------------------------


@dataclass(frozen=True)
class PathFamily:
    """A family of fully vertex-disjoint paths between two sets.

    Every path starts in ``endpoints[0]``, ends in ``endpoints[1]``, and has
    no internal vertex in either set; distinct paths share no vertex at all.
    """

    paths: tuple[Path, ...]
    endpoints: tuple[tuple[int, ...], tuple[int, ...]]

    @property
    def size(self) -> int:
        return len(self.paths)

    def check(self, g: Graph) -> None:
        """Assert every family invariant against ``g``; raises on violation."""
        src, dst = set(self.endpoints[0]), set(self.endpoints[1])
        seen: set[int] = set()
        for p in self.paths:
            p.check(g)
            if p[0] not in src or p[-1] not in dst:
                raise AssertionError(f"path {p} does not join the endpoint sets")
            for v in p[1:-1]:
                if v in src or v in dst:
                    raise AssertionError(f"path {p} has internal endpoint-set vertex {v}")
            if seen & set(p):
                raise AssertionError(f"path {p} shares vertices with another path")
            seen.update(p)


class _Dinic:
    """Unit-capacity max flow with deterministic arc order."""

    def __init__(self, nodes: int) -> None:
        self.nodes = nodes
        self.head: list[list[int]] = [[] for _ in range(nodes)]
        self.to: list[int] = []
        self.cap: list[int] = []

    def add_arc(self, u: int, v: int, cap: int) -> None:
        self.head[u].append(len(self.to))
        self.to.append(v)
        self.cap.append(cap)
        self.head[v].append(len(self.to))
        self.to.append(u)
        self.cap.append(0)

    def max_flow(self, s: int, t: int) -> int:
        total = 0
        while True:
            level = [-1] * self.nodes
            level[s] = 0
            queue = [s]
            for u in queue:
                for a in self.head[u]:
                    v = self.to[a]
                    if self.cap[a] > 0 and level[v] < 0:
                        level[v] = level[u] + 1
                        queue.append(v)
            if level[t] < 0:
                return total
            it = [0] * self.nodes

            def dfs(u: int, pushed: int) -> int:
                if u == t:
                    return pushed
                while it[u] < len(self.head[u]):
                    a = self.head[u][it[u]]
                    v = self.to[a]
                    if self.cap[a] > 0 and level[v] == level[u] + 1:
                        got = dfs(v, min(pushed, self.cap[a]))
                        if got > 0:
                            self.cap[a] -= got
                            self.cap[a ^ 1] += got
                            return got
                    it[u] += 1
                return 0

            while True:
                got = dfs(s, self.nodes)
                if got == 0:
                    break
                total += got


def disjoint_paths(g: Graph, a: Iterable[int], b: Iterable[int]) -> PathFamily:
    """Maximum family of vertex-disjoint paths from set ``a`` to set ``b``.

    Unit-capacity max flow on the vertex-split digraph (each vertex becomes
    an in/out arc of capacity 1), so the family size equals the minimum
    vertex cut separating the sets. Flow paths are truncated to their last
    ``a``-vertex and first ``b``-vertex after it, making every path
    internally disjoint from ``a`` union ``b``.
    """
    a = sorted(set(a))
    b = sorted(set(b))
    if not a or not b:
        raise PreconditionError("endpoint sets must be nonempty")
    if set(a) & set(b):
        raise PreconditionError("endpoint sets must be disjoint")
    n = g.n
    source, sink = 2 * n, 2 * n + 1
    net = _Dinic(2 * n + 2)
    for v in range(n):
        net.add_arc(2 * v, 2 * v + 1, 1)
    for u in range(n):
        for w in g.neighbors(u):
            net.add_arc(2 * u + 1, 2 * w, 1)
    for v in a:
        net.add_arc(source, 2 * v, 1)
    for v in b:
        net.add_arc(2 * v + 1, sink, 1)
    net.max_flow(source, sink)

    a_set, b_set = set(a), set(b)
    paths: list[Path] = []
    for arc_start in net.head[source]:
        if arc_start % 2 != 0 or net.cap[arc_start] != 0:
            continue
        route = [net.to[arc_start] // 2]
        while route[-1] not in b_set:
            v_out = 2 * route[-1] + 1
            nxt = None
            for arc in net.head[v_out]:
                if arc % 2 == 0 and net.cap[arc] == 0 and net.to[arc] != sink:
                    nxt = net.to[arc] // 2
                    break
            if nxt is None:
                raise AssertionError("flow decomposition lost its way")
            route.append(nxt)
        last_a = max(i for i, v in enumerate(route) if v in a_set)
        route = route[last_a:]
        first_b = min(i for i, v in enumerate(route) if v in b_set)
        paths.append(Path(route[: first_b + 1]))
    family = PathFamily(paths=tuple(paths), endpoints=(tuple(a), tuple(b)))
    family.check(g)
    return family


# -- long DFS paths ----------------------------------------------------------


def long_path_from(g: Graph, v: int, k: int | None = None, ell: int | None = None) -> Path:
    """Deepest DFS active path from ``v``, optionally truncated to ``ell``.

    The active (root-to-current) path of a DFS separates explored from
    unexplored territory, which is what turns expansion into depth: in a
    (k, alpha)-expander every start vertex reaches depth
    ceil(alpha * floor(k)). Pass ``k`` to insist v's component has at least
    k vertices (component-too-small otherwise) and ``ell`` to demand that
    depth (path-shortfall carries the deepest path found if the demand
    fails; longer paths are truncated to exactly ``ell``).
    """
    comp = next(c for c in components(g) if v in c)
    if k is not None and len(comp) < k:
        raise ComponentTooSmall(
            f"component of {v} has {len(comp)} < k = {k} vertices",
            v=v,
            size=len(comp),
            k=k,
        )
    visited = {v}
    stack: list[tuple[int, list[int]]] = [(v, list(g.neighbors(v)))]
    best = [v]
    while stack:
        node, pending = stack[-1]
        advanced = False
        while pending:
            w = pending.pop(0)
            if w not in visited:
                visited.add(w)
                stack.append((w, list(g.neighbors(w))))
                if len(stack) > len(best):
                    best = [u for u, _ in stack]
                advanced = True
                break
        if not advanced:
            stack.pop()
    if ell is not None:
        if len(best) - 1 < ell:
            raise PathShortfall(tuple(best), ell)
        best = best[: ell + 1]
    return Path(best)


# -- expansion-to-diameter arithmetic ----------------------------------------


def ceil_log_ratio(base: Fraction, x: Fraction) -> int:
    """Smallest integer j >= 0 with base**j >= x, i.e. ceil(log_base(x)).

    Exact integer arithmetic, no floating-point logs.
    """
    if base <= 1:
        raise PreconditionError(f"need base > 1, got {float(base)}")
    j = 0
    power = Fraction(1)
    while power < x:
        power *= base
        j += 1
    return j


def diameter_bound(n: int, k: int, alpha: float | Fraction) -> int:
    """Diameter bound (ceil(n/k) - 1) * (2 ceil(log k / log(1+alpha)) + 1).

    Every connected (k, alpha)-expander has diameter strictly below this.
    """
    af = Fraction(alpha)
    if af <= 0:
        raise PreconditionError("need alpha > 0 for a finite bound")
    if k < 1:
        raise PreconditionError(f"need k >= 1, got {k}")
    hops = ceil_log_ratio(1 + af, Fraction(k))
    return (-(-n // k) - 1) * (2 * hops + 1)
