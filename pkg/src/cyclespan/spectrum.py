"""Ground-truth cycle-length oracle by exhaustive anchored backtracking.

:func:`cycle_spectrum` computes the set of simple-cycle lengths; it is the
independent check every pipeline certificate is measured against, so it
shares no code with the pipelines. :func:`has_cycle_length` is a second,
separately implemented searcher (per-length, distance-pruned) used to
cross-validate the first.

Both walk the same anchored search space: a cycle is enumerated once, from
its minimum-id vertex, visiting only larger ids in between. Budgets count
node expansions; results are either exhaustive or explicitly flagged, never
silently truncated.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Any, Mapping

import numpy as np

from .errors import BudgetExhausted, InsufficientData, PreconditionError
from .graph import CycleCertificate, Graph, components, validate_cycle
from . import kernels

DEFAULT_BUDGET = 10**8


@dataclass(frozen=True)
class Spectrum:
    """The set of simple-cycle lengths found in a graph.

    ``complete`` means the enumeration was exhaustive, so ``lengths`` is the
    whole cycle spectrum; otherwise ``lengths`` is a subset of it. Each
    recorded length carries a validated witness cycle unless the caller
    disabled witness collection.
    """

    lengths: tuple[int, ...]
    complete: bool
    budget_used: int
    witnesses: Mapping[int, CycleCertificate] = field(default_factory=dict)

    def __contains__(self, ell: int) -> bool:
        return ell in self.lengths

    @property
    def girth(self) -> int | None:
        """Smallest recorded length; equals the girth when complete."""
        return self.lengths[0] if self.lengths else None

    @property
    def circumference(self) -> int | None:
        """Largest recorded length; equals the circumference when complete."""
        return self.lengths[-1] if self.lengths else None

    def to_json(self, include_witnesses: bool = True) -> dict[str, Any]:
        out: dict[str, Any] = {
            "lengths": list(self.lengths),
            "complete": self.complete,
            "budget_used": self.budget_used,
        }
        if include_witnesses and self.witnesses:
            out["witnesses"] = {
                str(ell): list(cert.vertices) for ell, cert in sorted(self.witnesses.items())
            }
        return out


def _dist_within(g: Graph, a: int) -> np.ndarray:
    """BFS distance from ``a`` using only vertices >= ``a`` (n+1 = unreachable)."""
    n = g.n
    dist = np.full(n, n + 1, dtype=np.int64)
    dist[a] = 0
    queue = deque([a])
    while queue:
        u = queue.popleft()
        du = dist[u] + 1
        for w in g.neighbors(u):
            if w >= a and dist[w] > du:
                dist[w] = du
                queue.append(w)
    return dist


def _targeted_search(g: Graph, ell: int, budget: int) -> tuple[int, list[int], int]:
    """Search all anchors for a length-``ell`` cycle.

    Returns ``(status, path, used)`` with status 1 found, 0 proven absent,
    -1 budget exhausted.
    """
    indptr, indices = g.csr()
    used = 0
    for a in range(g.n - 2):
        dist = _dist_within(g, a)
        if dist[a] != 0:
            raise AssertionError("distance table corrupt")
        status, path, pushes = kernels.find_cycle_at_anchor(
            indptr, indices, g.n, a, ell, dist, budget - used
        )
        used += pushes
        if status == 1:
            return 1, path, used
        if status == -1:
            return -1, [], used
    return 0, [], used


def cycle_spectrum(g: Graph, budget: int = DEFAULT_BUDGET, witnesses: bool = True) -> Spectrum:
    """Enumerate every simple-cycle length in ``g``.

    ``budget`` caps node expansions in the enumeration, and separately caps
    each per-length witness search. If the enumeration runs out, the result
    is flagged ``complete=False`` and holds only the lengths found so far
    (each one genuine). A length whose witness search runs out of budget is
    dropped and the result flagged incomplete, so a complete result always
    honors the one-witness-per-length invariant.
    """
    n = g.n
    if n < 3:
        return Spectrum(lengths=(), complete=True, budget_used=0)
    need_upto = max(len(c) for c in components(g))
    found = np.zeros(n + 1, dtype=bool)
    indptr, indices = g.csr()
    complete, used = kernels.spectrum_lengths(indptr, indices, n, budget, need_upto, found)
    lengths = [ell for ell in range(3, n + 1) if found[ell]]
    certs: dict[int, CycleCertificate] = {}
    if witnesses:
        kept = []
        for ell in lengths:
            status, path, w_used = _targeted_search(g, ell, budget)
            used += w_used
            if status == 1:
                certs[ell] = validate_cycle(g, path)
                kept.append(ell)
            else:
                # The length is real (the enumeration closed such a cycle)
                # but the witness search ran dry; drop it rather than ship
                # an uncertified length.
                complete = False
        lengths = kept
    return Spectrum(
        lengths=tuple(lengths),
        complete=complete,
        budget_used=used,
        witnesses=certs,
    )


def has_cycle_length(g: Graph, ell: int, budget: int = DEFAULT_BUDGET) -> CycleCertificate | None:
    """Decide whether ``g`` contains a simple cycle of length exactly ``ell``.

    Independent of :func:`cycle_spectrum`: anchors are searched with
    distance-to-anchor pruning against a BFS table, so infeasible branches
    die early. Returns a validated certificate, or None when the search
    space was exhausted (the length is proven absent). Raises
    :class:`BudgetExhausted` when the budget ran out first, so an unknown
    outcome can never masquerade as proven absence.
    """
    if ell < 3:
        raise PreconditionError(f"cycle length must be at least 3, got {ell}")
    if ell > g.n:
        return None
    status, path, used = _targeted_search(g, ell, budget)
    if status == 1:
        return validate_cycle(g, path)
    if status == -1:
        raise BudgetExhausted(
            f"length-{ell} search exhausted its budget", ell=ell, budget=budget, used=used
        )
    return None


def max_gap(s: Spectrum, lo: int, hi: int) -> int:
    """Largest difference between consecutive spectrum elements in [lo, hi].

    Requires a complete spectrum (otherwise gaps could be artifacts of the
    truncated search) and at least two elements in range.
    """
    if not s.complete:
        raise PreconditionError("max_gap needs a complete spectrum")
    inside = [ell for ell in s.lengths if lo <= ell <= hi]
    if len(inside) < 2:
        raise InsufficientData(
            f"need at least 2 spectrum elements in [{lo}, {hi}], found {len(inside)}",
            count=len(inside),
            lo=lo,
            hi=hi,
        )
    return max(b - a for a, b in zip(inside, inside[1:]))
