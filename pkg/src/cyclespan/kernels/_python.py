"""Pure-Python kernels over integer bitmasks and CSR adjacency.

This is the reference backend. The accelerated backend in ``_numba`` runs
the same algorithms with the same traversal order, so the two return
identical results (including tie-breaking witnesses); the parity tests rely
on that.

Subset-scan kernels take per-vertex neighborhood bitmasks (``masks[v]`` has
bit ``w`` set iff ``vw`` is an edge) and enumerate vertex subsets in
(size, lexicographic) order. Traversal kernels take CSR arrays
``(indptr, indices)`` with neighbor lists sorted ascending.
"""

from __future__ import annotations

from itertools import combinations


def _mask_of(combo) -> int:
    m = 0
    for v in combo:
        m |= 1 << v
    return m


def min_ratio_upto(n: int, masks, k: int) -> tuple[int, int, int]:
    """Minimize ``|N(U)| / |U|`` over nonempty subsets with ``|U| <= k``.

    Returns ``(nbr_count, size, witness_mask)`` for the first minimizer in
    (size, lexicographic) order; ``(-1, 0, 0)`` when ``n == 0`` or ``k < 1``.
    """
    best_nbr, best_size, best_mask = -1, 0, 0
    for s in range(1, min(k, n) + 1):
        for combo in combinations(range(n), s):
            umask = _mask_of(combo)
            nbr = 0
            for v in combo:
                nbr |= masks[v]
            cnt = (nbr & ~umask).bit_count()
            if best_size == 0 or cnt * best_size < best_nbr * s:
                best_nbr, best_size, best_mask = cnt, s, umask
    return best_nbr, best_size, best_mask


def min_nbr_at_size(n: int, masks, s: int) -> tuple[int, int]:
    """Minimize ``|N(U)|`` over subsets of size exactly ``s``.

    Returns ``(count, witness_mask)``; ``(-1, 0)`` when ``s`` is infeasible.
    """
    if s < 1 or s > n:
        return -1, 0
    best_cnt, best_mask = -1, 0
    for combo in combinations(range(n), s):
        umask = _mask_of(combo)
        nbr = 0
        for v in combo:
            nbr |= masks[v]
        cnt = (nbr & ~umask).bit_count()
        if best_cnt < 0 or cnt < best_cnt:
            best_cnt, best_mask = cnt, umask
    return best_cnt, best_mask


def first_violator(n: int, masks, k: int, num: int, den: int) -> int:
    """First subset (size-ascending, lexicographic) with ``|N(U)| < (num/den)|U|``.

    Returns its bitmask, or 0 when every subset with ``|U| <= k`` expands.
    """
    for s in range(1, min(k, n) + 1):
        for combo in combinations(range(n), s):
            umask = _mask_of(combo)
            nbr = 0
            for v in combo:
                nbr |= masks[v]
            if den * (nbr & ~umask).bit_count() < num * s:
                return umask
    return 0


def beta_violation(n: int, masks, s: int) -> tuple[int, int]:
    """First pair of disjoint ``s``-sets with no edge between them.

    Scans candidate sets A in lexicographic order; a violation exists iff
    some A has at least ``s`` vertices outside its closed neighborhood, in
    which case B is the ``s`` lowest-id such vertices. Returns
    ``(a_mask, b_mask)`` or ``(0, 0)``.
    """
    if s < 1 or 2 * s > n:
        return 0, 0
    full = (1 << n) - 1
    for combo in combinations(range(n), s):
        umask = _mask_of(combo)
        closed = umask
        for v in combo:
            closed |= masks[v]
        rest = full & ~closed
        if rest.bit_count() >= s:
            b = 0
            for _ in range(s):
                low = rest & -rest
                b |= low
                rest ^= low
            return umask, b
    return 0, 0


def spectrum_lengths(indptr, indices, n, budget, need_upto, found) -> tuple[int, int]:
    """Enumerate all simple-cycle lengths by anchored backtracking.

    For each anchor ``a`` (ascending), walks simple paths from ``a`` through
    vertices ``> a`` only; an edge back to ``a`` at depth ``d >= 2`` closes a
    cycle of length ``d + 1``. Each cycle is seen once per orientation; the
    orientation with ``path[1] < path[d]`` is counted. ``found[L]`` is set
    for each length found. Stops early once all lengths ``3..need_upto``
    are present (then nothing longer can exist either).

    Returns ``(complete, pushes)`` where ``complete`` is 1 unless the push
    budget ran out.
    """
    togo = 0
    for length in range(3, need_upto + 1):
        if not found[length]:
            togo += 1
    pushes = 0
    if togo == 0 or n < 3:
        return 1, 0
    path = [0] * (n + 1)
    ptr = [0] * (n + 1)
    in_path = [False] * n
    for a in range(n):
        path[0] = a
        ptr[0] = indptr[a]
        in_path[a] = True
        depth = 0
        while depth >= 0:
            v = path[depth]
            if ptr[depth] < indptr[v + 1]:
                w = indices[ptr[depth]]
                ptr[depth] += 1
                if w == a:
                    if depth >= 2 and path[1] < path[depth]:
                        length = depth + 1
                        if not found[length]:
                            found[length] = True
                            togo -= 1
                            if togo == 0:
                                for i in range(depth + 1):
                                    in_path[path[i]] = False
                                return 1, pushes
                elif w > a and not in_path[w]:
                    if pushes >= budget:
                        for i in range(depth + 1):
                            in_path[path[i]] = False
                        return 0, pushes
                    pushes += 1
                    depth += 1
                    path[depth] = w
                    ptr[depth] = indptr[w]
                    in_path[w] = True
            else:
                in_path[v] = False
                depth -= 1
        in_path[a] = False
    return 1, pushes


def find_cycle_at_anchor(indptr, indices, n, a, ell, dist, budget) -> tuple[int, list[int], int]:
    """Search for a simple cycle of length exactly ``ell`` anchored at ``a``.

    Walks simple paths from ``a`` through vertices ``> a``; ``dist[w]`` must
    hold the distance from ``w`` back to ``a`` inside ``{v >= a}`` (or a
    value > n when unreachable), used to prune branches that cannot close in
    the remaining steps.

    Returns ``(status, path, pushes)``: status 1 = found (path holds the
    cycle vertices), 0 = exhausted without finding, -1 = budget ran out.
    """
    path = [0] * (ell + 1)
    ptr = [0] * (ell + 1)
    in_path = [False] * n
    path[0] = a
    ptr[0] = indptr[a]
    in_path[a] = True
    depth = 0
    pushes = 0
    while depth >= 0:
        v = path[depth]
        if ptr[depth] < indptr[v + 1]:
            w = indices[ptr[depth]]
            ptr[depth] += 1
            if w == a:
                if depth + 1 == ell:
                    return 1, path[: depth + 1], pushes
            elif (
                w > a
                and not in_path[w]
                and depth + 2 <= ell
                and depth + 1 + dist[w] <= ell
            ):
                if pushes >= budget:
                    return -1, [], pushes
                pushes += 1
                depth += 1
                path[depth] = w
                ptr[depth] = indptr[w]
                in_path[w] = True
        else:
            in_path[v] = False
            depth -= 1
    return 0, [], pushes
