"""JIT-compiled kernels; algorithm-for-algorithm mirror of ``_python``.

Subset masks are int64 (the brute-force cutoff keeps n <= 24 well inside
the positive range), CSR arrays are int32. Traversal order matches the
reference backend exactly so both produce identical witnesses.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def _popcount(x: np.int64) -> np.int64:
    c = 0
    while x:
        x &= x - 1
        c += 1
    return c


@njit(cache=True)
def min_ratio_upto(n, masks, k):
    best_nbr = np.int64(-1)
    best_size = np.int64(0)
    best_mask = np.int64(0)
    top = min(k, n)
    c = np.empty(top + 1, np.int64)
    for s in range(1, top + 1):
        for i in range(s):
            c[i] = i
        while True:
            umask = np.int64(0)
            nbr = np.int64(0)
            for i in range(s):
                umask |= np.int64(1) << c[i]
                nbr |= masks[c[i]]
            cnt = _popcount(nbr & ~umask)
            if best_size == 0 or cnt * best_size < best_nbr * s:
                best_nbr, best_size, best_mask = cnt, np.int64(s), umask
            i = s - 1
            while i >= 0 and c[i] == n - s + i:
                i -= 1
            if i < 0:
                break
            c[i] += 1
            for j in range(i + 1, s):
                c[j] = c[j - 1] + 1
    return best_nbr, best_size, best_mask


@njit(cache=True)
def min_nbr_at_size(n, masks, s):
    if s < 1 or s > n:
        return np.int64(-1), np.int64(0)
    best_cnt = np.int64(-1)
    best_mask = np.int64(0)
    c = np.empty(s, np.int64)
    for i in range(s):
        c[i] = i
    while True:
        umask = np.int64(0)
        nbr = np.int64(0)
        for i in range(s):
            umask |= np.int64(1) << c[i]
            nbr |= masks[c[i]]
        cnt = _popcount(nbr & ~umask)
        if best_cnt < 0 or cnt < best_cnt:
            best_cnt, best_mask = cnt, umask
        i = s - 1
        while i >= 0 and c[i] == n - s + i:
            i -= 1
        if i < 0:
            break
        c[i] += 1
        for j in range(i + 1, s):
            c[j] = c[j - 1] + 1
    return best_cnt, best_mask


@njit(cache=True)
def first_violator(n, masks, k, num, den):
    top = min(k, n)
    c = np.empty(top + 1, np.int64)
    for s in range(1, top + 1):
        for i in range(s):
            c[i] = i
        while True:
            umask = np.int64(0)
            nbr = np.int64(0)
            for i in range(s):
                umask |= np.int64(1) << c[i]
                nbr |= masks[c[i]]
            if den * _popcount(nbr & ~umask) < num * s:
                return umask
            i = s - 1
            while i >= 0 and c[i] == n - s + i:
                i -= 1
            if i < 0:
                break
            c[i] += 1
            for j in range(i + 1, s):
                c[j] = c[j - 1] + 1
    return np.int64(0)


@njit(cache=True)
def beta_violation(n, masks, s):
    if s < 1 or 2 * s > n:
        return np.int64(0), np.int64(0)
    full = (np.int64(1) << n) - 1
    c = np.empty(s, np.int64)
    for i in range(s):
        c[i] = i
    while True:
        umask = np.int64(0)
        closed = np.int64(0)
        for i in range(s):
            umask |= np.int64(1) << c[i]
            closed |= masks[c[i]]
        rest = full & ~(closed | umask)
        if _popcount(rest) >= s:
            b = np.int64(0)
            for _ in range(s):
                low = rest & -rest
                b |= low
                rest ^= low
            return umask, b
        i = s - 1
        while i >= 0 and c[i] == n - s + i:
            i -= 1
        if i < 0:
            break
        c[i] += 1
        for j in range(i + 1, s):
            c[j] = c[j - 1] + 1
    return np.int64(0), np.int64(0)


@njit(cache=True)
def spectrum_lengths(indptr, indices, n, budget, need_upto, found):
    togo = 0
    for length in range(3, need_upto + 1):
        if not found[length]:
            togo += 1
    pushes = np.int64(0)
    if togo == 0 or n < 3:
        return np.int64(1), pushes
    path = np.empty(n + 1, np.int64)
    ptr = np.empty(n + 1, np.int64)
    in_path = np.zeros(n, np.bool_)
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
                                return np.int64(1), pushes
                elif w > a and not in_path[w]:
                    if pushes >= budget:
                        for i in range(depth + 1):
                            in_path[path[i]] = False
                        return np.int64(0), pushes
                    pushes += 1
                    depth += 1
                    path[depth] = w
                    ptr[depth] = indptr[w]
                    in_path[w] = True
            else:
                in_path[v] = False
                depth -= 1
        in_path[a] = False
    return np.int64(1), pushes


@njit(cache=True)
def find_cycle_at_anchor(indptr, indices, n, a, ell, dist, budget):
    path = np.empty(ell + 1, np.int64)
    ptr = np.empty(ell + 1, np.int64)
    in_path = np.zeros(n, np.bool_)
    path[0] = a
    ptr[0] = indptr[a]
    in_path[a] = True
    depth = 0
    pushes = np.int64(0)
    while depth >= 0:
        v = path[depth]
        if ptr[depth] < indptr[v + 1]:
            w = indices[ptr[depth]]
            ptr[depth] += 1
            if w == a:
                if depth + 1 == ell:
                    out = np.empty(depth + 1, np.int64)
                    for i in range(depth + 1):
                        out[i] = path[i]
                    return np.int64(1), out, pushes
            elif (
                w > a
                and not in_path[w]
                and depth + 2 <= ell
                and depth + 1 + dist[w] <= ell
            ):
                if pushes >= budget:
                    return np.int64(-1), np.empty(0, np.int64), pushes
                pushes += 1
                depth += 1
                path[depth] = w
                ptr[depth] = indptr[w]
                in_path[w] = True
        else:
            in_path[v] = False
            depth -= 1
    return np.int64(0), np.empty(0, np.int64), pushes
