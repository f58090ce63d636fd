"""Backend selection for the subset-scan and cycle-search kernels.

Two interchangeable backends implement the same six kernels: ``_numba``
(JIT-compiled) and ``_python`` (pure Python, no compilation). The
``CYCLESPAN_BACKEND`` environment variable picks one at import time:

- ``auto`` (default): use the JIT backend, fall back to pure Python if
  numba is unavailable.
- ``numba``: require the JIT backend; import errors propagate.
- ``python``: use the pure-Python backend.

Both backends enumerate in the same order and break ties the same way, so
the choice never changes a result, only the speed.

The wrappers here normalize containers (bitmask lists vs int64 arrays) so
callers are backend-agnostic: pass any int sequence for ``masks``, int32
CSR arrays for traversals, and a numpy bool array for ``found``.
"""

from __future__ import annotations

import os

import numpy as np

_requested = os.environ.get("CYCLESPAN_BACKEND", "auto").strip().lower()
if _requested not in ("auto", "numba", "python"):
    raise RuntimeError(
        f"CYCLESPAN_BACKEND must be 'auto', 'numba', or 'python', got {_requested!r}"
    )

if _requested == "python":
    from . import _python as _impl

    _BACKEND = "python"
else:
    try:
        from . import _numba as _impl

        _BACKEND = "numba"
    except ImportError:
        if _requested == "numba":
            raise
        from . import _python as _impl

        _BACKEND = "python"


def active_backend() -> str:
    """Name of the backend in use, ``"numba"`` or ``"python"``."""
    return _BACKEND


def _masks_arg(masks):
    if _BACKEND == "numba":
        return np.asarray(masks, dtype=np.int64)
    return [int(m) for m in masks]


def min_ratio_upto(n: int, masks, k: int) -> tuple[int, int, int]:
    """Minimize |N(U)|/|U| over nonempty subsets with |U| <= k.

    Returns ``(nbr_count, size, witness_mask)``, or ``(-1, 0, 0)`` when
    there is no subset to scan.
    """
    cnt, size, mask = _impl.min_ratio_upto(n, _masks_arg(masks), k)
    return int(cnt), int(size), int(mask)


def min_nbr_at_size(n: int, masks, s: int) -> tuple[int, int]:
    """Minimize |N(U)| over subsets of size exactly ``s``.

    Returns ``(count, witness_mask)``, or ``(-1, 0)`` when infeasible.
    """
    cnt, mask = _impl.min_nbr_at_size(n, _masks_arg(masks), s)
    return int(cnt), int(mask)


def first_violator(n: int, masks, k: int, num: int, den: int) -> int:
    """Bitmask of the first subset with |N(U)| < (num/den)|U|, else 0."""
    return int(_impl.first_violator(n, _masks_arg(masks), k, num, den))


def beta_violation(n: int, masks, s: int) -> tuple[int, int]:
    """First pair of disjoint ``s``-sets with no edge between them.

    Returns ``(a_mask, b_mask)``, or ``(0, 0)`` when none exists.
    """
    a, b = _impl.beta_violation(n, _masks_arg(masks), s)
    return int(a), int(b)


def spectrum_lengths(indptr, indices, n, budget, need_upto, found) -> tuple[bool, int]:
    """Mark every simple-cycle length in ``found`` (a numpy bool array).

    Returns ``(complete, pushes)``; ``complete`` is False when the push
    budget ran out before the enumeration finished.
    """
    complete, pushes = _impl.spectrum_lengths(
        indptr, indices, n, int(budget), int(need_upto), found
    )
    return bool(complete), int(pushes)


def find_cycle_at_anchor(
    indptr, indices, n, a, ell, dist, budget
) -> tuple[int, list[int], int]:
    """Search for a length-``ell`` cycle whose minimum vertex is ``a``.

    ``dist[w]`` must hold the BFS distance from ``w`` back to ``a`` within
    ``{v >= a}`` (any value > n when unreachable). Returns
    ``(status, path, pushes)`` with status 1 found, 0 exhausted, -1 budget.
    """
    status, path, pushes = _impl.find_cycle_at_anchor(
        indptr, indices, n, int(a), int(ell), dist, int(budget)
    )
    return int(status), [int(v) for v in path], int(pushes)


def warmup() -> None:
    """Run every kernel once on a triangle to trigger JIT compilation."""
    masks = [0b110, 0b101, 0b011]
    indptr = np.array([0, 2, 4, 6], dtype=np.int32)
    indices = np.array([1, 2, 0, 2, 0, 1], dtype=np.int32)
    dist = np.array([0, 1, 1], dtype=np.int64)
    min_ratio_upto(3, masks, 2)
    min_nbr_at_size(3, masks, 1)
    first_violator(3, masks, 2, 1, 1)
    beta_violation(3, masks, 1)
    spectrum_lengths(indptr, indices, 3, 10**6, 3, np.zeros(4, dtype=bool))
    find_cycle_at_anchor(indptr, indices, 3, 0, 3, dist, 10**6)
