import math
from fractions import Fraction

import pytest

from cyclespan.errors import (
    BetaRefuted,
    CyclespanError,
    NoClosingEdge,
    PreconditionError,
    TargetOutOfRange,
)
from cyclespan.expansion import is_beta_graph
from cyclespan.generators import binomial_random, complete, path_graph
from cyclespan.graph import Graph, neighborhood, validate_cycle
from cyclespan.thm3 import (
    Thm3Params,
    TreeShape,
    double_broom,
    embed_tree,
    haxell_conditions,
    run_thm3,
)


def _twin_cliques(half: int) -> Graph:
    """Two disjoint cliques: the canonical non-beta-graph."""
    edges = [(u, v) for u in range(half) for v in range(u + 1, half)]
    edges += [(u, v) for u in range(half, 2 * half) for v in range(u + 1, 2 * half)]
    return Graph(2 * half, edges)


# -- parameters -----------------------------------------------------------------


def test_derive_pins_the_shape_constants() -> None:
    params = Thm3Params.derive(Fraction(1, 10), 60, "broad")
    assert params.tree_arity == math.floor(1 / (4 * Fraction(1, 10))) == 2
    assert params.variant == "broad"
    assert params.tree_depth >= 1


def test_derive_binary_variant() -> None:
    params = Thm3Params.derive(Fraction(1, 10), 60, "binary")
    assert params.tree_arity == 2 or params.variant == "binary"
    lo, hi = params.structural_window(60)
    assert lo >= 3 and hi <= 60


def test_advisory_window_is_empty_at_desk_scale() -> None:
    # b1 log2(n) exceeds (1 - b2) n for n = 60 at beta = 1/10
    params = Thm3Params.derive(Fraction(1, 10), 60, "broad")
    lo, hi = params.ell_window(60)
    assert lo > hi


# -- double brooms ----------------------------------------------------------------


@pytest.mark.parametrize(
    "k,t,p,total",
    [(2, 1, 2, 7), (2, 2, 2, 15), (3, 1, 1, 8)],
)
def test_double_broom_vertex_counts(k: int, t: int, p: int, total: int) -> None:
    shape = double_broom(k, t, p)
    assert shape.vertex_count == total
    assert len(shape.leaves_a) == k**t
    assert len(shape.leaves_b) == k**t


def test_double_broom_leaf_to_leaf_distance() -> None:
    k, t, p = 2, 2, 3
    shape = double_broom(k, t, p)
    tree = shape.tree
    for a in shape.leaves_a:
        for b in shape.leaves_b:
            assert len(tree.tree_path(a, b)) - 1 == 2 * t + p


def test_tree_shape_from_tree_has_no_leaf_layers() -> None:
    shape = TreeShape.from_tree(double_broom(2, 1, 1).tree)
    assert shape.leaves_a == () and shape.leaves_b == ()


# -- haxell conditions -------------------------------------------------------------


def test_haxell_on_a_clique_holds() -> None:
    # K24: |N(U)| = 24 - |U| clears 2|U|+1 (sizes <= 3) and 2|U|+4 (sizes 4..6)
    ok, witness = haxell_conditions(complete(24), 2, Fraction(3), Fraction(4))
    assert ok and witness is None


def test_haxell_sizes_scan_catches_the_tight_size() -> None:
    # K16 fails first at |U| = 5: neighborhood 11 < 2*5 + 4
    ok, witness = haxell_conditions(complete(16), 2, Fraction(3), Fraction(4))
    assert not ok
    assert witness is not None and len(witness) == 5


def test_haxell_violation_carries_a_witness() -> None:
    g = _twin_cliques(10)
    ok, witness = haxell_conditions(g, 3, Fraction(3), Fraction(6), mode="exhaustive")
    assert not ok and witness is not None
    u = set(witness)
    bound = 3 * len(u) + (1 if len(u) <= 3 else Fraction(6))
    assert len(neighborhood(g, u)) < bound


# -- embedding ---------------------------------------------------------------------


def test_embed_tree_maps_edges_to_edges() -> None:
    g = binomial_random(60, 0.5, 7)
    shape = double_broom(2, 2, 5)
    emb = embed_tree(g, shape, seed=1)
    assert emb is not None
    assert len(set(emb.values())) == shape.vertex_count
    for v in shape.tree.order:
        if v != shape.tree.root:
            assert g.has_edge(emb[v], emb[shape.tree.parent[v]])


def test_embed_tree_rejects_hosts_smaller_than_the_tree() -> None:
    shape = double_broom(2, 2, 5)
    with pytest.raises(PreconditionError):
        embed_tree(complete(shape.vertex_count - 1), shape, seed=0)


def test_embed_tree_returns_none_when_attempts_fail() -> None:
    # a path host has max degree 2; the broom root needs 3 children
    shape = double_broom(2, 2, 5)
    assert embed_tree(path_graph(40), shape, seed=0, retries=4) is None


# -- the pipeline -------------------------------------------------------------------


@pytest.mark.parametrize("ell", [8, 12, 20, 30])
def test_run_thm3_hits_exact_lengths(ell: int) -> None:
    g = binomial_random(60, 0.5, 7)
    cert = run_thm3(g, Fraction(1, 10), ell, seed=1)
    assert cert.length == ell
    validate_cycle(g, cert.vertices)


def test_run_thm3_is_deterministic() -> None:
    g = binomial_random(60, 0.5, 7)
    a = run_thm3(g, Fraction(1, 10), 14, seed=3)
    b = run_thm3(g, Fraction(1, 10), 14, seed=3)
    assert a.vertices == b.vertices


def test_run_thm3_refutes_disconnected_hosts() -> None:
    g = _twin_cliques(30)
    ok, witness = is_beta_graph(g, Fraction(1, 10), mode="sample", trials=50, seed=0)
    assert not ok
    with pytest.raises((BetaRefuted, NoClosingEdge, CyclespanError)) as err:
        run_thm3(g, Fraction(1, 10), 20, seed=0)
    # the failure names the property violation, not a vague crash
    assert isinstance(err.value, CyclespanError)


def test_run_thm3_rejects_silly_targets() -> None:
    g = binomial_random(60, 0.5, 7)
    with pytest.raises(TargetOutOfRange):
        run_thm3(g, Fraction(1, 10), 2)
    with pytest.raises(TargetOutOfRange):
        run_thm3(g, Fraction(1, 10), 59)


def test_strict_mode_enforces_the_advisory_window() -> None:
    g = binomial_random(60, 0.5, 7)
    with pytest.raises(TargetOutOfRange):
        run_thm3(g, Fraction(1, 10), 12, strict=True)


def test_structural_sweep_is_clean() -> None:
    g = binomial_random(60, 0.5, 7)
    for ell in range(8, 39, 5):
        cert = run_thm3(g, Fraction(1, 10), ell, seed=1)
        assert cert.length == ell
