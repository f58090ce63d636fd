import math
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from cyclespan.errors import (
    ComponentTooSmall,
    CutoffExceeded,
    InvalidInput,
    PathShortfall,
    PreconditionError,
)
from cyclespan.expansion import (
    ceil_log_ratio,
    diameter_bound,
    disjoint_paths,
    exact_expansion,
    is_beta_graph,
    long_path_from,
    prune_interior,
    prune_to_expander,
    refute_expansion,
    spectral_alpha,
)
from cyclespan.generators import (
    binomial_random,
    complete,
    complete_bipartite,
    cycle_graph,
    path_graph,
    petersen,
    random_regular,
)
from cyclespan.graph import Graph, component_diameter, components, neighborhood
from helpers import connected_graphs, oracle_expansion, oracle_min_vertex_cut


def test_exact_expansion_of_k4_is_one() -> None:
    cert = exact_expansion(complete(4), 2)
    assert cert.kind == "exact"
    assert cert.value == Fraction(1)
    assert cert.k == 2
    assert len(cert.witness) <= 2


def test_exact_expansion_matches_oracle_on_petersen() -> None:
    cert = exact_expansion(petersen(), 5)
    assert cert.value == oracle_expansion(petersen(), 5)


@given(connected_graphs(max_n=8), st.integers(min_value=1, max_value=4))
@settings(max_examples=40, deadline=None)
def test_exact_expansion_matches_oracle(g: Graph, k: int) -> None:
    assume(k <= g.n)
    cert = exact_expansion(g, k)
    assert cert.value == oracle_expansion(g, k)
    # the witness attains the minimum
    u = set(cert.witness)
    assert Fraction(len(neighborhood(g, u)), len(u)) == cert.value


def test_exact_expansion_respects_cutoff() -> None:
    with pytest.raises(CutoffExceeded):
        exact_expansion(random_regular(30, 3, 1), 15, cutoff=24)


def test_spectral_alpha_frozen_values() -> None:
    k4 = spectral_alpha(complete(4))
    assert k4.kind == "spectral"
    assert k4.value == pytest.approx(1 / 3, abs=0)
    pet = spectral_alpha(petersen())
    assert pet.value == pytest.approx(1 / 6, abs=0)
    assert pet.lam == 2.0 and pet.d == 3


def test_spectral_alpha_rejects_irregular_and_disconnected() -> None:
    with pytest.raises(InvalidInput):
        spectral_alpha(path_graph(4))
    with pytest.raises(InvalidInput):
        spectral_alpha(Graph(4, [(0, 1), (2, 3)]))


@pytest.mark.parametrize("seed", range(1, 11))
def test_spectral_alpha_is_sound(seed: int) -> None:
    g = random_regular(14, 3, seed)
    if len(components(g)) != 1:
        pytest.skip("sampled graph is disconnected")
    spectral = spectral_alpha(g)
    exact = exact_expansion(g, math.ceil(g.n / 2))
    assert spectral.value <= float(exact.value) + 1e-9


def test_refute_expansion_finds_a_genuine_violator() -> None:
    g = path_graph(10)
    witness = refute_expansion(g, Fraction(9, 10), 5, trials=32, seed=0)
    assert witness is not None
    u = set(witness)
    assert len(u) <= 5
    assert len(neighborhood(g, u)) < Fraction(9, 10) * len(u)


def test_refute_expansion_gives_up_on_true_expanders() -> None:
    assert refute_expansion(complete(8), Fraction(1, 2), 4, trials=16, seed=1) is None


# -- pruning -------------------------------------------------------------------


def _assert_certified(g: Graph, survivors: tuple[int, ...], k: int, threshold: Fraction) -> None:
    h, _ = g.induced(survivors)
    cert = exact_expansion(h, min(k, h.n))
    assert cert.value >= threshold


def test_prune_to_expander_deletes_a_pendant_path() -> None:
    # K8 with a pendant path hanging off vertex 0
    edges = list(complete(8).edges) + [(0, 8), (8, 9), (9, 10)]
    g = Graph(11, edges)
    # the tail {8, 9, 10} has |N|/|U| = 1/3 < 1/2, so alpha = 1 dooms it
    survivors = prune_to_expander(g, [], 4, Fraction(1), force=True)
    assert set(survivors) == set(range(8))
    _assert_certified(g, survivors, 4, Fraction(1, 2))


def test_prune_to_expander_removes_tainted_seed() -> None:
    g = complete(10)
    survivors = prune_to_expander(g, [0, 1], 5, Fraction(1, 2), force=True)
    assert 0 not in survivors and 1 not in survivors
    _assert_certified(g, survivors, 5, Fraction(1, 4))


def test_prune_to_expander_checks_seed_size() -> None:
    with pytest.raises(PreconditionError):
        prune_to_expander(complete(10), range(5), 3, Fraction(1, 4))


def test_prune_interior_shrinks_to_survivors() -> None:
    g = complete(12)
    w = list(range(8))
    survivors = prune_interior(g, w, Fraction(1, 2), Fraction(1, 5), force=True)
    assert set(survivors) <= set(w)
    assert len(survivors) >= 4
    h, _ = g.induced(survivors)
    k_del = math.floor((Fraction(1, 2) - 2 * Fraction(1, 5)) * g.n)
    if k_del >= 1:
        _assert_certified(g, survivors, k_del, Fraction(1, 4))


def test_prune_interior_validates_eps() -> None:
    with pytest.raises(PreconditionError):
        prune_interior(complete(8), range(5), Fraction(1, 2), Fraction(1, 2))


# -- disjoint paths ------------------------------------------------------------


def test_disjoint_paths_on_complete_bipartite() -> None:
    g = complete_bipartite(3, 3)
    family = disjoint_paths(g, {0, 1, 2}, {3, 4, 5})
    assert family.size == 3
    family.check(g)


def test_disjoint_paths_requires_disjoint_nonempty_sets() -> None:
    g = complete(4)
    with pytest.raises(PreconditionError):
        disjoint_paths(g, set(), {1})
    with pytest.raises(PreconditionError):
        disjoint_paths(g, {0, 1}, {1, 2})


@given(connected_graphs(max_n=9), st.data())
@settings(max_examples=40, deadline=None)
def test_disjoint_paths_attain_the_menger_bound(g: Graph, data: st.DataObject) -> None:
    assume(g.n >= 2)
    vertices = list(range(g.n))
    a = set(data.draw(st.lists(st.sampled_from(vertices), min_size=1, max_size=3, unique=True)))
    rest = [v for v in vertices if v not in a]
    assume(rest)
    b = set(data.draw(st.lists(st.sampled_from(rest), min_size=1, max_size=3, unique=True)))
    family = disjoint_paths(g, a, b)
    family.check(g)
    assert family.size == oracle_min_vertex_cut(g, a, b)


# -- long paths and diameter ---------------------------------------------------


def test_long_path_from_reaches_requested_depth() -> None:
    g = petersen()
    for v in range(g.n):
        p = long_path_from(g, v, k=10, ell=5)
        assert p.length == 5 and p[0] == v
        p.check(g)


def test_long_path_shortfall_carries_the_best_path() -> None:
    g = path_graph(4)
    with pytest.raises(PathShortfall) as err:
        long_path_from(g, 3, ell=9)
    # payload carries the deepest path found
    assert err.value.achieved == (3, 2, 1, 0)
    assert err.value.payload["required"] == 9


def test_long_path_component_too_small() -> None:
    g = Graph(5, [(0, 1), (2, 3), (3, 4)])
    with pytest.raises(ComponentTooSmall):
        long_path_from(g, 0, k=3)


def test_ceil_log_ratio_exact() -> None:
    assert ceil_log_ratio(Fraction(2), Fraction(8)) == 3
    assert ceil_log_ratio(Fraction(2), Fraction(9)) == 4
    assert ceil_log_ratio(Fraction(3, 2), Fraction(1)) == 0
    with pytest.raises(PreconditionError):
        ceil_log_ratio(Fraction(1), Fraction(4))


@pytest.mark.parametrize(
    "g,k",
    [(petersen(), 5), (complete(8), 4), (cycle_graph(9), 2)],
    ids=("petersen", "k8", "c9"),
)
def test_diameter_stays_below_the_bound(g: Graph, k: int) -> None:
    cert = exact_expansion(g, k)
    assert cert.value > 0
    diam = max(component_diameter(g, v) for v in range(g.n))
    assert diam < diameter_bound(g.n, k, cert.value)


# -- beta graphs ---------------------------------------------------------------


def test_is_beta_graph_exhaustive_true() -> None:
    ok, witness = is_beta_graph(complete(12), Fraction(1, 4), mode="exhaustive")
    assert ok and witness is None


def test_is_beta_graph_finds_a_witness_pair() -> None:
    g = path_graph(12)
    ok, witness = is_beta_graph(g, Fraction(1, 4), mode="exhaustive")
    assert not ok and witness is not None
    a, b = witness
    s = math.ceil(Fraction(1, 4) * g.n)
    assert len(a) == s and len(b) == s
    assert not (set(a) & set(b))
    assert all(not g.has_edge(u, v) for u in a for v in b)


def test_is_beta_graph_sample_mode_is_one_sided() -> None:
    g = binomial_random(40, 0.5, 3)
    ok, witness = is_beta_graph(g, Fraction(1, 5), mode="sample", trials=50, seed=0)
    if not ok:
        a, b = witness
        assert all(not g.has_edge(u, v) for u in a for v in b)
