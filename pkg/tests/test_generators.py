import math
from fractions import Fraction

import pytest

from cyclespan.errors import GenerationFailure, PreconditionError
from cyclespan.generators import (
    binomial_random,
    clique_plus_isolated,
    complete,
    complete_bipartite,
    cycle_graph,
    path_graph,
    petersen,
    random_regular,
)
from cyclespan.graph import components


def test_complete_sizes() -> None:
    g = complete(6)
    assert g.n == 6 and g.m == 15
    assert all(g.degree(v) == 5 for v in range(6))


def test_complete_bipartite_has_no_inner_edges() -> None:
    g = complete_bipartite(2, 3)
    assert g.n == 5 and g.m == 6
    assert not g.has_edge(0, 1) and not g.has_edge(2, 3)
    assert g.has_edge(0, 2) and g.has_edge(1, 4)


def test_cycle_and_path_shapes() -> None:
    c = cycle_graph(5)
    assert c.m == 5 and all(c.degree(v) == 2 for v in range(5))
    p = path_graph(5)
    assert p.m == 4 and p.degree(0) == 1 and p.degree(2) == 2


def test_petersen_is_the_petersen_graph() -> None:
    g = petersen()
    assert g.n == 10 and g.m == 15
    assert all(g.degree(v) == 3 for v in range(10))
    # outer 5-cycle, spokes, inner pentagram
    assert g.has_edge(0, 1) and g.has_edge(4, 0)
    assert g.has_edge(0, 5)
    assert g.has_edge(5, 7) and not g.has_edge(5, 6)


@pytest.mark.parametrize("seed", range(1, 6))
def test_random_regular_is_regular_and_deterministic(seed: int) -> None:
    g = random_regular(12, 3, seed)
    assert g.n == 12
    assert all(g.degree(v) == 3 for v in range(12))
    again = random_regular(12, 3, seed)
    assert again.edges == g.edges


def test_random_regular_varies_with_seed() -> None:
    assert random_regular(12, 3, 1).edges != random_regular(12, 3, 2).edges


def test_random_regular_rejects_odd_degree_sum() -> None:
    with pytest.raises(PreconditionError):
        random_regular(5, 3, 0)


def test_random_regular_infeasible_raises() -> None:
    with pytest.raises((PreconditionError, GenerationFailure)):
        random_regular(4, 5, 0)


def test_binomial_random_deterministic_and_extreme_p() -> None:
    g = binomial_random(20, 0.3, 9)
    assert g.edges == binomial_random(20, 0.3, 9).edges
    assert binomial_random(10, 0, 1).m == 0
    assert binomial_random(10, 1, 1).m == 45


def test_binomial_random_fraction_probability() -> None:
    a = binomial_random(15, Fraction(1, 2), 4)
    b = binomial_random(15, 0.5, 4)
    assert a.edges == b.edges


def test_clique_plus_isolated_structure() -> None:
    g = clique_plus_isolated(24, Fraction(1, 6))
    s = math.floor(Fraction(1, 6) * 24) - 1  # isolated count per the family
    clique = g.n - s
    comps = components(g)
    sizes = sorted(len(c) for c in comps)
    assert sizes == [1] * s + [clique]
    assert g.m == clique * (clique - 1) // 2
