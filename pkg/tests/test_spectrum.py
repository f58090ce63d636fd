import pytest
from hypothesis import given, settings

from cyclespan.errors import InsufficientData, PreconditionError
from cyclespan.generators import (
    binomial_random,
    complete,
    complete_bipartite,
    cycle_graph,
    path_graph,
    petersen,
    random_regular,
)
from cyclespan.graph import Graph, subdivide, validate_cycle
from cyclespan.spectrum import cycle_spectrum, has_cycle_length, max_gap
from helpers import oracle_cycle_lengths, small_graphs

# Frozen expected spectra, each verified against the exhaustive
# path-extension oracle in helpers.py before being written down here.
FROZEN = [
    (complete(4), (3, 4)),
    (complete_bipartite(2, 3), (4,)),
    (complete_bipartite(3, 3), (4, 6)),
    (petersen(), (5, 6, 8, 9)),
    (cycle_graph(7), (7,)),
    (path_graph(6), ()),
    (complete(6), (3, 4, 5, 6)),
]


@pytest.mark.parametrize("g,expected", FROZEN, ids=lambda x: str(x) if isinstance(x, tuple) else f"n{x.n}m{x.m}")
def test_frozen_spectra(g: Graph, expected: tuple[int, ...]) -> None:
    s = cycle_spectrum(g)
    assert s.lengths == expected
    assert s.complete
    assert set(oracle_cycle_lengths(g)) == set(expected)


def test_witnesses_validate_and_match_lengths() -> None:
    g = petersen()
    s = cycle_spectrum(g, witnesses=True)
    assert sorted(s.witnesses) == list(s.lengths)
    for ell, cert in s.witnesses.items():
        assert cert.length == ell
        validate_cycle(g, cert.vertices)


@given(small_graphs(max_n=10))
@settings(max_examples=60, deadline=None)
def test_spectrum_matches_oracle(g: Graph) -> None:
    s = cycle_spectrum(g)
    assert s.complete
    assert set(s.lengths) == oracle_cycle_lengths(g)


@given(small_graphs(max_n=9))
@settings(max_examples=30, deadline=None)
def test_has_cycle_length_agrees_with_spectrum(g: Graph) -> None:
    s = cycle_spectrum(g)
    for ell in range(3, g.n + 1):
        cert = has_cycle_length(g, ell)
        assert (cert is not None) == (ell in s)
        if cert is not None:
            assert cert.length == ell
            validate_cycle(g, cert.vertices)


def test_budget_exhaustion_reports_incomplete() -> None:
    g = complete(12)
    s = cycle_spectrum(g, budget=10)
    assert not s.complete
    # the enumeration and each witness search are capped separately
    assert s.budget_used <= 10 * (len(s.lengths) + 2)
    # K12 realizes every length in 3..12, so whatever was found is genuine
    assert all(3 <= ell <= 12 for ell in s.lengths)


def test_girth_and_circumference() -> None:
    s = cycle_spectrum(petersen())
    assert s.girth == 5 and s.circumference == 9
    empty = cycle_spectrum(path_graph(4))
    assert empty.girth is None and empty.circumference is None


def test_max_gap_on_petersen() -> None:
    s = cycle_spectrum(petersen())
    assert max_gap(s, 5, 9) == 2  # 6 -> 8
    assert max_gap(s, 5, 6) == 1


def test_max_gap_preconditions() -> None:
    s = cycle_spectrum(cycle_graph(6))
    with pytest.raises(InsufficientData):
        max_gap(s, 3, 10)
    incomplete = cycle_spectrum(complete(12), budget=10)
    with pytest.raises(PreconditionError):
        max_gap(incomplete, 3, 12)


@pytest.mark.parametrize("m", [1, 2, 3])
@pytest.mark.parametrize("seed", [1, 2, 3])
def test_subdivision_multiplies_the_spectrum(m: int, seed: int) -> None:
    g = random_regular(12, 3, seed)
    base = cycle_spectrum(g)
    sub = cycle_spectrum(subdivide(g, m))
    assert sub.complete and base.complete
    assert sub.lengths == tuple((m + 1) * ell for ell in base.lengths)


def test_spectrum_to_json_shape() -> None:
    s = cycle_spectrum(complete_bipartite(2, 3))
    out = s.to_json()
    assert out["lengths"] == [4] and out["complete"] is True
    assert "witnesses" in out
    assert "witnesses" not in s.to_json(include_witnesses=False)


def test_spectrum_deterministic_across_runs() -> None:
    g = binomial_random(14, 0.4, 3)
    a = cycle_spectrum(g, witnesses=True)
    b = cycle_spectrum(g, witnesses=True)
    assert a.lengths == b.lengths
    assert {k: v.vertices for k, v in a.witnesses.items()} == {
        k: v.vertices for k, v in b.witnesses.items()
    }
