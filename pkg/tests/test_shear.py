from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from surfdiss import (
    DoesNotShear,
    NotStandard,
    co_elementary_laminate,
    elementary_laminate,
    index_vector,
    partial_triangulation,
    shear_vector,
    shears,
)
from surfdiss.dissections import standardness_verdicts
from surfdiss.enumeration import maximal_compatible_sets, tagged_arcs
from surfdiss.shear import good_completion, per_crossing, shear_vector_via_completion

NAMES = ["pentagon", "hexagon", "punctured-triangle", "punctured-square", "twice-punctured-digon", "annulus-2-1"]


@pytest.fixture(scope="module")
def pools(surfaces):
    out = {}
    for name in NAMES:
        S = surfaces[name]
        arcs = tagged_arcs(S, 3)
        out[name] = (S, arcs, maximal_compatible_sets(arcs, size=S.n_arcs))
    return out


@pytest.mark.parametrize("name", NAMES)
def test_elementary_laminates_are_dual_on_a_triangulation(pools, name):
    S, _, triangulations = pools[name]
    for T in triangulations[:8]:
        Tpt = partial_triangulation(S, T)
        for d in T:
            e = shear_vector(elementary_laminate(d), Tpt)
            eop = shear_vector(co_elementary_laminate(d), Tpt)
            assert e.entries == tuple(-1 if g == d else 0 for g in Tpt.arcs)
            assert eop.entries == tuple(1 if g == d else 0 for g in Tpt.arcs)


@settings(max_examples=80, deadline=None)
@given(data=st.data(), name=st.sampled_from(NAMES), co=st.booleans())
def test_restriction_identity(pools, data, name, co):
    S, arcs, triangulations = pools[name]
    T = data.draw(st.sampled_from(triangulations))
    sub = data.draw(st.lists(st.sampled_from(T), min_size=1, unique=True))
    R = partial_triangulation(S, sub)
    d = data.draw(st.sampled_from(arcs))
    L = co_elementary_laminate(d) if co else elementary_laminate(d)
    if not shears(L, R):
        with pytest.raises(DoesNotShear):
            shear_vector(L, R)
        return
    Tpt = partial_triangulation(S, T)
    full = shear_vector(L, Tpt)
    assert shear_vector(L, R).entries == tuple(full[g] for g in R.arcs)
    assert shear_vector_via_completion(L, R).entries == shear_vector(L, R).entries


@settings(max_examples=80, deadline=None)
@given(data=st.data(), name=st.sampled_from(NAMES))
def test_standardness_routes_agree(pools, data, name):
    S, arcs, triangulations = pools[name]
    T = data.draw(st.sampled_from(triangulations))
    sub = data.draw(st.lists(st.sampled_from(T), min_size=1, unique=True))
    R = partial_triangulation(S, sub)
    d = data.draw(st.sampled_from(arcs))
    for co in (False, True):
        verdicts = standardness_verdicts(d, R, co)
        assert len(set(verdicts)) == 1, verdicts


@settings(max_examples=60, deadline=None)
@given(data=st.data(), name=st.sampled_from(NAMES))
def test_per_crossing_contributions_sum_to_entries(pools, data, name):
    S, arcs, triangulations = pools[name]
    T = data.draw(st.sampled_from(triangulations))
    R = partial_triangulation(S, data.draw(st.lists(st.sampled_from(T), min_size=1, unique=True)))
    L = elementary_laminate(data.draw(st.sampled_from(arcs)))
    if not shears(L, R):
        return
    parts = per_crossing(L, R)
    assert tuple(sum(p) for p in parts) == shear_vector(L, R).entries
    assert all(c in (-1, 0, 1) for p in parts for c in p)


def test_empty_context_is_never_sheared(surfaces):
    S = surfaces["hexagon"]
    empty = partial_triangulation(S, [])
    for d in tagged_arcs(S, 3):
        assert not shears(elementary_laminate(d), empty)


def test_index_vector_is_minus_shear(base):
    R = base["punctured-square"]
    for d in R.arcs:
        ind = index_vector(d, R)
        assert ind.entries == tuple(-v for v in shear_vector(elementary_laminate(d), R).entries)
        assert ind[d] == 1


def test_index_vector_of_non_standard_arc(pools):
    S, arcs, _ = pools["hexagon"]
    R = partial_triangulation(S, [arcs[0]])
    bad = [d for d in arcs if not shears(elementary_laminate(d), R)]
    assert bad
    with pytest.raises(NotStandard):
        index_vector(bad[0], R)


def test_good_completion_contains_context(pools):
    for name in NAMES:
        S, _, triangulations = pools[name]
        R = partial_triangulation(S, triangulations[0][:1])
        T = good_completion(R)
        assert set(R.arcs) <= set(T.arcs)
        assert len(T.arcs) == S.n_arcs


def test_shear_vector_json(base):
    R = base["hexagon"]
    v = shear_vector(elementary_laminate(R.arcs[0]), R)
    data = v.to_json()
    assert set(data) == {"context", "entries"}
    assert sorted(data["entries"].values()) == [-1, 0, 0]
