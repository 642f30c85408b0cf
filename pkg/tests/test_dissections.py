from __future__ import annotations

from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from surfdiss import (
    LimitExceeded,
    Limits,
    NotStandard,
    base_arcs,
    check_connected,
    connects_to_boundary,
    enumerate_dissections,
    exchange_graph,
    flip,
    flip_sign,
    index_vector,
    is_dissection,
    make_dissection,
    mutation_direction,
    partial_triangulation,
    path_to_support,
    tagged_rotation,
    tau_tilting_label,
)
from surfdiss.acceptance import partial_cases, partial_graphs
from surfdiss.dissections import LEFT, RIGHT, is_codissection
from surfdiss.enumeration import tagged_arcs


def det(rows):
    """Determinant by fraction-exact elimination."""
    m = [[Fraction(x) for x in r] for r in rows]
    n, d = len(m), Fraction(1)
    for i in range(n):
        p = next((r for r in range(i, n) if m[r][i]), None)
        if p is None:
            return 0
        if p != i:
            m[i], m[p] = m[p], m[i]
            d = -d
        d *= m[i][i]
        for r in range(i + 1, n):
            f = m[r][i] / m[i][i]
            m[r] = [a - f * b for a, b in zip(m[r], m[i])]
    return d


@pytest.fixture(scope="module")
def cases():
    return list(zip(partial_cases(), partial_graphs()))


def test_context_is_its_own_dissection(base):
    for R in base.values():
        assert is_dissection(R.arcs, R)
        assert is_codissection(R, R.arcs)


def test_graph_contains_rotated_context(cases):
    for (_, R), G in cases:
        rho = {tagged_rotation(g) for g in R.arcs}
        hits = [U for U in G.vertices if set(U.arcs) == rho]
        assert len(hits) == 1
        label = tau_tilting_label(hits[0])
        assert label.moduleArcs == ()
        assert tau_tilting_label(G.vertices[0]).projectiveShiftArcs == ()


def test_index_vectors_form_a_basis(cases):
    for (_, R), G in cases:
        for U in G.vertices:
            assert abs(det([index_vector(a, R).entries for a in U.arcs])) == 1


def test_flip_is_an_involution(cases):
    for (_, R), G in cases:
        for U in G.vertices:
            for l in U.arcs:
                V, new = flip(U, l)
                assert set(U.arcs) ^ set(V.arcs) == {l, new}
                assert flip(V, new) == (U, l)
                assert flip_sign(U, l) == -flip_sign(V, new)
                assert {mutation_direction(U, l), mutation_direction(V, new)} == {RIGHT, LEFT}


def test_exchange_graph_is_deterministic_across_threads(base):
    R = base["punctured-square"]
    one = exchange_graph(R, threads=1)
    four = exchange_graph(R, threads=4)
    assert [U.key() for U in one.vertices] == [U.key() for U in four.vertices]
    assert one.edges == four.edges
    assert one.depth == four.depth


def test_limit_exceeded_carries_partial_graph(base):
    with pytest.raises(LimitExceeded) as info:
        exchange_graph(base["punctured-square"], Limits(maxVertices=10))
    partial = info.value.partial
    assert len(partial.vertices) == 10
    assert not partial.complete


def test_word_length_limit(base):
    with pytest.raises(LimitExceeded):
        exchange_graph(base["hexagon"], Limits(maxWordLength=1))


def test_bfs_matches_enumeration(cases):
    for (_, R), G in cases:
        found = {U.key() for U in enumerate_dissections(R)}
        assert found == {U.key() for U in G.vertices}
        report = check_connected(G, len(found))
        assert report.connected and report.oracleMatch and report.regular
        assert report.defects == ()


def test_support_paths(cases):
    for (_, R), G in cases:
        for i in range(len(G.vertices)):
            path = path_to_support(G, i)
            assert path[0] == i
            assert set(G.vertices[path[-1]].arcs) & set(R.arcs)
            g = G.to_networkx()
            assert len(path) - 1 == min(
                nx.shortest_path_length(g, i, j) for j, U in enumerate(G.vertices) if set(U.arcs) & set(R.arcs)
            )


def test_connects_to_boundary(surfaces):
    S = surfaces["twice-punctured-digon"]
    between_punctures = [a for a in tagged_arcs(S, 2) if all(S.is_puncture(v) for v in a.ends)]
    assert between_punctures
    assert not connects_to_boundary(between_punctures[:1])
    assert connects_to_boundary(base_arcs(S))


def test_rank_one_graphs(surfaces):
    for name in ("pentagon", "punctured-triangle", "annulus-2-1"):
        S = surfaces[name]
        for a in tagged_arcs(S, 2):
            if connects_to_boundary([a]):
                G = exchange_graph(partial_triangulation(S, [a]))
                assert len(G.vertices) == 2 and len(G.edges) == 1
                assert G.vertices[1].arcs == (tagged_rotation(a),)


def test_make_dissection_checks(base):
    R = base["hexagon"]
    with pytest.raises(NotStandard):
        make_dissection(R, R.arcs[:2])


@settings(max_examples=30, deadline=None)
@given(data=st.data())
def test_random_flip_walks_stay_in_graph(base, data):
    R = base["punctured-triangle"]
    G = exchange_graph(R)
    keys = {U.key() for U in G.vertices}
    U = G.vertices[0]
    for _ in range(data.draw(st.integers(1, 12))):
        U, _ = flip(U, data.draw(st.sampled_from(U.arcs)))
        assert U.key() in keys


def test_annulus_full_triangulation_grows_without_bound(base):
    with pytest.raises(LimitExceeded) as info:
        exchange_graph(base["annulus-2-1"], Limits(maxWordLength=12))
    assert len(info.value.partial.vertices) > 14
