"""Counts checked against closed formulas and independent enumerators."""

from __future__ import annotations

from math import comb

import pytest

from surfdiss import SurfaceSpec, base_arcs, build_surface, check_connected, exchange_graph, partial_triangulation
from surfdiss.acceptance import polygon_triangulations
from surfdiss.enumeration import maximal_compatible_sets, stable_tagged_arcs


def catalan(m: int) -> int:
    return comb(2 * m, m) // (m + 1)


def type_d_clusters(n: int) -> int:
    return (3 * n - 2) * comb(2 * n - 2, n - 1) // n


@pytest.mark.parametrize("n", range(4, 10))
def test_polygon_enumerator_gives_catalan(n):
    tris = polygon_triangulations(n)
    assert len(tris) == catalan(n - 2)
    assert len(set(tris)) == len(tris)
    assert all(len(t) == n - 3 for t in tris)


@pytest.mark.parametrize("n", [5, 6, 7, 8])
def test_polygon_exchange_graph(n):
    S = build_surface(SurfaceSpec(0, (n,), 0))
    G = exchange_graph(partial_triangulation(S, base_arcs(S)))
    report = check_connected(G, catalan(n - 2))
    assert report.oracleMatch and report.connected and report.regular
    assert report.summary() == {"vertices": catalan(n - 2), "regular": n - 3, "connected": True}
    assert len(G.edges) == catalan(n - 2) * (n - 3) // 2


@pytest.mark.parametrize("n", [3, 4, 5])
def test_punctured_polygon_exchange_graph(n):
    S = build_surface(SurfaceSpec(0, (n,), 1))
    G = exchange_graph(partial_triangulation(S, base_arcs(S)))
    assert len(G.vertices) == type_d_clusters(n)
    assert check_connected(G).summary() == {"vertices": type_d_clusters(n), "regular": n, "connected": True}


@pytest.mark.parametrize("n, expected", [(3, 14), (4, 50)])
def test_punctured_polygon_enumeration(n, expected):
    S = build_surface(SurfaceSpec(0, (n,), 1))
    arcs, _ = stable_tagged_arcs(S)
    assert len(arcs) == n * n
    assert len(maximal_compatible_sets(arcs, size=n)) == expected
