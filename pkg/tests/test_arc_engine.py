from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from surfdiss import (
    BoundaryParallel,
    DegenerateAfterCut,
    IllegalMonogonCutout,
    IncompatibleArc,
    InvalidArc,
    NullHomotopic,
    SelfIntersecting,
    SurfaceSpec,
    arc_literal,
    base_arcs,
    build_surface,
    compatible,
    cut,
    intersection_number,
    normalize,
    partial_triangulation,
    relative_rotation,
    tagged_rotation,
)
from surfdiss.enumeration import tagged_arcs

NAMES = ["pentagon", "hexagon", "punctured-triangle", "punctured-square", "twice-punctured-digon", "annulus-2-1"]


@pytest.mark.parametrize(
    "literal, error",
    [
        ({"from": 0, "to": 0, "word": [[0, 0]]}, NullHomotopic),
        ({"from": 2, "to": 0, "word": [[0, 0]]}, BoundaryParallel),
        ({"from": 1, "to": 1, "word": [[2, 0]], "tags": {"from": 1, "to": 1}}, IllegalMonogonCutout),
        ({"from": 1, "to": 0, "word": [[2, 0], [1, 1]], "tags": {"to": 1}}, SelfIntersecting),
        ({"from": 0, "to": 2, "word": [[0, 0]]}, InvalidArc),
        ({"from": 0, "to": 9, "word": []}, InvalidArc),
        ({"from": 0}, InvalidArc),
    ],
)
def test_normalize_rejects_bad_literals(surfaces, literal, error):
    with pytest.raises(error):
        normalize(surfaces["punctured-triangle"], literal)


@pytest.mark.parametrize("name", NAMES)
def test_literal_round_trip(surfaces, name):
    S = surfaces[name]
    for a in tagged_arcs(S, 3):
        assert normalize(S, arc_literal(a)) == a


@pytest.mark.parametrize("name", NAMES)
def test_reversed_literal_is_the_same_arc(surfaces, name):
    S = surfaces[name]
    for a in tagged_arcs(S, 2):
        lit = arc_literal(a)
        if lit["word"]:
            rev = {
                "from": lit["to"],
                "to": lit["from"],
                "word": [[e, 1 - s] for e, s in reversed(lit["word"])],
                "tags": {k2: lit["tags"][k1] for k1, k2 in (("from", "to"), ("to", "from")) if k1 in lit["tags"]},
            }
            assert normalize(S, rev) == a


@settings(max_examples=60, deadline=None)
@given(data=st.data(), name=st.sampled_from(NAMES))
def test_intersection_number_is_symmetric(surfaces, data, name):
    arcs = tagged_arcs(surfaces[name], 3)
    a = data.draw(st.sampled_from(arcs))
    b = data.draw(st.sampled_from(arcs))
    assert intersection_number(a, b) == intersection_number(b, a)
    assert intersection_number(a, a) == 0
    assert compatible(a, b) == (intersection_number(a, b) == 0)


@pytest.mark.parametrize("name", NAMES)
def test_base_arcs_are_pairwise_compatible(surfaces, name):
    arcs = base_arcs(surfaces[name])
    assert all(compatible(a, b) for a in arcs for b in arcs)


@pytest.mark.parametrize("n", [5, 6, 7])
def test_rotation_of_polygon_arc_has_order_n(n):
    S = build_surface(SurfaceSpec(0, (n,), 0))
    for a in base_arcs(S):
        b = a
        for _ in range(n):
            b = tagged_rotation(b)
        assert b == a
        assert tagged_rotation(a) != a


@pytest.mark.parametrize("name", NAMES)
def test_rotation_inverse(surfaces, name):
    for a in tagged_arcs(surfaces[name], 2):
        assert tagged_rotation(tagged_rotation(a, 1), -1) == a


def test_rotation_negates_tags(surfaces):
    S = surfaces["punctured-triangle"]
    for a in tagged_arcs(S, 2):
        b = tagged_rotation(a)
        for e, v in enumerate(a.ends):
            if S.is_puncture(v):
                assert b.tags[b.ends.index(v)] == -a.tags[e]


@pytest.mark.parametrize("name", NAMES)
def test_relative_rotation_stays_compatible(surfaces, name):
    S = surfaces[name]
    T = base_arcs(S)
    for l in T:
        N = partial_triangulation(S, [a for a in T if a != l])
        for d in (1, -1):
            new = relative_rotation(l, N, d)
            assert new != l
            assert all(compatible(new, a) for a in N.arcs)
            assert relative_rotation(new, N, -d) == l


def test_relative_rotation_rejects_incompatible(surfaces):
    S = surfaces["hexagon"]
    a = base_arcs(S)[0]
    N = partial_triangulation(S, [tagged_rotation(a)])
    with pytest.raises(IncompatibleArc):
        relative_rotation(a, N)


def test_cut_transports_compatible_arcs(surfaces):
    S = surfaces["hexagon"]
    T = base_arcs(S)
    res = cut(S, T[0])
    moved = [res.forward(a) for a in T[1:]]
    assert len(moved) == 2
    assert [res.backward(b) for b in moved] == T[1:]
    with pytest.raises(IncompatibleArc):
        res.forward(tagged_rotation(T[0]))


def test_cut_to_nothing_is_degenerate():
    S = build_surface(SurfaceSpec(0, (4,), 0))
    with pytest.raises(DegenerateAfterCut):
        cut(S, base_arcs(S)[0])
