from __future__ import annotations

import pytest

from surfdiss import (
    AxiomViolation,
    NotAdmissible,
    partial_triangulation,
    skew_tiling_presentation,
    tiling_presentation,
    validate_skew_gentle,
)
from surfdiss.acceptance import PENTAGON_FAN_TEXT
from surfdiss.algebra import SKEW_TILING, TILING, Arrow, QuiverPresentation
from surfdiss.enumeration import maximal_compatible_sets, stable_tagged_arcs


def _folded_pair(S, arcs):
    for a in arcs:
        if any(S.is_puncture(v) for v in a.ends) and not all(S.is_puncture(v) for v in a.ends):
            return [a, a.with_tags_flipped(S.punctures)]
    raise AssertionError("no arc to a puncture")


def test_pentagon_fan_text(base):
    assert skew_tiling_presentation(base["pentagon"]).to_text() == PENTAGON_FAN_TEXT


def test_hexagon_fan_is_linear_without_relations(base):
    p = tiling_presentation(base["hexagon"])
    assert p.to_text() == "vertices: 0, 1, 2; arrows: a0: 0 -> 1, a1: 1 -> 2; special: {}; relations: []"
    assert validate_skew_gentle(p).relations == ()


def test_inner_triangle_gives_cyclic_quiver_with_all_relations(surfaces):
    S = surfaces["hexagon"]
    arcs, _ = stable_tagged_arcs(S)
    for T in maximal_compatible_sets(arcs, size=3):
        ends = [set(a.ends) for a in T]
        if all(len(ends[i] & ends[j]) == 1 for i in range(3) for j in range(i + 1, 3)) and not set.intersection(*ends):
            break
    p = tiling_presentation(partial_triangulation(S, T))
    assert len(p.arrows) == 3
    assert sorted((a.source, a.target) for a in p.arrows) in ([(0, 1), (1, 2), (2, 0)], [(0, 2), (1, 0), (2, 1)])
    assert len(p.relations) == 3
    validate_skew_gentle(p)


def test_self_folded_pair_gives_special_loop(surfaces):
    S = surfaces["punctured-square"]
    R = partial_triangulation(S, _folded_pair(S, stable_tagged_arcs(S)[0]))
    p = skew_tiling_presentation(R)
    assert p.to_text() == "vertices: 0; arrows: a0: 0 -> 0; special: {0}; relations: [a0a0-a0]"
    triple = validate_skew_gentle(p)
    assert triple.special == (0,)
    assert triple.arrows == ()
    assert tiling_presentation(R).to_text() == "vertices: 0; arrows: a0: 0 -> 0; special: {}; relations: [a0a0]"


def test_punctured_surface_without_folded_triangle_is_not_admissible(base):
    with pytest.raises(NotAdmissible):
        skew_tiling_presentation(base["punctured-triangle"])


def _pres(arrows, relations=(), special=(), mode=TILING, n=3):
    return QuiverPresentation(tuple(range(n)), tuple(arrows), tuple(special), tuple(relations), mode)


def _arrow(name, s, t, se=0, te=0):
    return Arrow(name, s, t, 0, se, te)


@pytest.mark.parametrize(
    "pres, clause",
    [
        (_pres([_arrow("a", 0, 1), _arrow("b", 0, 2), _arrow("c", 0, 0)]), "out-degree"),
        (_pres([_arrow("a", 1, 0), _arrow("b", 2, 0), _arrow("c", 0, 0)]), "in-degree"),
        (_pres([_arrow("a", 0, 1), _arrow("b", 1, 2), _arrow("c", 1, 0)], [("a", "b"), ("a", "c")]), "relation-after"),
        (_pres([_arrow("a", 0, 1), _arrow("b", 1, 2), _arrow("c", 1, 0)]), "path-after"),
        (_pres([_arrow("a", 0, 1), _arrow("b", 2, 1), _arrow("c", 1, 0)], [("a", "c"), ("b", "c")]), "relation-before"),
        (_pres([_arrow("a", 0, 1), _arrow("b", 2, 1), _arrow("c", 1, 0)]), "path-before"),
        (_pres([_arrow("a", 0, 1)], [("a", "z")]), "relation-arrows"),
        (_pres([_arrow("a", 0, 1), _arrow("b", 2, 0)], [("a", "b")]), "relation-arrows"),
        (_pres([_arrow("a", 0, 1)], special=["a"], mode=SKEW_TILING), "special-loop"),
        (_pres([_arrow("a", 0, 0)], special=["a"], mode=SKEW_TILING), "special-loop"),
    ],
)
def test_axiom_violations_name_their_clause(pres, clause):
    with pytest.raises(AxiomViolation) as info:
        validate_skew_gentle(pres)
    assert info.value.clause == clause


def test_presentation_json(base):
    data = skew_tiling_presentation(base["pentagon"]).to_json()
    assert data["mode"] == SKEW_TILING
    assert data["vertices"] == [0, 1]
    assert data["relations"] == []
