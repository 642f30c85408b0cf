from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from surfdiss import (
    DegenerateSurface,
    FoldedClosureViolated,
    IncompatibleArc,
    NoBoundary,
    SurfaceModel,
    SurfaceSpec,
    base_arcs,
    build_surface,
    ideal_form,
    partial_triangulation,
    tagged_form,
    tagged_rotation,
)
from surfdiss.surface_model import is_admissible


@pytest.mark.parametrize(
    "spec, rank",
    [
        (SurfaceSpec(0, (6,), 0), 3),
        (SurfaceSpec(0, (7,), 0), 4),
        (SurfaceSpec(0, (3,), 1), 3),
        (SurfaceSpec(0, (4,), 1), 4),
        (SurfaceSpec(0, (2,), 2), 5),
        (SurfaceSpec(0, (2, 1), 0), 3),
        (SurfaceSpec(1, (1,), 0), 4),
    ],
)
def test_rank_matches_base_triangulation(spec, rank):
    S = build_surface(spec)
    assert spec.rank == rank
    assert S.n_arcs == rank
    assert len(base_arcs(S)) == rank


@pytest.mark.parametrize(
    "spec, error",
    [
        (SurfaceSpec(0, (3,), 0), DegenerateSurface),
        (SurfaceSpec(0, (1,), 1), DegenerateSurface),
        (SurfaceSpec(0, (0,), 2), DegenerateSurface),
        (SurfaceSpec(0, (), 3), NoBoundary),
        (SurfaceSpec(-1, (4,), 0), DegenerateSurface),
    ],
)
def test_degenerate_surfaces_are_rejected(spec, error):
    with pytest.raises(error):
        build_surface(spec)


@settings(max_examples=25, deadline=None)
@given(
    genus=st.integers(0, 1),
    boundary=st.lists(st.integers(1, 4), min_size=1, max_size=2),
    punctures=st.integers(0, 2),
)
def test_surface_json_round_trip(genus, boundary, punctures):
    spec = SurfaceSpec(genus, tuple(boundary), punctures)
    try:
        S = build_surface(spec)
    except DegenerateSurface:
        return
    again = SurfaceModel.from_json(S.to_json())
    assert again == S
    assert again.dumps() == S.dumps()
    assert SurfaceSpec.from_json(spec.to_json()) == spec


def test_partial_triangulation_rejects_crossing_arcs(surfaces):
    S = surfaces["hexagon"]
    a = base_arcs(S)[0]
    b = tagged_rotation(a)
    with pytest.raises(IncompatibleArc):
        partial_triangulation(S, [a, b])


def test_tagged_form_inverts_ideal_form(surfaces):
    S = surfaces["punctured-square"]
    for a in base_arcs(S):
        if any(S.is_puncture(v) for v in a.ends):
            R = partial_triangulation(S, [a, a.with_tags_flipped(S.punctures)])
            break
    frag = ideal_form(R)
    assert len(frag.selfFolded) == 1
    assert is_admissible(S, R)
    assert tagged_form(S, frag.arcs).arcs == R.arcs


def test_tagged_form_needs_folded_closure(surfaces):
    S = surfaces["punctured-square"]
    for a in base_arcs(S):
        if any(S.is_puncture(v) for v in a.ends):
            R = partial_triangulation(S, [a, a.with_tags_flipped(S.punctures)])
            break
    loop = next(x for x in ideal_form(R).arcs if x.ends[0] == x.ends[1])
    with pytest.raises(FoldedClosureViolated):
        tagged_form(S, [loop])


def test_partial_triangulations_on_different_surfaces_differ(surfaces):
    empty_a = partial_triangulation(surfaces["hexagon"], [])
    empty_b = partial_triangulation(surfaces["pentagon"], [])
    assert empty_a != empty_b
