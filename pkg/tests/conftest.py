from __future__ import annotations

import pytest

from surfdiss import SurfaceSpec, base_arcs, build_surface, partial_triangulation

SPECS = {
    "pentagon": SurfaceSpec(0, (5,), 0),
    "hexagon": SurfaceSpec(0, (6,), 0),
    "punctured-triangle": SurfaceSpec(0, (3,), 1),
    "punctured-square": SurfaceSpec(0, (4,), 1),
    "twice-punctured-digon": SurfaceSpec(0, (2,), 2),
    "annulus-2-1": SurfaceSpec(0, (2, 1), 0),
}


@pytest.fixture(scope="session")
def surfaces():
    return {name: build_surface(spec) for name, spec in SPECS.items()}


@pytest.fixture(scope="session")
def base(surfaces):
    return {name: partial_triangulation(S, base_arcs(S)) for name, S in surfaces.items()}


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import LINES

    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in LINES:
            terminalreporter.write_line(line)
