"""Acceptance checks on built-in fixtures, shared by ``selftest`` and the test suite."""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

from .algebra import skew_tiling_presentation, tiling_presentation, validate_skew_gentle
from .arc_engine import TaggedArc, base_arcs
from .dissections import (
    RIGHT,
    ExchangeGraph,
    check_connected,
    connects_to_boundary,
    enumerate_dissections,
    exchange_graph,
    flip,
    mutation_direction,
    path_to_support,
    sliding_agrees,
    standardness_verdicts,
)
from .enumeration import maximal_compatible_sets, stable_tagged_arcs, tagged_arcs
from .errors import SurfdissError
from .shear import co_elementary_laminate, elementary_laminate, per_crossing, shear_vector, shear_vector_via_completion, shears
from .surface_model import PartialTaggedTriangulation, SurfaceModel, SurfaceSpec, build_surface, is_admissible, partial_triangulation

PENTAGON_FAN_TEXT = "vertices: 0, 1; arrows: a0: 0 -> 1; special: {}; relations: []"

FIXTURES: dict[str, SurfaceSpec] = {
    "pentagon": SurfaceSpec(0, (5,), 0),
    "hexagon": SurfaceSpec(0, (6,), 0),
    "heptagon": SurfaceSpec(0, (7,), 0),
    "punctured-triangle": SurfaceSpec(0, (3,), 1),
    "punctured-square": SurfaceSpec(0, (4,), 1),
    "punctured-pentagon": SurfaceSpec(0, (5,), 1),
    "twice-punctured-digon": SurfaceSpec(0, (2,), 2),
    "annulus-2-1": SurfaceSpec(0, (2, 1), 0),
}


@dataclass(frozen=True)
class CheckResult:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] criterion {self.number:2d} {self.title}: {self.detail} ({self.seconds:.2f}s)"


@lru_cache(maxsize=None)
def surface(name: str) -> SurfaceModel:
    return build_surface(FIXTURES[name])


def base_triangulation(name: str) -> PartialTaggedTriangulation:
    S = surface(name)
    return partial_triangulation(S, base_arcs(S))


def polygon_triangulations(n: int) -> list[frozenset[tuple[int, int]]]:
    """Triangulations of a convex n-gon as diagonal sets, by splitting off the triangle on side (0, n-1)."""

    @lru_cache(maxsize=None)
    def tri(i: int, j: int) -> tuple[frozenset, ...]:
        if j - i < 2:
            return (frozenset(),)
        out = []
        for k in range(i + 1, j):
            here = {d for d in ((i, k), (k, j)) if d[1] - d[0] > 1}
            for a in tri(i, k):
                for b in tri(k, j):
                    out.append(frozenset(here) | a | b)
        return tuple(out)

    return list(tri(0, n - 1))


@lru_cache(maxsize=None)
def full_graph(name: str) -> ExchangeGraph:
    return exchange_graph(base_triangulation(name))


@lru_cache(maxsize=None)
def rank_one_graphs() -> tuple[tuple[str, TaggedArc, ExchangeGraph], ...]:
    out = []
    for name in ("pentagon", "hexagon", "punctured-triangle", "punctured-square", "annulus-2-1"):
        S = surface(name)
        for a in tagged_arcs(S, 2):
            if connects_to_boundary([a]):
                out.append((name, a, exchange_graph(partial_triangulation(S, [a]))))
    return tuple(out)


@lru_cache(maxsize=None)
def partial_cases() -> tuple[tuple[str, PartialTaggedTriangulation], ...]:
    """Proper non-empty subsets of the base triangulation that connect to the boundary."""
    out = []
    for name in ("hexagon", "punctured-triangle", "punctured-square", "punctured-pentagon"):
        S = surface(name)
        T = base_arcs(S)
        for r in range(1, len(T)):
            for sub in itertools.combinations(T, r):
                if connects_to_boundary(sub):
                    out.append((name, partial_triangulation(S, sub)))
    return tuple(out)


# Wall time of the cached BFS runs, so timed criteria can include it.
BUILD_SECONDS: dict[str, float] = {}


@lru_cache(maxsize=None)
def partial_graphs() -> tuple[ExchangeGraph, ...]:
    t = time.perf_counter()
    out = tuple(exchange_graph(R) for _, R in partial_cases())
    BUILD_SECONDS["partial"] = time.perf_counter() - t
    return out


def _all_graphs() -> list[ExchangeGraph]:
    names = ("hexagon", "heptagon", "punctured-triangle", "punctured-square")
    return [full_graph(n) for n in names] + [g for _, _, g in rank_one_graphs()]


def _triangulations(S: SurfaceModel, max_len: int = 3) -> list[tuple[TaggedArc, ...]]:
    return maximal_compatible_sets(tagged_arcs(S, max_len), size=S.n_arcs)


# ---------------------------------------------------------------------------
# Criteria
# ---------------------------------------------------------------------------


def check_polygons() -> tuple[bool, str]:
    ok, parts = True, []
    for name, n, expect, degree in (("hexagon", 6, 14, 3), ("heptagon", 7, 42, 4)):
        t = time.perf_counter()
        report = check_connected(full_graph(name), len(polygon_triangulations(n)))
        dt = time.perf_counter() - t
        good = report.vertices == expect and report.regular and report.degree == degree and report.connected and report.oracleMatch
        ok &= bool(good) and dt < 1.0
        parts.append(f"{name} {report.summary()} oracle={report.oracleCount}")
    return ok, "; ".join(parts)


def check_punctured() -> tuple[bool, str]:
    ok, parts = True, []
    t = time.perf_counter()
    for name, expect, degree in (("punctured-triangle", 14, 3), ("punctured-square", 50, 4)):
        S = surface(name)
        arcs, _ = stable_tagged_arcs(S)
        oracle = len(maximal_compatible_sets(arcs, size=S.n_arcs))
        report = check_connected(full_graph(name), oracle)
        ok &= report.vertices == expect and report.regular and report.degree == degree and report.connected and bool(report.oracleMatch)
        parts.append(f"{name} {report.summary()} oracle={oracle}")
    ok &= time.perf_counter() - t < 30.0
    return ok, "; ".join(parts)


def check_rank_one() -> tuple[bool, str]:
    t = time.perf_counter()
    cases = rank_one_graphs()
    bad = [(n, a) for n, a, g in cases if len(g.vertices) != 2 or len(g.edges) != 1]
    dt = time.perf_counter() - t
    return not bad and dt < 1.0 and len(cases) > 0, f"{len(cases)} single-arc R, {len(bad)} failures"


def check_shear_identities() -> tuple[bool, str]:
    pairs = bad = 0
    for name in ("hexagon", "heptagon", "punctured-triangle", "punctured-square"):
        for U in full_graph(name).vertices:
            T = U.partial
            for d in T.arcs:
                e = shear_vector(elementary_laminate(d), T)
                eop = shear_vector(co_elementary_laminate(d), T)
                for g in T.arcs:
                    pairs += 1
                    want = 1 if g == d else 0
                    bad += e[g] != -want or eop[g] != want
    return bad == 0, f"{pairs} pairs, {bad} violations"


def check_restriction(samples: int = 200, seed: int = 5) -> tuple[bool, str]:
    rng = random.Random(seed)
    names = ("hexagon", "punctured-triangle", "punctured-square", "twice-punctured-digon", "annulus-2-1")
    pools = {n: (_triangulations(surface(n)), tagged_arcs(surface(n), 3)) for n in names}
    done = bad = 0
    while done < samples:
        name = names[done % len(names)]
        Ts, arcs = pools[name]
        T = list(rng.choice(Ts))
        R = partial_triangulation(surface(name), rng.sample(T, rng.randrange(1, len(T))))
        L = elementary_laminate(rng.choice(arcs))
        if not shears(L, R):
            continue
        Tpt = partial_triangulation(surface(name), T)
        full = shear_vector(L, Tpt)
        direct = shear_vector(L, R)
        done += 1
        bad += direct.entries != tuple(full[g] for g in R.arcs)
        bad += direct.entries != shear_vector_via_completion(L, R, Tpt).entries
    return bad == 0, f"{done} triples, {bad} mismatches"


def check_triple_equivalence(per_surface: int = 6, max_len: int = 4, seed: int = 6) -> tuple[bool, str]:
    rng = random.Random(seed)
    checked = bad = 0
    for name in FIXTURES:
        S = surface(name)
        arcs = tagged_arcs(S, max_len)
        T = base_arcs(S)
        subsets = [rng.sample(T, rng.randrange(1, len(T) + 1)) for _ in range(per_surface)]
        for sub in subsets:
            R = partial_triangulation(S, sub)
            for a in arcs:
                for co in (False, True):
                    v = standardness_verdicts(a, R, co)
                    checked += 1
                    bad += len(set(v)) != 1
    return bad == 0, f"{checked} verdict triples, {bad} disagreements"


def check_flip_algebra() -> tuple[bool, str]:
    edges = compared = bad = 0
    for g in _all_graphs():
        for e in g.edges:
            U, V = g.vertices[e.source], g.vertices[e.target]
            edges += 1
            fwd, new = flip(U, e.arc, cross_check=False)
            back, old = flip(V, e.newArc, cross_check=False)
            bad += fwd != V or back != U or old != e.arc or new != e.newArc
            bad += len(set(U.arcs) ^ set(V.arcs)) != 2
            for W, l, X in ((U, e.arc, V), (V, e.newArc, U)):
                agree = sliding_agrees(W, l, X)
                if agree is not None:
                    compared += 1
                    bad += not agree
    return bad == 0, f"{edges} edges, {compared} sliding comparisons, {bad} violations"


def check_sign_coherence() -> tuple[bool, str]:
    vertices = bad = 0
    for g in _all_graphs() + list(partial_graphs()):
        for U in g.vertices:
            vertices += 1
            try:
                U.signs
            except SurfdissError:
                bad += 1
                continue
            for gamma in U.context.arcs:
                for contributions in per_crossing(co_elementary_laminate(gamma), U.partial):
                    bad += len({c > 0 for c in contributions if c}) > 1
    return bad == 0, f"{vertices} vertices, {bad} violations"


def check_main_theorem() -> tuple[bool, str]:
    cached = partial_graphs.cache_info().currsize > 0
    t = time.perf_counter()
    cases = partial_cases()
    bad = 0
    for (_, R), g in zip(cases, partial_graphs()):
        oracle = len(enumerate_dissections(R))
        report = check_connected(g, oracle)
        bad += not (report.connected and report.oracleMatch)
    dt = time.perf_counter() - t
    if cached:
        dt += BUILD_SECONDS["partial"]
    return bad == 0 and len(cases) >= 10 and dt < 120.0, f"{len(cases)} partial R, {bad} failures, {dt:.1f}s with BFS"


def check_support_paths() -> tuple[bool, str]:
    total = bad = 0
    for (_, R), g in zip(partial_cases(), partial_graphs()):
        where = {U.key(): i for i, U in enumerate(g.vertices)}
        for D in enumerate_dissections(R):
            total += 1
            i = where.get(D.key())
            bad += i is None or path_to_support(g, i) is None
    return bad == 0, f"{total} dissections, {bad} without a path"


def check_skew_gentle(max_triangulations: int = 12) -> tuple[bool, str]:
    seen: set[PartialTaggedTriangulation] = set()
    bad = 0
    for name in ("hexagon", "punctured-square", "twice-punctured-digon", "annulus-2-1"):
        S = surface(name)
        for T in _triangulations(S, 2)[:max_triangulations]:
            for r in range(1, len(T) + 1):
                for sub in itertools.combinations(T, r):
                    R = partial_triangulation(S, sub, check=False)
                    if R in seen or not is_admissible(S, R):
                        continue
                    seen.add(R)
                    try:
                        validate_skew_gentle(skew_tiling_presentation(R))
                        validate_skew_gentle(tiling_presentation(R))
                    except SurfdissError:
                        bad += 1
    golden = skew_tiling_presentation(base_triangulation("pentagon")).to_text()
    exact = golden == PENTAGON_FAN_TEXT
    return bad == 0 and len(seen) >= 10 and exact, f"{len(seen)} admissible R, {bad} failures, pentagon fan exact={exact}"


def check_tau_tilting() -> tuple[bool, str]:
    edges = bad = 0
    for g in _all_graphs() + list(partial_graphs()):
        for e in g.edges:
            edges += 1
            sides = (
                mutation_direction(g.vertices[e.source], e.arc),
                mutation_direction(g.vertices[e.target], e.newArc),
            )
            bad += sides.count(RIGHT) != 1
    return bad == 0, f"{edges} edges, {bad} violations"


CHECKS: tuple[tuple[int, str, Callable[[], tuple[bool, str]]], ...] = (
    (1, "polygon sanity", check_polygons),
    (2, "punctured counts", check_punctured),
    (3, "rank-one graphs", check_rank_one),
    (4, "shear identities", check_shear_identities),
    (5, "restriction identity", check_restriction),
    (6, "standardness triple equivalence", check_triple_equivalence),
    (7, "flip algebra", check_flip_algebra),
    (8, "sign coherence", check_sign_coherence),
    (9, "connectedness against enumeration", check_main_theorem),
    (10, "paths to the support of R", check_support_paths),
    (11, "skew-gentle presentations", check_skew_gentle),
    (12, "one right mutation per edge", check_tau_tilting),
)


def run_check(number: int) -> CheckResult:
    _, title, fn = CHECKS[number - 1]
    t = time.perf_counter()
    try:
        passed, detail = fn()
    except SurfdissError as exc:
        passed, detail = False, f"{type(exc).__name__}: {exc}"
    return CheckResult(number, title, bool(passed), detail, time.perf_counter() - t)


def run_all() -> list[CheckResult]:
    return [run_check(n) for n, _, _ in CHECKS]
