"""Standard arcs, dissections, signed flips and exchange graphs."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import networkx as nx

from ._cover import Cover, interleave
from .arc_engine import (
    TaggedArc,
    adjacent_dart,
    arc_literal,
    dart_far,
    dart_key,
    darts_at,
    interior_count,
    intersection_number,
    relative_rotation,
    slide_endpoints,
    sort_crossings,
    tagged_rotation,
)
from .enumeration import maximal_compatible_sets, stable_tagged_arcs
from .errors import CrossCheckMismatch, DoesNotShear, InternalInconsistency, LimitExceeded, NotStandard
from .shear import (
    ShearVector,
    co_elementary_laminate,
    completion_vector,
    elementary_laminate,
    good_completion,
    shear_vector,
    shears,
)
from .surface_model import PartialTaggedTriangulation, partial_triangulation, retag

RIGHT, LEFT = "right", "left"


# ---------------------------------------------------------------------------
# Standard and co-standard arcs
# ---------------------------------------------------------------------------


def _laminate(delta: TaggedArc, co: bool):
    return co_elementary_laminate(delta) if co else elementary_laminate(delta)


def _adjoint(delta: TaggedArc) -> TaggedArc | None:
    S = delta.surface
    if not all(S.is_puncture(v) for v in delta.ends):
        return None
    return delta.with_tags_flipped(delta.ends)


def geometric_standard(delta: TaggedArc, R: PartialTaggedTriangulation, co: bool = False) -> bool:
    """Standardness read off the arc segments of δ^R cut by R° ∪ B.

    Every segment must cut out an angle. At an endpoint the edge of that angle
    must be the first arc of R° ∪ B next to δ clockwise, or anticlockwise for a
    notched end at a puncture; the co-standard variant swaps the two directions.
    """
    S = delta.surface
    d = retag(delta, R)
    own = {retag(g, R) for g in R.arcs}
    if d in own or _adjoint(d) in own:
        return True
    ideal = R.idealForm.arcs
    w = d.walk
    cover = Cover(S, w.tri)
    x, z, frames = cover.lift(w, (), 0)
    walks = [x_.walk for x_ in ideal]
    chords: dict = {}
    for path in dict.fromkeys(frames):
        for k, rw in enumerate(walks):
            for a1, a2, _ in cover.lifts_through(rw, path):
                if interleave(x, z, a1, a2):
                    chords[(a1, a2)] = k
    ordered = sort_crossings(x, z, [(a1, a2, k) for (a1, a2), k in chords.items()])
    apex = []
    labelled = list(enumerate(walks))
    for e, (path, corner) in enumerate(((frames[0], w.corner), (frames[-1], w.end))):
        v = d.ends[e]
        direction = 1 if d.tags[e] == -1 else -1
        if co:
            direction = -direction
        key = dart_key(S, w, e)
        got = adjacent_dart(S, v, darts_at(S, v, labelled, with_boundary=True), key, direction)
        if got is None:
            return False
        far = dart_far(cover, path, corner, key, got[0], got[1])
        apex.append(cover.corner(*far))
    if not ordered:
        return apex[0] == apex[1]
    if apex[0] not in ordered[0][:2] or apex[1] not in ordered[-1][:2]:
        return False
    for c1, c2 in zip(ordered, ordered[1:]):
        if len(set(c1[:2]) & set(c2[:2])) != 1:
            return False
    return True


def completion_standard(delta: TaggedArc, R: PartialTaggedTriangulation, co: bool = False) -> bool:
    """Vanishing of b_{γ,T} on T \\ R for the stored completion T of R."""
    T = good_completion(R)
    try:
        vec = completion_vector(_laminate(delta, co), T)
    except DoesNotShear:
        return False
    inside = set(R.arcs)
    return all(v == 0 for a, v in zip(T.arcs, vec) if a not in inside)


def standardness_verdicts(delta: TaggedArc, R: PartialTaggedTriangulation, co: bool = False) -> tuple[bool, bool, bool]:
    """Verdicts of the shear, geometric and completion routes."""
    return (
        shears(_laminate(delta, co), R),
        geometric_standard(delta, R, co),
        completion_standard(delta, R, co),
    )


def is_standard(delta: TaggedArc, R: PartialTaggedTriangulation, cross_check: bool = True) -> bool:
    """Whether e(δ) shears R, checked against the geometric criterion."""
    got = shears(elementary_laminate(delta), R)
    if cross_check and geometric_standard(delta, R) != got:
        raise CrossCheckMismatch(f"standardness routes disagree on {delta!r}")
    return got


def is_costandard(delta: TaggedArc, R: PartialTaggedTriangulation, cross_check: bool = True) -> bool:
    """Whether e^op(δ) shears R, checked against the geometric criterion."""
    got = shears(co_elementary_laminate(delta), R)
    if cross_check and geometric_standard(delta, R, co=True) != got:
        raise CrossCheckMismatch(f"co-standardness routes disagree on {delta!r}")
    return got


def index_vector(delta: TaggedArc, R: PartialTaggedTriangulation, shifted: bool = False) -> ShearVector:
    """Index of δ with respect to R (or R[-1] when ``shifted``): minus a shear vector."""
    L = _laminate(delta, shifted)
    if not shears(L, R):
        raise NotStandard(f"{delta!r} is not {'co-' if shifted else ''}standard")
    return -shear_vector(L, R)


# ---------------------------------------------------------------------------
# Dissections
# ---------------------------------------------------------------------------


def _sorted_arcs(arcs: Iterable[TaggedArc]) -> tuple[TaggedArc, ...]:
    return tuple(sorted(set(arcs), key=lambda a: a.key()))


@dataclass(frozen=True, eq=False)
class Dissection:
    """A collection U of R-standard arcs, stored in canonical order."""

    context: PartialTaggedTriangulation
    arcs: tuple[TaggedArc, ...]

    def key(self) -> tuple:
        return tuple(a.key() for a in self.arcs)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Dissection) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __contains__(self, arc: object) -> bool:
        return arc in self.arcs

    def __len__(self) -> int:
        return len(self.arcs)

    @cached_property
    def partial(self) -> PartialTaggedTriangulation:
        return partial_triangulation(self.context.surface, self.arcs, check=False)

    @cached_property
    def indexCache(self) -> dict[TaggedArc, ShearVector]:
        return {a: index_vector(a, self.context) for a in self.arcs}

    @cached_property
    def signs(self) -> dict[TaggedArc, int]:
        return _flip_signs(self)

    def to_json(self) -> dict:
        return {"arcs": [arc_literal(a) for a in self.arcs]}


def make_dissection(R: PartialTaggedTriangulation, arcs: Iterable[TaggedArc], check: bool = True) -> Dissection:
    U = Dissection(R, _sorted_arcs(arcs))
    if check and not is_dissection(U.arcs, R):
        raise NotStandard("the arcs do not form a dissection")
    return U


def is_dissection(U: Iterable[TaggedArc], R: PartialTaggedTriangulation) -> bool:
    """All arcs R-standard, pairwise compatible, and exactly |R| of them."""
    arcs = _sorted_arcs(U)
    if len(arcs) != len(R.arcs):
        return False
    if not all(is_standard(a, R) for a in arcs):
        return False
    return all(intersection_number(a, b) == 0 for i, a in enumerate(arcs) for b in arcs[i + 1 :])


def is_codissection(R: PartialTaggedTriangulation, U: Iterable[TaggedArc]) -> bool:
    """Every arc of R is U-co-standard and |R| = |U|."""
    arcs = _sorted_arcs(U)
    if len(arcs) != len(R.arcs):
        return False
    Upt = partial_triangulation(R.surface, arcs)
    return all(is_costandard(g, Upt) for g in R.arcs)


def _flip_signs(U: Dissection) -> dict[TaggedArc, int]:
    Upt = U.partial
    values: dict[TaggedArc, set[int]] = {a: set() for a in U.arcs}
    for g in U.context.arcs:
        try:
            vec = shear_vector(co_elementary_laminate(g), Upt)
        except DoesNotShear as exc:
            raise InternalInconsistency(f"{g!r} is not co-standard for a dissection") from exc
        for a, v in zip(Upt.arcs, vec.entries):
            if v:
                values[a].add(1 if v > 0 else -1)
    out = {}
    for a, s in values.items():
        if len(s) != 1:
            raise InternalInconsistency(f"flip sign of {a!r} is {'mixed' if s else 'undetermined'}")
        out[a] = next(iter(s))
    return out


def flip_sign(U: Dissection, l: TaggedArc) -> int:
    """Common sign of b_{l,U}(e^op(γ)) over γ in R."""
    return U.signs[l]


def flip(U: Dissection, l: TaggedArc, cross_check: bool = True) -> tuple[Dissection, TaggedArc]:
    """Replace l by ρ^s_{U \\ {l}}(l) with s the flip sign of l."""
    if l not in U.arcs:
        raise InternalInconsistency("the flipped arc is not in the dissection")
    S = U.context.surface
    s = flip_sign(U, l)
    rest = [a for a in U.arcs if a != l]
    new = relative_rotation(l, partial_triangulation(S, rest, check=False), s)
    V = Dissection(U.context, _sorted_arcs(rest + [new]))
    if cross_check and sliding_agrees(U, l, V) is False:
        raise CrossCheckMismatch(f"relative rotation and endpoint sliding disagree when flipping {l!r}")
    return V, new


def sliding_agrees(U: Dissection, l: TaggedArc, V: Dissection) -> bool | None:
    """Compare V with the endpoint-sliding flip of U at l; None when l° is a folded side."""
    frag = U.partial.idealForm
    j = frag.arcMap[U.partial.index(l)]
    if frag.folded_partner(j) is not None:
        return None
    v = frag.arcs[j]
    slid = slide_endpoints(U.context.surface, frag.arcs, v, flip_sign(U, l))
    expect = {x.key() for x in frag.arcs if x.key() != v.key()} | {slid.key()}
    return expect == {x.key() for x in V.partial.idealForm.arcs}


def mutation_direction(U: Dissection, l: TaggedArc) -> str:
    """Right mutation for flip sign +1, left for -1."""
    return RIGHT if flip_sign(U, l) > 0 else LEFT


@dataclass(frozen=True)
class TauTiltingLabel:
    """Split of U into module arcs and arcs of ρ(R) (the shifted projective part)."""

    moduleArcs: tuple[TaggedArc, ...]
    projectiveShiftArcs: tuple[TaggedArc, ...]

    def to_json(self) -> dict:
        return {
            "moduleArcs": [arc_literal(a) for a in self.moduleArcs],
            "projectiveShiftArcs": [arc_literal(a) for a in self.projectiveShiftArcs],
        }


def tau_tilting_label(U: Dissection) -> TauTiltingLabel:
    shifted = {tagged_rotation(g) for g in U.context.arcs}
    return TauTiltingLabel(
        tuple(a for a in U.arcs if a not in shifted),
        tuple(a for a in U.arcs if a in shifted),
    )


def int_circ(gamma: TaggedArc, U: Dissection | PartialTaggedTriangulation) -> int:
    """Interior crossings of γ with the arcs of U°."""
    Upt = U.partial if isinstance(U, Dissection) else U
    S = gamma.surface
    return sum(interior_count(S, gamma.walk, x.walk, same=x.walk == gamma.walk) for x in Upt.idealForm.arcs)


def connects_to_boundary(R: PartialTaggedTriangulation | Sequence[TaggedArc]) -> bool:
    """Every component of R (arcs linked by shared endpoints) reaches a marked point."""
    arcs = list(R.arcs if isinstance(R, PartialTaggedTriangulation) else R)
    if not arcs:
        return True
    S = arcs[0].surface
    g = nx.Graph()
    for k, a in enumerate(arcs):
        g.add_node(("a", k))
        for v in a.ends:
            g.add_edge(("a", k), ("v", v))
    for comp in nx.connected_components(g):
        if not any(n[0] == "v" and not S.is_puncture(n[1]) for n in comp):
            return False
    return True


# ---------------------------------------------------------------------------
# Exchange graph
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Edge:
    """Flip between vertices ``source`` and ``target``: ``arc`` is replaced by ``newArc``."""

    source: int
    target: int
    arc: TaggedArc
    newArc: TaggedArc


@dataclass(frozen=True)
class ExchangeGraph:
    """Dissections reachable from R by flips, in canonical (depth, key) order."""

    context: PartialTaggedTriangulation
    vertices: tuple[Dissection, ...]
    edges: tuple[Edge, ...]
    depth: tuple[int, ...]
    complete: bool

    def degree(self, i: int) -> int:
        return sum(1 for e in self.edges if i in (e.source, e.target))

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(len(self.vertices)))
        g.add_edges_from((e.source, e.target) for e in self.edges)
        return g


@dataclass(frozen=True)
class Limits:
    maxVertices: int = 100000
    maxWordLength: int = 1000
    boundStabilizationMargin: int = 4


def _expand(U: Dissection, cross_check: bool) -> list[tuple[TaggedArc, Dissection, TaggedArc]]:
    return [(l, *flip(U, l, cross_check)) for l in U.arcs]


def exchange_graph(
    R: PartialTaggedTriangulation,
    limits: Limits | None = None,
    threads: int = 1,
    cross_check: bool = True,
) -> ExchangeGraph:
    """Breadth-first closure of {R} under flips.

    Frontiers may be expanded on several threads; merging happens in key order,
    so the result does not depend on the schedule.
    """
    limits = limits or Limits()
    root = Dissection(R, _sorted_arcs(R.arcs))
    depth: dict[Dissection, int] = {root: 0}
    found: dict[tuple[Dissection, TaggedArc], tuple[Dissection, TaggedArc]] = {}
    frontier = [root]
    level = 0
    complete = True
    pool = ThreadPoolExecutor(max_workers=threads) if threads > 1 else None
    try:
        while frontier:
            frontier.sort(key=Dissection.key)
            if pool is not None:
                results = list(pool.map(lambda U: _expand(U, cross_check), frontier))
            else:
                results = [_expand(U, cross_check) for U in frontier]
            nxt = []
            for U, flips in zip(frontier, results):
                for l, V, new in flips:
                    if len(new.walk) > limits.maxWordLength:
                        complete = False
                        raise LimitExceeded(f"flip produced a word longer than {limits.maxWordLength}")
                    found[(U, l)] = (V, new)
                    if V not in depth:
                        if len(depth) >= limits.maxVertices:
                            complete = False
                            raise LimitExceeded(f"more than {limits.maxVertices} dissections")
                        depth[V] = level + 1
                        nxt.append(V)
            frontier = nxt
            level += 1
    except LimitExceeded as exc:
        exc.partial = _assemble(R, depth, found, complete=False)
        raise
    finally:
        if pool is not None:
            pool.shutdown()
    return _assemble(R, depth, found, complete)


def _assemble(R, depth: dict, found: dict, complete: bool) -> ExchangeGraph:
    order = sorted(depth, key=lambda U: (depth[U], U.key()))
    pos = {U: i for i, U in enumerate(order)}
    edges = {}
    for (U, l), (V, new) in found.items():
        if V not in pos:
            continue
        i, j = pos[U], pos[V]
        if i < j:
            edges[(i, j)] = Edge(i, j, l, new)
    if complete:
        for (U, l), (V, new) in found.items():
            back = found.get((V, new))
            if back is None or back[0] != U or back[1] != l:
                raise InternalInconsistency("flip is not an involution on an edge")
    return ExchangeGraph(
        R,
        tuple(order),
        tuple(edges[k] for k in sorted(edges)),
        tuple(depth[U] for U in order),
        complete,
    )


@dataclass(frozen=True)
class ConnectivityReport:
    vertices: int
    regular: bool
    degree: int
    connected: bool
    complete: bool
    connectsToBoundary: bool
    oracleCount: int | None = None
    oracleMatch: bool | None = None
    defects: tuple[str, ...] = field(default_factory=tuple)

    def summary(self) -> dict:
        """Counts and verdicts; ``regular`` is the common degree, or false."""
        return {"vertices": self.vertices, "regular": self.degree if self.regular else False, "connected": self.connected}


def check_connected(graph: ExchangeGraph, oracleCount: int | None = None) -> ConnectivityReport:
    """Connectivity and regularity of a BFS graph, optionally against an oracle count."""
    g = graph.to_networkx()
    n = g.number_of_nodes()
    connected = n > 0 and nx.is_connected(g)
    rank = len(graph.context.arcs)
    regular = all(d == rank for _, d in g.degree())
    ctb = connects_to_boundary(graph.context)
    match = None if oracleCount is None else oracleCount == n
    defects = []
    if ctb and not connected:
        defects.append("graph is not connected although R connects to the boundary")
    if ctb and match is False:
        defects.append(f"BFS found {n} dissections but the enumeration found {oracleCount}")
    if graph.complete and not regular:
        defects.append("complete graph is not regular")
    return ConnectivityReport(n, regular, rank, connected, graph.complete, ctb, oracleCount, match, tuple(defects))


def path_to_support(graph: ExchangeGraph, start: int) -> list[int] | None:
    """Shortest vertex path from ``start`` to a dissection sharing an arc with R."""
    R = set(graph.context.arcs)
    paths = nx.single_source_shortest_path(graph.to_networkx(), start)
    hits = [p for i, p in paths.items() if R & set(graph.vertices[i].arcs)]
    return min(hits, key=lambda p: (len(p), p[-1])) if hits else None


# ---------------------------------------------------------------------------
# Independent enumeration
# ---------------------------------------------------------------------------


def standard_arcs(R: PartialTaggedTriangulation, margin: int = 4, max_bound: int = 30) -> tuple[list[TaggedArc], int]:
    """R-standard arcs by bounded search, accepted once the count is stable."""
    return stable_tagged_arcs(R.surface, accept=lambda a: is_standard(a, R), margin=margin, max_bound=max_bound)


def enumerate_dissections(R: PartialTaggedTriangulation, margin: int = 4, max_bound: int = 30) -> list[Dissection]:
    """Maximal compatible sets of R-standard arcs, independent of any flip."""
    arcs, _ = standard_arcs(R, margin, max_bound)
    return [Dissection(R, c) for c in maximal_compatible_sets(arcs)]
