"""Punctured marked surfaces, ideal triangulation records and the tag/ideal constructions.

Conventions used throughout the package:

* A triangle lists its three corners anticlockwise. Side ``i`` runs from
  corner ``i`` to corner ``i + 1`` with the triangle on its left.
* ``twin[t][i] = (t2, i2)`` glues side ``i`` of ``t`` to side ``i2`` of ``t2``
  reversing orientation: corner ``i`` of ``t`` meets corner ``i2 + 1`` of ``t2``.
* An unglued side is a boundary segment, traversed with the surface on its
  left (from corner ``i`` to corner ``i + 1``).
* Marked points on a boundary component are labelled so that the tagged
  rotation sends position ``i`` to position ``i + 1``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import TYPE_CHECKING, Iterable, Mapping, Sequence

from .errors import DegenerateSurface, FoldedClosureViolated, IncompatibleArc, InternalInconsistency, NoBoundary

if TYPE_CHECKING:  # pragma: no cover
    from .arc_engine import IdealArc, TaggedArc

Slot = tuple[int, int]

MARKED = "marked"
PUNCTURE = "puncture"


# ---------------------------------------------------------------------------
# Specs and points
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SurfaceSpec:
    """Topological type: genus, marked points per boundary component, punctures."""

    genus: int
    boundary: tuple[int, ...]
    punctures: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "boundary", tuple(int(k) for k in self.boundary))

    @property
    def rank(self) -> int:
        b = len(self.boundary)
        return 6 * self.genus + 3 * b + 3 * self.punctures + sum(self.boundary) - 6

    def validate(self) -> None:
        if self.genus < 0 or self.punctures < 0:
            raise DegenerateSurface("genus and puncture count must be non-negative")
        if not self.boundary:
            raise NoBoundary("at least one boundary component is required")
        if any(k < 1 for k in self.boundary):
            raise DegenerateSurface("every boundary component needs a marked point")
        if self.rank < 1:
            raise DegenerateSurface(f"rank {self.rank} < 1")
        if self.genus == 0 and len(self.boundary) == 1:
            k = self.boundary[0]
            if self.punctures == 0 and k <= 3:
                raise DegenerateSurface(f"unpunctured {k}-gon")
            if self.punctures == 1 and k == 1:
                raise DegenerateSurface("once-punctured monogon")

    def to_json(self) -> dict:
        return {"genus": self.genus, "boundary": list(self.boundary), "punctures": self.punctures}

    @classmethod
    def from_json(cls, data: Mapping) -> "SurfaceSpec":
        return cls(int(data["genus"]), tuple(int(k) for k in data["boundary"]), int(data["punctures"]))


@dataclass(frozen=True)
class Point:
    """A marked point (on a boundary component) or a puncture."""

    id: int
    kind: str
    component: int | None = None
    position: int | None = None

    @property
    def is_puncture(self) -> bool:
        return self.kind == PUNCTURE


@dataclass(frozen=True)
class BoundarySegment:
    """Boundary segment from ``start`` to ``end`` in the surface-on-left traversal."""

    id: int
    start: int
    end: int
    slot: Slot


# ---------------------------------------------------------------------------
# Triangulation records
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SelfFolded:
    """A self-folded triangle: folded side, enclosing loop and enclosed puncture."""

    triangle: int
    folded: int
    nonfolded: int
    puncture: int


@dataclass(frozen=True)
class IdealTriangulationRecord:
    """Triangles with corner vertex ids, a side gluing and per-side edge labels."""

    corners: tuple[tuple[int, int, int], ...]
    twin: tuple[tuple[Slot | None, Slot | None, Slot | None], ...]
    edges: tuple[tuple[int, int, int], ...]
    selfFolded: tuple[SelfFolded, ...] = ()

    def __post_init__(self) -> None:
        if not self.selfFolded:
            object.__setattr__(self, "selfFolded", _find_self_folded(self.corners, self.twin, self.edges))

    @property
    def n_triangles(self) -> int:
        return len(self.corners)

    def slots(self) -> Iterable[Slot]:
        for t in range(len(self.corners)):
            for i in range(3):
                yield (t, i)

    def check(self) -> None:
        """Raise ``InternalInconsistency`` unless the gluing is a valid involution."""
        for t, i in self.slots():
            other = self.twin[t][i]
            if other is None:
                continue
            t2, i2 = other
            if (t2, i2) == (t, i) or self.twin[t2][i2] != (t, i):
                raise InternalInconsistency(f"gluing is not an involution at {(t, i)}")
            if self.edges[t][i] != self.edges[t2][i2]:
                raise InternalInconsistency(f"edge label mismatch at {(t, i)}")
            if self.corners[t][i] != self.corners[t2][(i2 + 1) % 3]:
                raise InternalInconsistency(f"corner mismatch across {(t, i)}")
            if self.corners[t][(i + 1) % 3] != self.corners[t2][i2]:
                raise InternalInconsistency(f"corner mismatch across {(t, i)}")
        for sf in self.selfFolded:
            if sf.folded == sf.nonfolded:
                raise InternalInconsistency("self-folded entry with equal sides")

    def flip(self, t1: int, i: int) -> "IdealTriangulationRecord":
        """Flip the diagonal at side ``i`` of triangle ``t1``; the edge keeps its label."""
        other = self.twin[t1][i]
        if other is None:
            raise InternalInconsistency("cannot flip a boundary side")
        t2, i2 = other
        if t2 == t1:
            raise InternalInconsistency("cannot flip the folded side of a self-folded triangle")
        corners = [list(c) for c in self.corners]
        twin = [list(x) for x in self.twin]
        edges = [list(e) for e in self.edges]
        c1, c2 = self.corners[t1], self.corners[t2]
        a, b, c = c1[i], c1[(i + 1) % 3], c1[(i + 2) % 3]
        d = c2[(i2 + 2) % 3]
        moved = {
            (t1, (i + 2) % 3): (t1, 0),
            (t2, (i2 + 1) % 3): (t1, 1),
            (t2, (i2 + 2) % 3): (t2, 0),
            (t1, (i + 1) % 3): (t2, 1),
        }
        diag = self.edges[t1][i]
        corners[t1] = [c, a, d]
        corners[t2] = [d, b, c]
        for old, new in moved.items():
            partner = self.twin[old[0]][old[1]]
            if partner is not None:
                partner = moved.get(partner, partner)
            twin[new[0]][new[1]] = partner
            edges[new[0]][new[1]] = self.edges[old[0]][old[1]]
            if partner is not None and partner not in moved.values():
                twin[partner[0]][partner[1]] = new
        twin[t1][2] = (t2, 2)
        twin[t2][2] = (t1, 2)
        edges[t1][2] = diag
        edges[t2][2] = diag
        rec = IdealTriangulationRecord(
            tuple(tuple(x) for x in corners),  # type: ignore[misc]
            tuple(tuple(x) for x in twin),  # type: ignore[misc]
            tuple(tuple(x) for x in edges),  # type: ignore[misc]
        )
        rec.check()
        return rec

    def to_json(self) -> dict:
        return {
            "triangles": [list(c) for c in self.corners],
            "gluing": [[list(s) if s is not None else None for s in row] for row in self.twin],
            "edges": [list(e) for e in self.edges],
            "selfFolded": [
                {"triangle": s.triangle, "folded": s.folded, "nonfolded": s.nonfolded, "puncture": s.puncture}
                for s in self.selfFolded
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "IdealTriangulationRecord":
        return cls(
            tuple(tuple(int(v) for v in c) for c in data["triangles"]),  # type: ignore[misc]
            tuple(
                tuple(tuple(int(v) for v in s) if s is not None else None for s in row)  # type: ignore[misc]
                for row in data["gluing"]
            ),
            tuple(tuple(int(v) for v in e) for e in data["edges"]),  # type: ignore[misc]
        )


def _find_self_folded(corners, twin, edges) -> tuple[SelfFolded, ...]:
    found = []
    for t, tw in enumerate(twin):
        for i in range(3):
            other = tw[i]
            if other is not None and other[0] == t and other[1] == (i + 1) % 3:
                # sides i and i+1 coincide; corner i+1 is the enclosed puncture
                found.append(SelfFolded(t, edges[t][i], edges[t][(i + 2) % 3], corners[t][(i + 1) % 3]))
    return tuple(found)


# ---------------------------------------------------------------------------
# Surface model
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SurfaceModel:
    """A surface together with the triangulation over which curves are written."""

    spec: SurfaceSpec | None
    points: tuple[Point, ...]
    boundarySegments: tuple[BoundarySegment, ...]
    baseTriangulation: IdealTriangulationRecord
    n_arcs: int
    orientation: str = "surface-left"
    components: tuple[SurfaceSpec, ...] = field(default=())

    # --- basic accessors -------------------------------------------------

    @property
    def record(self) -> IdealTriangulationRecord:
        return self.baseTriangulation

    def is_puncture(self, v: int) -> bool:
        return self.points[v].kind == PUNCTURE

    @cached_property
    def marked_points(self) -> tuple[int, ...]:
        return tuple(p.id for p in self.points if p.kind == MARKED)

    @cached_property
    def punctures(self) -> tuple[int, ...]:
        return tuple(p.id for p in self.points if p.kind == PUNCTURE)

    def vertex(self, t: int, c: int) -> int:
        return self.baseTriangulation.corners[t][c % 3]

    def twin(self, t: int, s: int) -> Slot | None:
        return self.baseTriangulation.twin[t][s % 3]

    def edge(self, t: int, s: int) -> int:
        return self.baseTriangulation.edges[t][s % 3]

    def is_boundary_slot(self, t: int, s: int) -> bool:
        return self.baseTriangulation.twin[t][s % 3] is None

    # --- fans --------------------------------------------------------------

    @cached_property
    def fans(self) -> dict[int, tuple[Slot, ...]]:
        """Sectors around each vertex in anticlockwise order."""
        rec = self.baseTriangulation
        seen: set[Slot] = set()
        fans: dict[int, tuple[Slot, ...]] = {}
        # marked points first: start where the first ray is a boundary side
        for t, c in rec.slots():
            if rec.twin[t][c] is None:
                fan = [(t, c)]
                while True:
                    tt, cc = fan[-1]
                    nxt = rec.twin[tt][(cc + 2) % 3]
                    if nxt is None:
                        break
                    fan.append((nxt[0], nxt[1]))
                v = rec.corners[t][c]
                if v in fans:
                    raise InternalInconsistency(f"vertex {v} has two boundary fans")
                fans[v] = tuple(fan)
                seen.update(fan)
        for t, c in rec.slots():
            if (t, c) in seen:
                continue
            fan = [(t, c)]
            while True:
                tt, cc = fan[-1]
                nxt = rec.twin[tt][(cc + 2) % 3]
                if nxt is None:
                    raise InternalInconsistency("interior fan reaches the boundary")
                if (nxt[0], nxt[1]) == (t, c):
                    break
                fan.append((nxt[0], nxt[1]))
            v = rec.corners[t][c]
            if v in fans:
                raise InternalInconsistency(f"vertex {v} has two fans")
            start = min(range(len(fan)), key=lambda k: fan[k])
            fans[v] = tuple(fan[start:] + fan[:start])
            seen.update(fan)
        return fans

    @cached_property
    def sector_index(self) -> dict[Slot, tuple[int, int]]:
        """Map a sector to (vertex, position in that vertex's fan)."""
        out: dict[Slot, tuple[int, int]] = {}
        for v, fan in self.fans.items():
            for k, sec in enumerate(fan):
                out[sec] = (v, k)
        return out

    def fan_size(self, v: int) -> int:
        return len(self.fans[v])

    # --- boundary navigation ---------------------------------------------

    @cached_property
    def _segment_by_start(self) -> dict[int, BoundarySegment]:
        return {s.start: s for s in self.boundarySegments}

    @cached_property
    def _segment_by_end(self) -> dict[int, BoundarySegment]:
        return {s.end: s for s in self.boundarySegments}

    def succ(self, m: int) -> int:
        """Next marked point along the surface-on-left traversal."""
        return self._segment_by_start[m].end

    def pred(self, m: int) -> int:
        """Previous marked point along the surface-on-left traversal."""
        return self._segment_by_end[m].start

    def rotate_marked(self, m: int, direction: int) -> int:
        """Endpoint move of the tagged rotation (+1) or its inverse (-1)."""
        return self.pred(m) if direction > 0 else self.succ(m)

    def segment_out(self, m: int) -> BoundarySegment:
        return self._segment_by_start[m]

    def segment_in(self, m: int) -> BoundarySegment:
        return self._segment_by_end[m]

    @property
    def rank(self) -> int:
        return self.n_arcs

    @cached_property
    def edge_slots(self) -> dict[int, tuple[Slot, ...]]:
        """Sides carrying each edge label, sorted."""
        out: dict[int, list[Slot]] = {}
        for t, i in self.baseTriangulation.slots():
            out.setdefault(self.baseTriangulation.edges[t][i], []).append((t, i))
        return {e: tuple(sorted(v)) for e, v in out.items()}

    # --- serialization -----------------------------------------------------

    def to_json(self) -> dict:
        return {
            "spec": self.spec.to_json() if self.spec is not None else None,
            "components": [c.to_json() for c in self.components],
            "points": [
                {"id": p.id, "kind": p.kind, "component": p.component, "position": p.position} for p in self.points
            ],
            "boundarySegments": [
                {"id": s.id, "start": s.start, "end": s.end, "slot": list(s.slot)} for s in self.boundarySegments
            ],
            "baseTriangulation": self.baseTriangulation.to_json(),
            "arcs": self.n_arcs,
            "orientation": self.orientation,
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "SurfaceModel":
        spec = SurfaceSpec.from_json(data["spec"]) if data.get("spec") else None
        return cls(
            spec,
            tuple(Point(int(p["id"]), p["kind"], p["component"], p["position"]) for p in data["points"]),
            tuple(
                BoundarySegment(int(s["id"]), int(s["start"]), int(s["end"]), (int(s["slot"][0]), int(s["slot"][1])))
                for s in data["boundarySegments"]
            ),
            IdealTriangulationRecord.from_json(data["baseTriangulation"]),
            int(data["arcs"]),
            data.get("orientation", "surface-left"),
            tuple(SurfaceSpec.from_json(c) for c in data.get("components", [])),
        )

    def dumps(self) -> str:
        return self._dump

    @cached_property
    def _dump(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))

    def __eq__(self, other: object) -> bool:
        return self is other or (isinstance(other, SurfaceModel) and self._dump == other._dump)

    def __hash__(self) -> int:
        return hash(self._dump)


# ---------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------


class _UnionFind:
    def __init__(self, n: int) -> None:
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def _point_table(spec: SurfaceSpec) -> tuple[tuple[Point, ...], dict[tuple[int, int], int], list[int]]:
    points: list[Point] = []
    marked: dict[tuple[int, int], int] = {}
    for j, k in enumerate(spec.boundary):
        for i in range(k):
            marked[(j, i)] = len(points)
            points.append(Point(len(points), MARKED, j, i))
    punct = []
    for q in range(spec.punctures):
        punct.append(len(points))
        points.append(Point(len(points), PUNCTURE, None, q))
    return tuple(points), marked, punct


def _polygon_word(spec: SurfaceSpec, marked, punct) -> list[tuple[int, tuple | None]]:
    """Corners of the fundamental polygon, each with the label of the side after it."""
    k0 = spec.boundary[0]
    x = marked[(0, 0)]
    word: list[tuple[int, tuple | None]] = [(marked[(0, (-i) % k0)], None) for i in range(k0)]
    for j in range(1, len(spec.boundary)):
        kj = spec.boundary[j]
        y0 = marked[(j, 0)]
        word.append((x, ("f", j, 1)))
        word.append((y0, None))
        for i in range(1, kj):
            word.append((marked[(j, (-i) % kj)], None))
        word.append((y0, ("f", j, -1)))
    for h in range(spec.genus):
        word += [(x, ("a", h, 1)), (x, ("b", h, 1)), (x, ("a", h, -1)), (x, ("b", h, -1))]
    for q, p in enumerate(punct):
        word += [(x, ("e", q, 1)), (p, ("e", q, -1))]
    return word


def _fan_record(word: list[tuple[int, tuple | None]]) -> tuple[IdealTriangulationRecord, int, int]:
    n_sides = len(word)
    n_tri = n_sides - 2
    corners = [(word[0][0], word[i + 1][0], word[i + 2][0]) for i in range(n_tri)]
    twin: list[list[Slot | None]] = [[None, None, None] for _ in range(n_tri)]
    edges = [[-1, -1, -1] for _ in range(n_tri)]

    def side_slot(s: int) -> Slot:
        if s == 0:
            return (0, 0)
        if s == n_sides - 1:
            return (n_tri - 1, 2)
        return (s - 1, 1)

    next_edge = 0
    for i in range(n_tri - 1):
        twin[i][2] = (i + 1, 0)
        twin[i + 1][0] = (i, 2)
        edges[i][2] = edges[i + 1][0] = next_edge
        next_edge += 1
    pairs: dict[tuple, dict[int, int]] = {}
    for s, (_, label) in enumerate(word):
        if label is not None:
            pairs.setdefault(label[:2], {})[label[2]] = s
    for key in sorted(pairs, key=lambda k: pairs[k][1]):
        s_pos, s_neg = pairs[key][1], pairs[key][-1]
        a, b = side_slot(s_pos), side_slot(s_neg)
        twin[a[0]][a[1]] = b
        twin[b[0]][b[1]] = a
        edges[a[0]][a[1]] = edges[b[0]][b[1]] = next_edge
        next_edge += 1
    n_arcs = next_edge
    for s, (_, label) in enumerate(word):
        if label is None:
            t, i = side_slot(s)
            edges[t][i] = next_edge
            next_edge += 1
    rec = IdealTriangulationRecord(
        tuple(corners),  # type: ignore[arg-type]
        tuple(tuple(x) for x in twin),  # type: ignore[misc]
        tuple(tuple(x) for x in edges),  # type: ignore[misc]
    )
    return rec, n_arcs, next_edge - n_arcs


def _remove_self_folded(rec: IdealTriangulationRecord) -> IdealTriangulationRecord:
    for _ in range(len(rec.corners) + 1):
        if not rec.selfFolded:
            return rec
        sf = rec.selfFolded[0]
        t = sf.triangle
        free = [i for i in range(3) if rec.twin[t][i] is not None and rec.twin[t][i][0] != t]
        rec = rec.flip(t, free[0])
    raise InternalInconsistency("could not remove self-folded triangles")


def _boundary_segments(rec: IdealTriangulationRecord, n_arcs: int) -> tuple[BoundarySegment, ...]:
    segs = []
    for t, i in rec.slots():
        if rec.twin[t][i] is None:
            segs.append(BoundarySegment(rec.edges[t][i], rec.corners[t][i], rec.corners[t][(i + 1) % 3], (t, i)))
    segs.sort(key=lambda s: s.id)
    return tuple(segs)


def _euler_check(rec: IdealTriangulationRecord, n_vertices: int, n_arcs: int, n_bd: int, chi: int) -> None:
    uf = _UnionFind(3 * rec.n_triangles)
    for t, i in rec.slots():
        other = rec.twin[t][i]
        if other is not None:
            t2, i2 = other
            uf.union(3 * t + i, 3 * t2 + (i2 + 1) % 3)
            uf.union(3 * t + (i + 1) % 3, 3 * t2 + i2)
    classes: dict[int, set[int]] = {}
    for t, i in rec.slots():
        classes.setdefault(uf.find(3 * t + i), set()).add(rec.corners[t][i])
    if any(len(v) != 1 for v in classes.values()) or len(classes) != n_vertices:
        raise InternalInconsistency("corner identification does not match vertex labels")
    if n_vertices - (n_arcs + n_bd) + rec.n_triangles != chi:
        raise InternalInconsistency("Euler characteristic mismatch")


def build_surface(spec: SurfaceSpec | Mapping) -> SurfaceModel:
    """Build a surface with its deterministic fan-and-cone base triangulation."""
    if not isinstance(spec, SurfaceSpec):
        spec = SurfaceSpec.from_json(spec)
    spec.validate()
    points, marked, punct = _point_table(spec)
    word = _polygon_word(spec, marked, punct)
    rec, n_arcs, n_bd = _fan_record(word)
    rec.check()
    rec = _remove_self_folded(rec)
    if n_arcs != spec.rank:
        raise InternalInconsistency(f"arc count {n_arcs} differs from rank {spec.rank}")
    _euler_check(rec, len(points), n_arcs, n_bd, 2 - 2 * spec.genus - len(spec.boundary))
    model = SurfaceModel(spec, points, _boundary_segments(rec, n_arcs), rec, n_arcs, components=(spec,))
    _ = model.fans
    return model


def surface_from_record(
    rec: IdealTriangulationRecord, kinds: Sequence[str], n_arcs: int
) -> SurfaceModel:
    """Wrap an arbitrary triangulation record (e.g. a cut surface) as a SurfaceModel.

    Vertex ids must be ``0..len(kinds)-1``; edge labels below ``n_arcs`` are arcs.
    Points are relabelled by boundary component in traversal order.
    """
    rec.check()
    segs = _boundary_segments(rec, n_arcs)
    by_start = {s.start: s for s in segs}
    comp_of: dict[int, tuple[int, int]] = {}
    comps: list[list[int]] = []
    for s in segs:
        if s.start in comp_of:
            continue
        cycle = [s.start]
        cur = s.end
        while cur != s.start:
            cycle.append(cur)
            cur = by_start[cur].end
        # positions increase against the traversal direction
        ordered = [cycle[0]] + cycle[1:][::-1]
        for pos, v in enumerate(ordered):
            comp_of[v] = (len(comps), pos)
        comps.append(ordered)
    points = []
    for v, kind in enumerate(kinds):
        if kind == MARKED:
            c, pos = comp_of[v]
            points.append(Point(v, MARKED, c, pos))
        else:
            points.append(Point(v, PUNCTURE, None, v))
    # connected components of the triangle complex
    uf = _UnionFind(rec.n_triangles)
    for t, i in rec.slots():
        other = rec.twin[t][i]
        if other is not None:
            uf.union(t, other[0])
    groups: dict[int, list[int]] = {}
    for t in range(rec.n_triangles):
        groups.setdefault(uf.find(t), []).append(t)
    specs = []
    for tris in sorted(groups.values()):
        verts = {rec.corners[t][i] for t in tris for i in range(3)}
        sides = [(t, i) for t in tris for i in range(3)]
        n_glued = sum(1 for t, i in sides if rec.twin[t][i] is not None) // 2
        n_bd = sum(1 for t, i in sides if rec.twin[t][i] is None)
        bcomps = sorted({comp_of[v][0] for v in verts if kinds[v] == MARKED})
        chi = len(verts) - n_glued - n_bd + len(tris)
        genus = (2 - chi - len(bcomps)) // 2
        specs.append(
            SurfaceSpec(
                genus,
                tuple(len(comps[c]) for c in bcomps),
                sum(1 for v in verts if kinds[v] == PUNCTURE),
            )
        )
    spec = specs[0] if len(specs) == 1 else None
    return SurfaceModel(spec, tuple(points), segs, rec, n_arcs, components=tuple(specs))


# ---------------------------------------------------------------------------
# Partial tagged triangulations and the tag <-> ideal constructions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IdealFragment:
    """Partial ideal triangulation ``R°`` together with the map from tagged arcs."""

    arcs: tuple["IdealArc", ...]
    arcMap: tuple[int, ...]
    selfFolded: tuple[tuple[int, int, int], ...]

    def image(self, k: int) -> "IdealArc":
        return self.arcs[self.arcMap[k]]

    def folded_partner(self, j: int) -> tuple[int, int] | None:
        """For a folded side index, return (nonfolded index, puncture)."""
        for eps, eps1, p in self.selfFolded:
            if eps1 == j:
                return eps, p
        return None

    def nonfolded_partner(self, j: int) -> tuple[int, int] | None:
        """For a loop index, return (folded index, puncture)."""
        for eps, eps1, p in self.selfFolded:
            if eps == j:
                return eps1, p
        return None


@dataclass(frozen=True, eq=False)
class PartialTaggedTriangulation:
    """A pairwise compatible set of tagged arcs with its κ-map and ideal form."""

    surface: SurfaceModel
    arcs: tuple["TaggedArc", ...]
    kappa: Mapping[int, int]
    idealForm: IdealFragment

    def __len__(self) -> int:
        return len(self.arcs)

    def __iter__(self):
        return iter(self.arcs)

    def __contains__(self, arc: object) -> bool:
        return arc in self.arcs

    def index(self, arc: "TaggedArc") -> int:
        return self.arcs.index(arc)

    @property
    def touched(self) -> frozenset[int]:
        return frozenset(self.kappa)

    def key(self) -> tuple:
        return tuple(a.key() for a in self.arcs)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, PartialTaggedTriangulation)
            and self.key() == other.key()
            and self.surface == other.surface
        )

    def __hash__(self) -> int:
        return hash((self.key(), self.surface))


def compute_kappa(arcs: Iterable["TaggedArc"]) -> dict[int, int]:
    """κ-map: the common tag at each touched puncture, or 0 when tags differ."""
    tags: dict[int, set[int]] = {}
    for a in arcs:
        for end in (0, 1):
            tag = a.tags[end]
            if tag != 0:
                tags.setdefault(a.ends[end], set()).add(tag)
    return {p: (next(iter(s)) if len(s) == 1 else 0) for p, s in sorted(tags.items())}


def partial_triangulation(
    surface: SurfaceModel, arcs: Iterable["TaggedArc"], check: bool = True
) -> PartialTaggedTriangulation:
    """Build a partial tagged triangulation, verifying pairwise compatibility."""
    from .arc_engine import intersection_number

    arcs = tuple(sorted(set(arcs), key=lambda a: a.key()))
    if check:
        for i in range(len(arcs)):
            for j in range(i + 1, len(arcs)):
                if intersection_number(arcs[i], arcs[j]) != 0:
                    raise IncompatibleArc(f"arcs {i} and {j} are not compatible")
    kappa = compute_kappa(arcs)
    frag = _ideal_fragment(surface, arcs, kappa)
    return PartialTaggedTriangulation(surface, arcs, kappa, frag)


def _ideal_fragment(surface: SurfaceModel, arcs: tuple, kappa: Mapping[int, int]) -> IdealFragment:
    from .arc_engine import enclosing_loop, ideal_arc_of

    ideal: list = []
    index: dict = {}
    amap: list[int] = []
    folded: list[tuple[int, int, int]] = []

    def add(x) -> int:
        k = x.key()
        if k not in index:
            index[k] = len(ideal)
            ideal.append(x)
        return index[k]

    for a in arcs:
        notched = [a.ends[e] for e in (0, 1) if a.tags[e] == -1 and kappa.get(a.ends[e]) == 0]
        if notched:
            # the notched copy at a κ=0 puncture becomes the loop around it
            p = notched[0]
            eps1 = add(ideal_arc_of(a))
            loop = add(enclosing_loop(a, p))
            amap.append(loop)
            folded.append((loop, eps1, p))
        else:
            amap.append(add(ideal_arc_of(a)))
    return IdealFragment(tuple(ideal), tuple(amap), tuple(sorted(set(folded))))


def ideal_form(R: PartialTaggedTriangulation) -> IdealFragment:
    """R° with the arc map γ ↦ γ°."""
    return R.idealForm


def tagged_form(surface: SurfaceModel, ideal_arcs: Iterable["IdealArc"]) -> PartialTaggedTriangulation:
    """R× for a partial ideal triangulation, given as a collection of ideal arcs."""
    from .arc_engine import folded_side_of_loop, tagged_of_ideal

    ideal_arcs = list(ideal_arcs)
    keys = {x.key() for x in ideal_arcs}
    out = []
    for x in ideal_arcs:
        if x.is_enclosing_loop:
            inner = folded_side_of_loop(x)
            if inner.key() not in keys:
                raise FoldedClosureViolated("loop enclosing a puncture without its folded side")
            out.append(tagged_of_ideal(inner, notch=x.enclosed))
        else:
            out.append(tagged_of_ideal(x))
    return partial_triangulation(surface, out)


def retag(delta: "TaggedArc", R: PartialTaggedTriangulation) -> "TaggedArc":
    """δ^R: flip the tags of δ at touched punctures with κ < 0."""
    flips = {p for p, k in R.kappa.items() if k < 0}
    return delta.with_tags_flipped(flips)


def is_admissible(surface: SurfaceModel, ideal: IdealFragment | PartialTaggedTriangulation) -> bool:
    """True iff every puncture is enclosed by a self-folded triangle."""
    frag = ideal.idealForm if isinstance(ideal, PartialTaggedTriangulation) else ideal
    enclosed = {p for _, _, p in frag.selfFolded}
    return all(p in enclosed for p in surface.punctures)
