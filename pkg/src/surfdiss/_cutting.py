"""Triangulation records traced from arc systems, and cutting along an arc."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from ._cover import Cover, Walk, between, end_triangle, fan_frames, interleave
from .arc_engine import (
    CutResult,
    IdealArc,
    TaggedArc,
    adjacent_dart,
    dart_lift,
    darts_at,
    make_ideal,
    make_tagged,
    sort_crossings,
)
from .errors import DegenerateAfterCut, IncompatibleArc, InternalInconsistency
from .surface_model import MARKED, PUNCTURE, IdealTriangulationRecord, SurfaceModel, surface_from_record

DartId = tuple  # (label, end); label is an arc index or ("B", segment id)


@dataclass(frozen=True, eq=False)
class FaceRecord:
    """Faces of an ideal triangulation T° together with the boundary B."""

    surface: SurfaceModel
    walks: tuple[Walk, ...]
    record: IdealTriangulationRecord
    faces: tuple[tuple[DartId, DartId, DartId], ...]
    darts: dict  # vertex -> darts in anticlockwise order

    @cached_property
    def position(self) -> dict:
        """Dart -> (face, slot)."""
        return {d: (f, k) for f, ds in enumerate(self.faces) for k, d in enumerate(ds)}

    @cached_property
    def dart_info(self) -> dict:
        """Dart id -> Dart record (sort key, walk)."""
        return {(d.label, d.end): d for ds in self.darts.values() for d in ds}

    def vertex_of(self, d: DartId) -> int:
        return self._tail[d]

    @cached_property
    def _tail(self) -> dict:
        return {(d.label, d.end): v for v, ds in self.darts.items() for d in ds}


def alpha(d: DartId) -> DartId:
    return (d[0], 1 - d[1])


def face_trace(S: SurfaceModel, walks: Sequence[Walk]) -> FaceRecord:
    """Record whose triangles are the faces of the arc system ``walks`` plus the boundary."""
    labelled = list(enumerate(walks))
    darts = {v: darts_at(S, v, labelled) for v in range(len(S.points))}
    order = {(d.label, d.end): (v, k) for v, ds in darts.items() for k, d in enumerate(ds)}

    def phi(d: DartId) -> DartId:
        v, k = order[alpha(d)]
        ds = darts[v]
        if k == 0 and not S.is_puncture(v):
            raise InternalInconsistency("face walk left the surface")
        nd = ds[(k - 1) % len(ds)]
        return (nd.label, nd.end)

    seen: set = set()
    faces: list[tuple] = []
    for d in sorted(order, key=repr):
        if d in seen or (isinstance(d[0], tuple) and d[1] == 1):
            continue
        cyc = [d]
        while True:
            nd = phi(cyc[-1])
            if nd == cyc[0]:
                break
            cyc.append(nd)
            if len(cyc) > 3:
                raise InternalInconsistency("arc system is not a triangulation")
        if len(cyc) != 3:
            raise InternalInconsistency("arc system is not a triangulation")
        seen.update(cyc)
        faces.append(tuple(cyc))
    pos = {d: (f, k) for f, ds in enumerate(faces) for k, d in enumerate(ds)}
    n = len(walks)
    corners, twin, edges = [], [], []
    for ds in faces:
        corners.append(tuple(order[d][0] for d in ds))
        twin.append(tuple(pos.get(alpha(d)) if not (isinstance(d[0], tuple)) else None for d in ds))
        edges.append(tuple(d[0] if not isinstance(d[0], tuple) else n + d[0][1] for d in ds))
    rec = IdealTriangulationRecord(tuple(corners), tuple(twin), tuple(edges))
    rec.check()
    return FaceRecord(S, tuple(walks), rec, tuple(faces), darts)


# ---------------------------------------------------------------------------
# Moving curves between the base triangulation and a face record
# ---------------------------------------------------------------------------


def crossing_darts(S: SurfaceModel, F: FaceRecord, w: Walk) -> list[DartId]:
    """Darts of F crossed by the curve ``w``, each oriented with the curve's prior face on its left."""
    cover = Cover(S, w.tri)
    x, z, frames = cover.lift(w, (), 0)
    chords = {}
    for path in dict.fromkeys(frames):
        for k, fw in enumerate(F.walks):
            for a1, a2, _ in cover.lifts_through(fw, path):
                if interleave(x, z, a1, a2):
                    chords[(a1, a2)] = k
    ordered = sort_crossings(x, z, [(a1, a2, k) for (a1, a2), k in chords.items()])
    return [(k, 1) if between(x, a1, a2) else (k, 0) for a1, a2, k in ordered]


def to_face_walk(S: SurfaceModel, F: FaceRecord, w: Walk) -> Walk:
    """The curve ``w`` of the base triangulation, rewritten over the faces of F."""
    ds = crossing_darts(S, F, w)
    if not ds:
        for k, fw in enumerate(F.walks):
            if fw == w:
                f, p = F.position[(k, 0)]
                return Walk(f, p, (), (p + 1) % 3)
        raise InternalInconsistency("curve crosses nothing but is not an arc of the system")
    f0, s0 = F.position[ds[0]]
    exits = [s0]
    f, entry = F.position[alpha(ds[0])]
    for d in ds[1:]:
        g, s = F.position[d]
        if g != f:
            raise InternalInconsistency("crossing sequence skips a face")
        exits.append(s)
        f, entry = F.position[alpha(d)]
    out = Walk(f0, (s0 + 2) % 3, tuple(exits), (entry + 2) % 3)
    rec = F.record
    if rec.corners[f0][out.corner] != S.vertex(w.tri, w.corner):
        raise InternalInconsistency("face walk starts at the wrong vertex")
    return out


class _FaceLifter:
    """Lifts faces of F into the universal cover of the surface."""

    def __init__(self, S: SurfaceModel, F: FaceRecord, f0: int) -> None:
        self.S, self.F = S, F
        ds = F.faces[f0]
        k0 = next(k for k, d in enumerate(ds) if not isinstance(d[0], tuple))
        lab, e = ds[k0]
        w = F.walks[lab]
        self.cover = Cover(S, w.tri)
        _, _, frames = self.cover.lift(w, (), 0)
        tail, head = (frames[0], w.corner), (frames[-1], w.end)
        if e == 1:
            tail, head = head, tail
        self.current = self._complete(f0, k0, tail, head)

    def _complete(self, f: int, k: int, tail, head) -> dict:
        # each dart is stored as (frame carrying it at its tail, frame carrying it at its head)
        out = {k: (tail, head)}
        ds = self.F.faces[f]
        info = self.F.dart_info
        for step in (1, 2):
            prev = ds[(k + step - 1) % 3]
            nxt = ds[(k + step) % 3]
            h = out[(k + step - 1) % 3][1]
            v = self.F.vertex_of(nxt)
            ref = info[alpha(prev)]
            got = adjacent_dart(self.S, v, self.F.darts[v], ref.key, -1)
            if got is None or (got[0].label, got[0].end) != nxt:
                raise InternalInconsistency("face darts disagree with the rotation order")
            near, far = dart_lift(self.cover, h[0], h[1], ref.key, got[0], got[1])
            out[(k + step) % 3] = (near, far)
        return out

    def cross(self, f: int, s: int) -> tuple[int, int]:
        d = self.F.faces[f][s]
        tail, head = self.current[s]
        g, j = self.F.position[alpha(d)]
        self.current = self._complete(g, j, head, tail)
        return g, j

    def corner(self, k: int):
        return self.current[k][0]


def from_face_walk(S: SurfaceModel, F: FaceRecord, w: Walk) -> Walk:
    """Inverse of ``to_face_walk``: a walk over F's faces as a base-triangulation walk."""
    lifter = _FaceLifter(S, F, w.tri)
    start = lifter.corner(w.corner)
    f = w.tri
    for s in w.exits:
        f, _ = lifter.cross(f, s)
    end = lifter.corner(w.end)
    return lifter.cover.chord_walk(start[0], start[1], end[0], end[1])


# ---------------------------------------------------------------------------
# Completion to an ideal triangulation
# ---------------------------------------------------------------------------


def complete_ideal(S: SurfaceModel, arcs: Sequence[IdealArc], max_bound: int = 40) -> list[IdealArc]:
    """Greedy completion of compatible ideal arcs to an ideal triangulation, shortest arcs first."""
    from .arc_engine import interior_count
    from .enumeration import ideal_arcs

    chosen = list(arcs)
    keys = {x.key() for x in chosen}
    for allow_loops in (False, True):
        for bound in range(0, max_bound + 1):
            if len(chosen) >= S.n_arcs:
                break
            for x in ideal_arcs(S, bound, [c.walk for c in chosen]):
                if x.key() in keys or (x.enclosed is not None and not allow_loops):
                    continue
                if all(interior_count(S, x.walk, c.walk) == 0 for c in chosen):
                    chosen.append(x)
                    keys.add(x.key())
                    if len(chosen) >= S.n_arcs:
                        break
        if len(chosen) >= S.n_arcs:
            break
    if len(chosen) != S.n_arcs:
        raise InternalInconsistency("greedy completion did not reach a triangulation")
    return chosen


# ---------------------------------------------------------------------------
# Cutting
# ---------------------------------------------------------------------------


def _hugging_walk(S2: SurfaceModel, face: int, side: int, around_corner: int) -> Walk:
    """Arc from the other end of boundary ``side`` around the vertex at ``around_corner``."""
    cover = Cover(S2, face)
    v = S2.vertex(face, around_corner)
    n = S2.fan_size(v)
    if around_corner == side:
        if S2.sector_index[(face, side)][1] != 0:
            raise InternalInconsistency("cut side is not a first ray")
        p, c = fan_frames(cover, (), around_corner, n - 1)[-1]
        far = (p, (c + 2) % 3)
        return cover.chord_walk((), (side + 1) % 3, far[0], far[1])
    if S2.sector_index[(face, around_corner)][1] != n - 1:
        raise InternalInconsistency("cut side is not a last ray")
    p, c = fan_frames(cover, (), around_corner, -(n - 1))[-1]
    return cover.chord_walk((), side, p, (c + 1) % 3)


def cut_along(S: SurfaceModel, eta: TaggedArc) -> CutResult:
    x = IdealArc(S, eta.walk, eta.ends)
    T = complete_ideal(S, [x])
    F = face_trace(S, [a.walk for a in T])
    k_eta = 0
    rec = F.record
    # unglue the two sides carrying eta
    n = len(T)
    eta_slots = [(f, k) for f, ds in enumerate(F.faces) for k, d in enumerate(ds) if d[0] == k_eta]
    twin = [list(r) for r in rec.twin]
    for f, k in eta_slots:
        twin[f][k] = None
    # new vertices: classes of corners still glued together
    parent = {(f, c): (f, c) for f in range(rec.n_triangles) for c in range(3)}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for f in range(rec.n_triangles):
        for i in range(3):
            o = twin[f][i]
            if o is None:
                continue
            g, j = o
            for a, b in (((f, i), (g, (j + 1) % 3)), ((f, (i + 1) % 3), (g, j))):
                ra, rb = find(a), find(b)
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
    classes = sorted({find(a) for a in parent})
    vid = {r: k for k, r in enumerate(classes)}
    corner_vertex = {a: vid[find(a)] for a in parent}
    has_bd = {vid[r]: False for r in classes}
    for (f, c), v in corner_vertex.items():
        if twin[f][c] is None or twin[f][(c + 2) % 3] is None:
            has_bd[v] = True
    kinds = [MARKED if has_bd[k] else PUNCTURE for k in range(len(classes))]
    old_vertex = {corner_vertex[a]: rec.corners[a[0]][a[1]] for a in parent}
    relabel = {k: k - 1 for k in range(1, n)}
    nb = 0
    edges = []
    for f in range(rec.n_triangles):
        row = []
        for k in range(3):
            e = rec.edges[f][k]
            if e == k_eta or e >= n:
                row.append(None)
            else:
                row.append(relabel[e])
        edges.append(row)
    for f in range(rec.n_triangles):
        for k in range(3):
            if edges[f][k] is None:
                edges[f][k] = n - 1 + nb
                nb += 1
    new_rec = IdealTriangulationRecord(
        tuple(tuple(corner_vertex[(f, c)] for c in range(3)) for f in range(rec.n_triangles)),
        tuple(tuple(r) for r in twin),
        tuple(tuple(r) for r in edges),
    )
    if n - 1 == 0:
        raise DegenerateAfterCut("cutting leaves no arcs")
    S2 = surface_from_record(new_rec, kinds, n - 1)
    eta_tag = {eta.ends[e]: eta.tags[e] for e in (0, 1) if eta.tags[e]}

    def forward(g: TaggedArc) -> TaggedArc:
        from .arc_engine import intersection_number

        if g.surface != S:
            raise IncompatibleArc("arc lives on another surface")
        if g == eta or intersection_number(g, eta) != 0:
            raise IncompatibleArc("arc is not compatible with the cut arc")
        if g.walk == eta.walk:
            differ = [e for e in (0, 1) if g.tags[e] != eta.tags[e]]
            e = differ[0]
            end_corner_slot = _eta_end_slot(F, k_eta, e)
            f, k = end_corner_slot
            w2 = _hugging_walk(S2, f, k, k)
            return make_tagged(S2, w2, 0, 0, checked=False)
        w2 = to_face_walk(S, F, g.walk)
        tags = []
        for e, (f, c) in enumerate(((w2.tri, w2.corner), (end_triangle(S2, w2), w2.end))):
            v2 = S2.vertex(f, c)
            tags.append(g.tags[e] if S2.is_puncture(v2) else 0)
        return make_tagged(S2, w2, tags[0], tags[1], checked=False)

    def backward(g2: TaggedArc) -> TaggedArc:
        if g2.surface != S2:
            raise IncompatibleArc("arc lives on another surface")
        w = from_face_walk(S, F, g2.walk)
        xi = make_ideal(S, w)
        if xi.enclosed is not None:
            p = xi.enclosed
            if p not in eta.ends:
                raise InternalInconsistency("transported arc encloses a puncture away from the cut")
            tags = tuple(-t if eta.ends[e] == p else t for e, t in enumerate(eta.tags))
            return TaggedArc(S, eta.walk, eta.ends, tags)  # type: ignore[arg-type]
        tags = []
        ends2 = (g2.walk.tri, g2.walk.corner), (end_triangle(S2, g2.walk), g2.walk.end)
        for e, (f, c) in enumerate(ends2):
            v2 = S2.vertex(f, c)
            v = old_vertex[v2]
            if not S.is_puncture(v):
                tags.append(0)
            elif S2.is_puncture(v2):
                tags.append(g2.tags[e])
            else:
                tags.append(eta_tag[v])
        return make_tagged(S, w, tags[0], tags[1], checked=False)

    return CutResult(S, eta, S2, forward, backward)


def _eta_end_slot(F: FaceRecord, k_eta: int, e: int) -> tuple[int, int]:
    """A face side carrying eta, oriented so that its start corner is eta's end ``e``."""
    return F.position[(k_eta, e)]
