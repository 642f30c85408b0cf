"""Tagged arcs as reduced walks: normalization, intersections, rotations and cutting."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from ._cover import (
    Cover,
    between,
    Walk,
    canonical,
    closed_reduce,
    edge_slot,
    end_triangle,
    end_vertex,
    fan_frames,
    fan_steps,
    interleave,
    oriented_key,
    reduce_path,
    reverse_walk,
    same_cycle,
    start_vertex,
    walk_triangles,
)
from .errors import (
    BoundaryParallel,
    IllegalMonogonCutout,
    IncompatibleArc,
    InternalInconsistency,
    InvalidArc,
    NullHomotopic,
    SelfIntersecting,
)
from .surface_model import (
    PartialTaggedTriangulation,
    SurfaceModel,
    partial_triangulation,
)

# ---------------------------------------------------------------------------
# Arc records
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IdealArc:
    """An untagged arc, possibly a loop enclosing a single puncture."""

    surface: SurfaceModel = field(compare=False, repr=False)
    walk: Walk
    ends: tuple[int, int]
    enclosed: int | None = None

    def key(self) -> tuple:
        return ("I", self.walk.key())

    @property
    def is_enclosing_loop(self) -> bool:
        return self.enclosed is not None

    def __lt__(self, other: "IdealArc") -> bool:
        return self.key() < other.key()


@dataclass(frozen=True)
class TaggedArc:
    """A tagged arc: canonical walk, endpoint ids and tags (0 at marked points)."""

    surface: SurfaceModel = field(compare=False, repr=False)
    walk: Walk
    ends: tuple[int, int]
    tags: tuple[int, int]

    def key(self) -> tuple:
        return (self.walk.key(), self.tags)

    def __lt__(self, other: "TaggedArc") -> bool:
        return self.key() < other.key()

    @property
    def underlying(self) -> IdealArc:
        return IdealArc(self.surface, self.walk, self.ends)

    def tag_at(self, end: int) -> int:
        return self.tags[end]

    def with_tags_flipped(self, punctures: Iterable[int]) -> "TaggedArc":
        flip = set(punctures)
        tags = tuple(-t if (t != 0 and self.ends[e] in flip) else t for e, t in enumerate(self.tags))
        return TaggedArc(self.surface, self.walk, self.ends, tags)  # type: ignore[arg-type]

    def with_tags(self, tags: Mapping[int, int]) -> "TaggedArc":
        """Replace tags at the given punctures."""
        new = tuple(tags.get(self.ends[e], t) if t != 0 else 0 for e, t in enumerate(self.tags))
        return TaggedArc(self.surface, self.walk, self.ends, new)  # type: ignore[arg-type]

    def to_json(self) -> dict:
        return arc_literal(self)

    def __repr__(self) -> str:
        def end(e: int) -> str:
            v = self.ends[e]
            if self.tags[e] == 0:
                return f"m{v}"
            return f"p{v}{'+' if self.tags[e] > 0 else '-'}"

        return f"Arc({end(0)}->{end(1)} via {list(self.walk.exits)}@{self.walk.tri}.{self.walk.corner})"


def _end_tag(S: SurfaceModel, v: int, tag: int) -> int:
    if not S.is_puncture(v):
        return 0
    if tag not in (1, -1):
        raise InvalidArc(f"puncture {v} needs a tag of +1 or -1")
    return tag


def make_ideal(S: SurfaceModel, w: Walk, allow_loop: bool = True) -> IdealArc:
    """Canonical ideal arc for a reduced walk, after validity checks."""
    cw, _ = canonical(S, w)
    ends = (start_vertex(S, cw), end_vertex(S, cw))
    if interior_count(S, cw, cw, same=True) > 0:
        raise SelfIntersecting("curve crosses itself")
    enclosed = None
    if ends[0] == ends[1]:
        enclosed = enclosed_puncture(S, cw)
        if enclosed is not None and not allow_loop:
            raise IllegalMonogonCutout("loop cuts out a once-punctured monogon")
    return IdealArc(S, cw, ends, enclosed)


def make_tagged(S: SurfaceModel, w: Walk, tag0: int = 1, tag1: int = 1, checked: bool = True) -> TaggedArc:
    """Canonical tagged arc from a reduced walk; tags refer to the ends of ``w``."""
    cw, rev = canonical(S, w)
    if rev:
        tag0, tag1 = tag1, tag0
    ends = (start_vertex(S, cw), end_vertex(S, cw))
    tags = (_end_tag(S, ends[0], tag0), _end_tag(S, ends[1], tag1))
    if ends[0] == ends[1] and S.is_puncture(ends[0]) and tags[0] != tags[1]:
        raise InvalidArc("both ends at one puncture must carry the same tag")
    if checked:
        if interior_count(S, cw, cw, same=True) > 0:
            raise SelfIntersecting("curve crosses itself")
        if ends[0] == ends[1] and enclosed_puncture(S, cw) is not None:
            raise IllegalMonogonCutout("loop cuts out a once-punctured monogon")
    return TaggedArc(S, cw, ends, tags)  # type: ignore[arg-type]


def ideal_arc_of(a: TaggedArc) -> IdealArc:
    return IdealArc(a.surface, a.walk, a.ends)


def tagged_of_ideal(x: IdealArc, notch: int | None = None) -> TaggedArc:
    """Plain tagging of an ideal arc; ``notch`` gives tag -1 at that puncture."""
    S = x.surface
    tags = tuple((-1 if v == notch else 1) if S.is_puncture(v) else 0 for v in x.ends)
    return TaggedArc(S, x.walk, x.ends, tags)  # type: ignore[arg-type]


# ---------------------------------------------------------------------------
# Literal parsing and normalization
# ---------------------------------------------------------------------------


def _corner_of(S: SurfaceModel, t: int, v: int, prefer: int) -> int:
    if S.vertex(t, prefer) == v:
        return prefer % 3
    hits = [c for c in range(3) if S.vertex(t, c) == v]
    if len(hits) != 1:
        raise InvalidArc(f"endpoint {v} is not determined in triangle {t}")
    return hits[0]


def walk_from_word(S: SurfaceModel, v_from: int, v_to: int, word: Sequence[Sequence[int]], edge: int | None = None) -> Walk:
    """Reduce a crossing word given as ``[[edge, side], ...]`` to a walk."""
    if not word:
        if edge is None:
            if v_from == v_to:
                raise NullHomotopic("empty word between equal endpoints")
            raise InvalidArc("a length-0 arc needs its base edge")
        if edge not in S.edge_slots:
            raise InvalidArc(f"unknown edge {edge}")
        for t, s in S.edge_slots[edge]:
            if S.vertex(t, s) == v_from and S.vertex(t, s + 1) == v_to:
                w = Walk(t, s, (), (s + 1) % 3)
                break
            if S.vertex(t, s + 1) == v_from and S.vertex(t, s) == v_to:
                w = Walk(t, (s + 1) % 3, (), s)
                break
        else:
            raise InvalidArc("edge does not join the given endpoints")
        if S.is_boundary_slot(*edge_slot(w)):
            raise BoundaryParallel("arc is a boundary segment")
        return w
    slots = []
    for item in word:
        e, side = int(item[0]), int(item[1])
        if e not in S.edge_slots or side not in (0, 1) or len(S.edge_slots[e]) != 2:
            raise InvalidArc(f"bad crossing {item}")
        slots.append(S.edge_slots[e][side])
    t0, s0 = slots[0]
    c0 = _corner_of(S, t0, v_from, s0 + 2)
    t = t0
    crossings = []
    for k, (tt, s) in enumerate(slots):
        if tt != t:
            raise InvalidArc(f"crossing {k} does not leave the current triangle")
        crossings.append(s)
        t, j = S.twin(tt, s)  # type: ignore[misc]
    c1 = _corner_of(S, t, v_to, j + 2)
    return reduce_path(S, (t0, c0), crossings, c1)


def _tag_lookup(tags: Mapping, key: str, v: int) -> int:
    if key in tags:
        return int(tags[key])
    if str(v) in tags:
        return int(tags[str(v)])
    return 1


def normalize(S: SurfaceModel, raw: Mapping) -> TaggedArc:
    """Canonical tagged arc from an arc literal ``{"from", "to", "word", "tags"}``."""
    try:
        v_from, v_to = int(raw["from"]), int(raw["to"])
        word = raw.get("word", [])
        tags = raw.get("tags", {}) or {}
        edge = raw.get("edge")
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidArc(f"malformed arc literal: {exc}") from exc
    for v in (v_from, v_to):
        if not 0 <= v < len(S.points):
            raise InvalidArc(f"unknown point {v}")
    w = walk_from_word(S, v_from, v_to, word, None if edge is None else int(edge))
    return make_tagged(S, w, _tag_lookup(tags, "from", v_from), _tag_lookup(tags, "to", v_to))


def base_arcs(S: SurfaceModel) -> list[TaggedArc]:
    """Plain tagged arcs along the interior edges of the base triangulation."""
    out = []
    for e, slots in sorted(S.edge_slots.items()):
        if len(slots) == 2:
            t, s = slots[0]
            w = walk_from_word(S, S.vertex(t, s), S.vertex(t, s + 1), [], e)
            out.append(make_tagged(S, w))
    return sorted(out)


def arc_literal(a: TaggedArc) -> dict:
    """Arc literal of a canonical tagged arc (inverse of ``normalize``)."""
    S = a.surface
    word = []
    t = a.walk.tri
    for s in a.walk.exits:
        e = S.edge(t, s)
        word.append([e, S.edge_slots[e].index((t, s))])
        t = S.twin(t, s)[0]  # type: ignore[index]
    out: dict = {"from": a.ends[0], "to": a.ends[1], "word": word}
    tags = {}
    if a.tags[0]:
        tags["from"] = a.tags[0]
    if a.tags[1]:
        tags["to"] = a.tags[1]
    out["tags"] = tags
    if not a.walk.exits:
        out["edge"] = S.edge(*edge_slot(a.walk))
    return out


# ---------------------------------------------------------------------------
# Intersections
# ---------------------------------------------------------------------------


def interior_count(S: SurfaceModel, a: Walk, b: Walk, same: bool = False) -> int:
    """Interior crossings of two walks in minimal position."""
    cover = Cover(S, a.tri)
    a1, a2, frames = cover.lift(a, (), 0)
    seen: set = set()
    count = 0
    for path in dict.fromkeys(frames):
        for b1, b2, _ in cover.lifts_through(b, path):
            if (b1, b2) in seen:
                continue
            seen.add((b1, b2))
            if same and (b1, b2) == (a1, a2):
                continue
            if interleave(a1, a2, b1, b2):
                count += 1
    return count


def _oriented_from(a: TaggedArc, end: int) -> tuple:
    w = a.walk if end == 0 else reverse_walk(a.surface, a.walk)
    return oriented_key(a.surface, w)


def tagged_count(g1: TaggedArc, g2: TaggedArc) -> int:
    S = g1.surface
    count = 0
    for t1 in (0, 1):
        for t2 in (0, 1):
            p = g1.ends[t1]
            if p != g2.ends[t2] or not S.is_puncture(p):
                continue
            if g1.tags[t1] == g2.tags[t2]:
                continue
            if _oriented_from(g1, t1) == _oriented_from(g2, t2):
                o1, o2 = 1 - t1, 1 - t2
                q = g1.ends[o1]
                if not (q == g2.ends[o2] and S.is_puncture(q) and g1.tags[o1] != g2.tags[o2]):
                    continue
            count += 1
    return count


def intersection_number(g1: TaggedArc, g2: TaggedArc) -> int:
    """Interior plus tagged intersections; zero exactly for compatible arcs."""
    S = g1.surface
    if g1.walk == g2.walk:
        inner = interior_count(S, g1.walk, g2.walk, same=True)
    else:
        inner = interior_count(S, g1.walk, g2.walk)
    return inner + tagged_count(g1, g2)


def compatible(g1: TaggedArc, g2: TaggedArc) -> bool:
    return intersection_number(g1, g2) == 0


# ---------------------------------------------------------------------------
# Loops around punctures
# ---------------------------------------------------------------------------


def _walk_crossing_seq(S: SurfaceModel, w: Walk) -> list[tuple[int, int]]:
    tris, _ = walk_triangles(S, w)
    return [(tris[k], s) for k, s in enumerate(w.exits)]


def peripheral_cycle(S: SurfaceModel, p: int) -> list[tuple[int, int]]:
    return [(t, (c + 2) % 3) for t, c in S.fans[p]]


def enclosed_puncture(S: SurfaceModel, w: Walk) -> int | None:
    """Puncture cut out by a loop as a once-punctured monogon, if any."""
    q = start_vertex(S, w)
    if end_vertex(S, w) != q:
        return None
    seq = _walk_crossing_seq(S, w)
    fan = S.fans[q]
    i_end = S.sector_index[(end_triangle(S, w), w.end)][1]
    i_start = S.sector_index[(w.tri, w.corner)][1]
    closings = []
    if S.is_puncture(q):
        closings.append(fan_steps(S, q, i_end, i_start, True))
        closings.append(fan_steps(S, q, i_end, i_start, False))
    else:
        closings.append(fan_steps(S, q, i_end, i_start, i_start > i_end))
    for steps in closings:
        closing: list[tuple[int, int]] = []
        t, c = fan[i_end]
        tt = t
        for s in steps:
            closing.append((tt, s))
            tt = S.twin(tt, s)[0]  # type: ignore[index]
        cyc = closed_reduce(S, seq + closing)
        for p in S.punctures:
            if p != q or True:
                if same_cycle(S, cyc, peripheral_cycle(S, p)):
                    return p
    return None


def enclosing_loop(a: TaggedArc | IdealArc, p: int) -> IdealArc:
    """The loop ε around ``p`` whose folded side is the arc ``a`` (ending at ``p``)."""
    S = a.surface
    w = a.walk if a.ends[1] == p else reverse_walk(S, a.walk)
    if end_vertex(S, w) != p or not S.is_puncture(p):
        raise InternalInconsistency("folded side must end at the enclosed puncture")
    tris, _ = walk_triangles(S, w)
    crossings = list(w.exits)
    i_end = S.sector_index[(tris[-1], w.end)][1]
    n = S.fan_size(p)
    crossings += fan_steps_cyclic(S, p, i_end, n)
    back = reverse_walk(S, w)
    crossings += list(back.exits)
    loop = reduce_path(S, (w.tri, w.corner), crossings, back.end)
    x = make_ideal(S, loop)
    if x.enclosed != p:
        raise InternalInconsistency("constructed loop does not enclose the puncture")
    return x


def fan_steps_cyclic(S: SurfaceModel, p: int, i_from: int, count: int) -> list[int]:
    """Anticlockwise crossings for ``count`` sectors around a puncture."""
    fan = S.fans[p]
    out = []
    for k in range(count):
        t, c = fan[(i_from + k) % len(fan)]
        out.append((c + 2) % 3)
    return out


def folded_side_of_loop(x: IdealArc, max_len: int | None = None) -> IdealArc:
    """The folded side inside a loop enclosing a puncture."""
    from .enumeration import walks_between

    if x.enclosed is None:
        raise InternalInconsistency("not a loop enclosing a puncture")
    q, p = x.ends[0], x.enclosed
    bound = max_len if max_len is not None else len(x.walk) + 2
    for w in walks_between(x.surface, q, p, bound):
        try:
            cand = make_ideal(x.surface, w)
        except (SelfIntersecting, IllegalMonogonCutout):
            continue
        if enclosing_loop(cand, p).key() == x.key():
            return cand
    raise InternalInconsistency("folded side not found")


# ---------------------------------------------------------------------------
# Darts: the cyclic order of arc ends around a vertex
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Dart:
    """An end of an arc (or boundary segment) at a vertex, with its sort key."""

    key: tuple
    label: object
    walk: Walk | None
    end: int


def dart_key(S: SurfaceModel, w: Walk, end: int) -> tuple:
    """Sort key of the ``end`` of walk ``w`` among darts at its vertex."""
    if not w.exits:
        t, s = edge_slot(w)
        corner = w.corner if end == 0 else w.end
        v = S.vertex(t, corner)
        if corner == s:
            return (S.sector_index[(t, s)][1], 0)
        idx = S.sector_index[(t, (s + 1) % 3)][1] + 1
        if S.is_puncture(v):
            idx %= S.fan_size(v)
        return (idx, 0)
    if end == 0:
        t, c, i = w.tri, w.corner, 0
    else:
        t, c, i = end_triangle(S, w), w.end, len(w.exits)
    cover = Cover(S, t)
    a1, a2, _ = cover.lift(w, (), i)
    far = a2 if end == 0 else a1
    return (S.sector_index[(t, c)][1], 1, far)


def darts_at(S: SurfaceModel, v: int, arcs: Iterable[tuple[object, Walk]], with_boundary: bool = True) -> list[Dart]:
    """Darts at ``v`` of the labelled walks (and boundary segments), anticlockwise."""
    out: list[Dart] = []
    for label, w in arcs:
        if start_vertex(S, w) == v:
            out.append(Dart(dart_key(S, w, 0), label, w, 0))
        if end_vertex(S, w) == v:
            out.append(Dart(dart_key(S, w, 1), label, w, 1))
    if with_boundary and not S.is_puncture(v):
        out.append(Dart((0, 0), ("B", S.segment_out(v).id), None, 0))
        out.append(Dart((S.fan_size(v), 0), ("B", S.segment_in(v).id), None, 1))
    out.sort(key=lambda d: d.key)
    return out


def adjacent_dart(S: SurfaceModel, v: int, darts: list[Dart], ref_key: tuple, direction: int) -> tuple[Dart, int] | None:
    """Next dart after ``ref_key`` anticlockwise (+1) or clockwise (-1) and the wrap count."""
    if not darts:
        return None
    if direction > 0:
        for d in darts:
            if d.key > ref_key:
                return d, 0
        return (darts[0], 1) if S.is_puncture(v) else None
    for d in reversed(darts):
        if d.key < ref_key:
            return d, 0
    return (darts[-1], -1) if S.is_puncture(v) else None


def dart_far(cover: Cover, path: tuple, corner: int, ref_key: tuple, dart: Dart, wrap: int) -> tuple[tuple, int]:
    """Far endpoint (frame, corner) of ``dart`` reached by rotating from the dart ``ref_key``.

    The frame (path, corner) must be the one carrying the reference dart.
    """
    return dart_lift(cover, path, corner, ref_key, dart, wrap)[1]


def dart_lift(cover: Cover, path: tuple, corner: int, ref_key: tuple, dart: Dart, wrap: int):
    """Near frame carrying ``dart`` and its far endpoint, both as (frame, corner)."""
    S = cover.S
    tri = cover.tri(path)
    v = S.vertex(tri, corner)
    n = S.fan_size(v)
    i_frame = S.sector_index[(tri, corner)][1]
    j = dart.key[0]
    last_ray = False
    if S.is_puncture(v):
        r = ref_key[0]
        target = j + wrap * n + (i_frame + (r - i_frame) % n - r)
    else:
        last_ray = j == n and dart.key[1] == 0
        target = n - 1 if last_ray else j
    steps = target - i_frame
    frames = fan_frames(cover, path, corner, steps)
    p, c = frames[-1]
    if len(frames) != abs(steps) + 1 or S.sector_index[(cover.tri(p), c)][1] != target % n:
        raise InternalInconsistency("fan rotation did not reach the dart sector")
    if dart.key[1] == 0:
        return (p, c), ((p, (c + 2) % 3) if last_ray else (p, (c + 1) % 3))
    w = dart.walk
    assert w is not None
    i = 0 if dart.end == 0 else len(w.exits)
    fr = cover.frames(w, p, i)
    return (p, c), ((fr[-1], w.end) if dart.end == 0 else (fr[0], w.corner))


# ---------------------------------------------------------------------------
# Tagged rotation
# ---------------------------------------------------------------------------


def _rotate_chord_end(S: SurfaceModel, cover: Cover, path: tuple, corner: int, key: tuple, direction: int):
    """Move a marked endpoint along the boundary: far end of the adjacent segment."""
    v = S.vertex(cover.tri(path), corner)
    darts = darts_at(S, v, [], with_boundary=True)
    got = adjacent_dart(S, v, darts, key, direction)
    if got is None:
        raise InternalInconsistency("no boundary dart next to a marked endpoint")
    return dart_far(cover, path, corner, key, got[0], got[1])


def rotated_walk(g: TaggedArc, direction: int = 1) -> Walk:
    """Walk of ρ^{±1}(g), oriented so that its ends correspond to the ends of ``g.walk``."""
    S = g.surface
    w = g.walk
    cover = Cover(S, w.tri)
    _, _, frames = cover.lift(w, (), 0)
    ends = [(frames[0], w.corner, 0), (frames[-1], w.end, 1)]
    new_ends = []
    for path, corner, e in ends:
        if S.is_puncture(g.ends[e]):
            new_ends.append((path, corner))
        else:
            new_ends.append(_rotate_chord_end(S, cover, path, corner, dart_key(S, w, e), direction))
    return cover.chord_walk(new_ends[0][0], new_ends[0][1], new_ends[1][0], new_ends[1][1])


def tagged_rotation(g: TaggedArc, direction: int = 1) -> TaggedArc:
    """ρ (direction +1) or ρ⁻¹ (direction -1)."""
    nw = rotated_walk(g, direction)
    return make_tagged(g.surface, nw, -g.tags[0], -g.tags[1], checked=False)


# ---------------------------------------------------------------------------
# Chord crossings along a curve in the cover
# ---------------------------------------------------------------------------


def chord_position(x, a, b) -> bool:
    """True when ``x`` lies on the right of the chord oriented a -> b."""

    return between(x, a, b)


def sort_crossings(x, z, chords: list) -> list:
    """Order chords crossing (x, z) along the curve from x to z.

    ``chords`` holds tuples whose first two entries are endpoint addresses.
    """
    pts = sorted({x, z} | {c[0] for c in chords} | {c[1] for c in chords})
    n = len(pts)
    ix = pts.index(x)
    pos = {p: (k - ix) % n for k, p in enumerate(pts)}
    pz = pos[z]

    def key(c):
        u, v = c[0], c[1]
        if not (0 < pos[u] < pz):
            u, v = v, u
        return (pos[u], -pos[v])

    return sorted(chords, key=key)


# ---------------------------------------------------------------------------
# Cutting along an arc
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CutResult:
    """The cut surface and the transport maps between arc records."""

    original: SurfaceModel
    eta: TaggedArc
    newSurface: SurfaceModel
    forward: Callable[[TaggedArc], TaggedArc]
    backward: Callable[[TaggedArc], TaggedArc]


def cut(surface: SurfaceModel, eta: TaggedArc) -> CutResult:
    """Cut along η° and return transport maps for arcs compatible with η."""
    from ._cutting import cut_along

    return cut_along(surface, eta)


# ---------------------------------------------------------------------------
# Relative rotation
# ---------------------------------------------------------------------------


def _as_partial(S: SurfaceModel, N) -> PartialTaggedTriangulation:
    if isinstance(N, PartialTaggedTriangulation):
        return N
    return partial_triangulation(S, list(N), check=False)


def relative_rotation(l: TaggedArc, N, direction: int = 1) -> TaggedArc:
    """ρ_N^{±1}(l): rotate l inside the surface cut along N°, then transport back."""
    S = l.surface
    N = _as_partial(S, N)
    if l in N.arcs:
        raise InvalidArc("the rotated arc must not belong to N")
    for h in N.arcs:
        if intersection_number(l, h) != 0:
            raise IncompatibleArc("arc is not compatible with N")
    if not N.arcs:
        return tagged_rotation(l, direction)
    U = partial_triangulation(S, list(N.arcs) + [l], check=False)
    n_keys = {x.key() for x in N.idealForm.arcs}
    extra = [x for x in U.idealForm.arcs if x.key() not in n_keys]
    if len(extra) != 1:
        raise InternalInconsistency("adding one arc must add one ideal arc")
    lam = extra[0]
    touched = N.kappa
    n_walks = [(k, x.walk) for k, x in enumerate(N.idealForm.arcs)]
    w = lam.walk
    cover = Cover(S, w.tri)
    _, _, frames = cover.lift(w, (), 0)
    ends = [(frames[0], w.corner, 0), (frames[-1], w.end, 1)]
    moved = []
    for path, corner, e in ends:
        v = lam.ends[e]
        if S.is_puncture(v) and v not in touched:
            moved.append((path, corner))
            continue
        darts = darts_at(S, v, n_walks, with_boundary=True)
        key = dart_key(S, w, e)
        got = adjacent_dart(S, v, darts, key, direction)
        if got is None:
            raise InternalInconsistency("no adjacent dart in the cut surface")
        moved.append(dart_far(cover, path, corner, key, got[0], got[1]))
    nw = cover.chord_walk(moved[0][0], moved[0][1], moved[1][0], moved[1][1])
    return _transport_back(S, nw, l, lam, N)


def _transport_back(S: SurfaceModel, nw: Walk, l: TaggedArc, lam: IdealArc, N: PartialTaggedTriangulation) -> TaggedArc:
    x = make_ideal(S, nw)
    if x.enclosed is not None:
        q, p = x.ends[0], x.enclosed
        if p not in N.kappa:
            raise InternalInconsistency("rotation produced a loop around an untouched puncture")
        inner = None
        for y in N.idealForm.arcs:
            if set(y.ends) == {q, p} and enclosing_loop(y, p).key() == x.key():
                inner = y
                break
        if inner is None:
            raise InternalInconsistency("loop is not next to an arc of N")
        tags = {}
        for e in (0, 1):
            v = inner.ends[e]
            if v == p:
                tags[e] = -N.kappa[p]
            else:
                tags[e] = N.kappa.get(v, 1) if S.is_puncture(v) else 0
        return make_tagged(S, inner.walk, tags[0], tags[1], checked=False)
    orig = {}
    for e in (0, 1):
        if l.tags[e]:
            orig[l.ends[e]] = l.tags[e]
    tags = []
    for e in (0, 1):
        v = x.ends[e]
        if not S.is_puncture(v):
            tags.append(0)
        elif v in N.kappa:
            if N.kappa[v] == 0:
                raise InternalInconsistency("rotation reached a puncture inside a self-folded triangle")
            tags.append(N.kappa[v])
        else:
            tags.append(-orig.get(v, 1))
    return make_tagged(S, x.walk, tags[0], tags[1], checked=False)


# ---------------------------------------------------------------------------
# Endpoint sliding on a partial ideal triangulation
# ---------------------------------------------------------------------------


def _boundary_walk(S: SurfaceModel, v: int, end: int) -> Walk:
    """Boundary segment at marked point ``v`` as a walk leaving ``v``: out (0) or in (1)."""
    fan = S.fans[v]
    if end == 0:
        t, c = fan[0]
        return Walk(t, c, (), (c + 1) % 3)
    t, c = fan[-1]
    return Walk(t, c, (), (c + 2) % 3)


def _rotation(S: SurfaceModel, v: int, sec_from: int, key_from: tuple, sec_to: int, key_to: tuple, ccw: bool) -> list[int]:
    """Crossings turning at ``v`` from one dart to another, less than a full turn."""
    n = S.fan_size(v)
    shift = 0
    if S.is_puncture(v):
        if ccw and key_to <= key_from:
            shift = n
        elif not ccw and key_to >= key_from:
            shift = -n
    steps = sec_to + shift - sec_from
    fan = S.fans[v]
    out = []
    i = sec_from
    for _ in range(abs(steps)):
        t, c = fan[i % n]
        if steps > 0:
            out.append((c + 2) % 3)
            i += 1
        else:
            out.append(c)
            i -= 1
    return out


def slide_endpoints(S: SurfaceModel, arcs: Sequence[IdealArc], v: IdealArc, sign: int) -> IdealArc:
    """f^± of ``v`` with respect to the partial ideal triangulation ``arcs``.

    Each end of ``v`` slides along the next arc (or boundary segment) clockwise
    (sign -1) or anticlockwise (sign +1) from ``v`` around that end.
    """
    others = [(k, x.walk) for k, x in enumerate(arcs) if x.key() != v.key()]
    w = v.walk

    def sector(t: int, c: int) -> int:
        return S.sector_index[(t, c)][1]

    def neighbour(e: int):
        vert = v.ends[e]
        ds = darts_at(S, vert, others, with_boundary=True)
        key = dart_key(S, w, e)
        got = adjacent_dart(S, vert, ds, key, sign)
        if got is None:
            return None
        d = got[0]
        if d.walk is None:
            ow = _boundary_walk(S, vert, d.end)
        else:
            ow = d.walk if d.end == 0 else reverse_walk(S, d.walk)
        return d, ow, key

    start = neighbour(0)
    crossings: list[int] = []
    if start is None:
        st = (w.tri, w.corner)
    else:
        d, ow, key = start
        back = reverse_walk(S, ow)
        st = (back.tri, back.corner)
        crossings += list(back.exits)
        arr = (end_triangle(S, back), back.end)
        crossings += _rotation(S, v.ends[0], sector(*arr), d.key, sector(w.tri, w.corner), key, sign < 0)
    crossings += list(w.exits)
    fin = (end_triangle(S, w), w.end)
    stop = neighbour(1)
    if stop is None:
        end_corner = w.end
    else:
        d, ow, key = stop
        crossings += _rotation(S, v.ends[1], sector(*fin), key, sector(ow.tri, ow.corner), d.key, sign > 0)
        crossings += list(ow.exits)
        end_corner = ow.end
    nw = reduce_path(S, st, crossings, end_corner)
    return make_ideal(S, nw)
