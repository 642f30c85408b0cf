"""Elementary laminates and shear coordinates with respect to partial tagged triangulations."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from functools import lru_cache

from ._cover import Cover, Walk, between, canonical, fan_frames, interleave, minus, plus
from ._cutting import complete_ideal, face_trace
from .arc_engine import TaggedArc, arc_literal, rotated_walk, sort_crossings
from .errors import DoesNotShear, InternalInconsistency
from .surface_model import PartialTaggedTriangulation, SurfaceModel, partial_triangulation, tagged_form

CW, CCW = "cw", "ccw"


@dataclass(frozen=True)
class Laminate:
    """A curve given by a representative walk and its two end behaviours.

    Each end is ``("b", segment id)`` for a boundary end lying on that segment, or
    ``("s", puncture, "cw" | "ccw")`` for a spiral. The walk runs between the
    start points of the boundary segments and the spiral punctures.
    """

    surface: SurfaceModel
    walk: Walk
    ends: tuple[tuple, tuple]

    def key(self) -> tuple:
        return (self.walk.key(), self.ends)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Laminate) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def swap_spirals(self, p: int) -> "Laminate":
        """L^(p): reverse the spiral directions at puncture ``p``."""
        ends = tuple(
            ("s", e[1], CCW if e[2] == CW else CW) if e[0] == "s" and e[1] == p else e for e in self.ends
        )
        return Laminate(self.surface, self.walk, ends)  # type: ignore[arg-type]

    def to_json(self) -> dict:
        return {
            "walk": {"tri": self.walk.tri, "corner": self.walk.corner, "exits": list(self.walk.exits), "end": self.walk.end},
            "ends": [list(e) for e in self.ends],
        }


def _make_laminate(S: SurfaceModel, w: Walk, ends: list[tuple]) -> Laminate:
    cw_, rev = canonical(S, w)
    if rev:
        ends = ends[::-1]
    return Laminate(S, cw_, (ends[0], ends[1]))


def elementary_laminate(delta: TaggedArc) -> Laminate:
    """e(δ): boundary ends pushed onto the segment leaving the marked point; spirals by tag."""
    S = delta.surface
    ends = []
    for e in (0, 1):
        v = delta.ends[e]
        if delta.tags[e] == 0:
            ends.append(("b", S.segment_out(v).id))
        else:
            ends.append(("s", v, CW if delta.tags[e] > 0 else CCW))
    return _make_laminate(S, delta.walk, ends)


def co_elementary_laminate(delta: TaggedArc) -> Laminate:
    """e^op(δ): boundary ends pushed onto the segment entering the marked point; spirals reversed."""
    S = delta.surface
    ends = []
    for e in (0, 1):
        v = delta.ends[e]
        if delta.tags[e] == 0:
            ends.append(("b", S.segment_in(v).id))
        else:
            ends.append(("s", v, CCW if delta.tags[e] > 0 else CW))
    # the representative runs between the starts of the entering segments, i.e. along ρ(δ)
    return _make_laminate(S, rotated_walk(delta, 1), ends)


# ---------------------------------------------------------------------------
# Lifting a laminate into the universal cover
# ---------------------------------------------------------------------------


@dataclass
class _Lift:
    cover: Cover
    x: tuple
    z: tuple
    frames: list
    terminals: tuple  # per end: ("B", (a, b)) or ("P", a)
    spiral_frames: tuple  # per end: frames added for a spiral (possibly empty)


def _end_lift(S: SurfaceModel, cover: Cover, frame: tuple, corner: int, end: tuple, depth: int):
    addr = cover.corner(frame, corner)
    v = S.vertex(cover.tri(frame), corner)
    if end[0] == "b":
        idx = S.sector_index[(cover.tri(frame), corner)][1]
        fr = fan_frames(cover, frame, corner, -idx)
        p, c = fr[-1]
        if S.sector_index[(cover.tri(p), c)][1] != 0:
            raise InternalInconsistency("boundary end did not reach the first sector")
        nxt = cover.corner(p, c + 1)
        return plus(addr), ("B", (addr, nxt)), [f for f, _ in fr], []
    if end[1] != v:
        raise InternalInconsistency("spiral end does not sit at its puncture")
    if end[2] == CW:
        fr = fan_frames(cover, frame, corner, -depth)
        return plus(addr), ("P", addr), [], [f for f, _ in fr]
    fr = fan_frames(cover, frame, corner, depth)
    return minus(addr), ("P", addr), [], [f for f, _ in fr]


def lift_laminate(L: Laminate, depth: int) -> _Lift:
    S = L.surface
    w = L.walk
    cover = Cover(S, w.tri)
    _, _, frames = cover.lift(w, (), 0)
    x, t0, f0, s0 = _end_lift(S, cover, frames[0], w.corner, L.ends[0], depth)
    z, t1, f1, s1 = _end_lift(S, cover, frames[-1], w.end, L.ends[1], depth)
    allf = list(dict.fromkeys(list(frames) + f0 + f1 + s0 + s1))
    return _Lift(cover, x, z, allf, (t0, t1), (tuple(s0), tuple(s1)))


def _spiral_depth(S: SurfaceModel, walks) -> int:
    longest = max((len(w.exits) for w in walks), default=0)
    deg = max((S.fan_size(p) for p in S.punctures), default=0)
    return longest + 3 * deg + 3


# ---------------------------------------------------------------------------
# Crossing chain against a partial ideal triangulation
# ---------------------------------------------------------------------------


def _endpoints(item) -> tuple:
    if item[0] == "B":
        return item[1]
    if item[0] == "P":
        return (item[1],)
    return (item[1], item[2])


def _shared(i1, i2):
    common = set(_endpoints(i1)) & set(_endpoints(i2))
    if len(common) != 1:
        return None
    return next(iter(common))


def crossing_chain(L: Laminate, walks) -> tuple[list, tuple]:
    """Items met by L: end terminal, chords (("C", u, v, label)) in order, end terminal."""
    S = L.surface
    lift = lift_laminate(L, _spiral_depth(S, walks))
    cover = lift.cover
    chords: dict = {}
    for path in lift.frames:
        for k, w in enumerate(walks):
            for a1, a2, _ in cover.lifts_through(w, path):
                if (a1, a2) not in chords and interleave(lift.x, lift.z, a1, a2):
                    chords[(a1, a2)] = k
    ordered = sort_crossings(lift.x, lift.z, [(a1, a2, k) for (a1, a2), k in chords.items()])
    items = [lift.terminals[0]] + [("C", a1, a2, k) for a1, a2, k in ordered] + [lift.terminals[1]]
    return items, (lift.x, lift.z)


def chain_shears(items: list) -> bool:
    return all(_shared(items[k], items[k + 1]) is not None for k in range(len(items) - 1))


def chain_contributions(items: list, x) -> list[tuple[int, int]]:
    """Per-crossing contributions as (label, value) in crossing order."""
    out = []
    for k in range(1, len(items) - 1):
        _, a, b, label = items[k]
        if not between(x, a, b):
            a, b = b, a
        X = _shared(items[k - 1], items[k])
        Y = _shared(items[k], items[k + 1])
        if X is None or Y is None:
            raise DoesNotShear("a segment of the laminate does not cut out an angle")
        if X == Y:
            val = 0
        elif (X, Y) == (b, a):
            val = 1
        else:
            val = -1
        out.append((label, val))
    return out


# ---------------------------------------------------------------------------
# Public operations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ShearVector:
    """Shear coordinates of a laminate, one entry per arc of the context."""

    context: PartialTaggedTriangulation
    entries: tuple[int, ...]

    def __getitem__(self, arc: TaggedArc) -> int:
        return self.entries[self.context.index(arc)]

    def as_dict(self) -> dict:
        return {a: v for a, v in zip(self.context.arcs, self.entries)}

    def __neg__(self) -> "ShearVector":
        return ShearVector(self.context, tuple(-v for v in self.entries))

    def to_json(self, context_id: str | None = None) -> dict:
        cid = context_id if context_id is not None else context_key(self.context)
        return {
            "context": cid,
            "entries": {json.dumps(arc_literal(a), sort_keys=True): v for a, v in zip(self.context.arcs, self.entries)},
        }


def context_key(R: PartialTaggedTriangulation) -> str:
    """Stable identifier of a partial tagged triangulation."""
    blob = json.dumps([arc_literal(a) for a in R.arcs], sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _retagged(L: Laminate, R: PartialTaggedTriangulation) -> Laminate:
    """L^R: spirals at punctures with κ < 0 reversed."""
    out = L
    for p, k in R.kappa.items():
        if k < 0:
            out = out.swap_spirals(p)
    return out


def _ideal_walks(R: PartialTaggedTriangulation) -> list[Walk]:
    return [x.walk for x in R.idealForm.arcs]


def shears(L: Laminate, R: PartialTaggedTriangulation) -> bool:
    """Whether every segment of L^R cut by R° cuts out an angle of R° ∪ B."""
    items, _ = crossing_chain(_retagged(L, R), _ideal_walks(R))
    return chain_shears(items)


def ideal_contributions(L: Laminate, R: PartialTaggedTriangulation) -> dict[int, list[int]]:
    """Per-crossing contributions of L^R (before the folded-side rule), by R° index."""
    walks = _ideal_walks(R)
    items, (x, _) = crossing_chain(L, walks)
    if not chain_shears(items):
        raise DoesNotShear("laminate does not shear the partial triangulation")
    out: dict[int, list[int]] = {k: [] for k in range(len(walks))}
    for label, val in chain_contributions(items, x):
        out[label].append(val)
    return out


def per_crossing(L: Laminate, R: PartialTaggedTriangulation) -> list[list[int]]:
    """For each arc of R, the list of per-crossing contributions summing to its entry."""
    LR = _retagged(L, R)
    frag = R.idealForm
    base = ideal_contributions(LR, R)
    swapped: dict[int, dict[int, list[int]]] = {}
    out = []
    for k in range(len(R.arcs)):
        j = frag.arcMap[k]
        fp = frag.folded_partner(j)
        if fp is None:
            out.append(base[j])
            continue
        eps, p = fp
        if p not in swapped:
            swapped[p] = ideal_contributions(LR.swap_spirals(p), R)
        out.append(swapped[p][eps])
    return out


def shear_vector(L: Laminate, R: PartialTaggedTriangulation) -> ShearVector:
    """b_R(L) computed on R° ∪ B with the retagging and folded-side rules."""
    return ShearVector(R, tuple(sum(c) for c in per_crossing(L, R)))


# ---------------------------------------------------------------------------
# Second route: a completing tagged triangulation and its face record
# ---------------------------------------------------------------------------


def good_completion(R: PartialTaggedTriangulation) -> PartialTaggedTriangulation:
    """A tagged triangulation T ⊇ R with κ_T = κ_R on punctures touched by R."""
    return _good_completion_cached(R)


@lru_cache(maxsize=4096)
def _good_completion_cached(R: PartialTaggedTriangulation) -> PartialTaggedTriangulation:
    S = R.surface
    ideal = complete_ideal(S, list(R.idealForm.arcs))
    T0 = tagged_form(S, ideal)
    flips = {p for p, k in R.kappa.items() if k < 0}
    T = partial_triangulation(S, [a.with_tags_flipped(flips) for a in T0.arcs], check=False)
    if not set(R.arcs) <= set(T.arcs):
        raise InternalInconsistency("completion does not contain the partial triangulation")
    return T


def _face_contributions(L: Laminate, T: PartialTaggedTriangulation) -> dict[int, list[int]]:
    """Contributions of L against a full ideal triangulation, from turns in its faces."""
    S = L.surface
    walks = _ideal_walks(T)
    F = _face_record(T)
    lift = lift_laminate(L, _spiral_depth(S, walks))
    cover = lift.cover
    chords: dict = {}
    for path in lift.frames:
        for k, w in enumerate(walks):
            for a1, a2, _ in cover.lifts_through(w, path):
                if (a1, a2) not in chords and interleave(lift.x, lift.z, a1, a2):
                    chords[(a1, a2)] = k
    ordered = sort_crossings(lift.x, lift.z, [(a1, a2, k) for (a1, a2), k in chords.items()])
    # each crossing: slot exited in the previous face and slot entered in the next face
    steps = []
    for a1, a2, k in ordered:
        d_prev = (k, 1) if between(lift.x, a1, a2) else (k, 0)
        d_next = (k, 1 - d_prev[1])
        steps.append((k, F.position[d_prev], F.position[d_next]))
    entry0 = _terminal_slot(S, F, L.ends[0])
    exit1 = _terminal_slot(S, F, L.ends[1])
    out: dict[int, list[int]] = {k: [] for k in range(len(walks))}
    n = len(steps)
    vals: list[int] = []
    for i, (k, (f_prev, s_out), (f_next, s_in)) in enumerate(steps):
        if i == 0:
            if entry0 is None:
                continue
            if entry0[0] != f_prev:
                raise InternalInconsistency("laminate does not start in its boundary face")
            s_before = entry0[1]
        else:
            s_before = steps[i - 1][2][1]
        if i == n - 1:
            if exit1 is None:
                continue
            if exit1[0] != f_next:
                raise InternalInconsistency("laminate does not end in its boundary face")
            s_after = exit1[1]
        else:
            s_after = steps[i + 1][1][1]
        turn_prev = (s_out - s_before) % 3
        turn_next = (s_after - s_in) % 3
        if turn_prev == turn_next:
            val = 0
        elif (turn_prev, turn_next) == (1, 2):
            val = 1
        else:
            val = -1
        out[k].append(val)
        vals.append(val)
    # the periodic part of a spiral turns the same way at every crossing
    for e in (0, 1):
        if L.ends[e][0] != "s":
            continue
        deg = len(F.darts[L.ends[e][1]])
        window = vals[:deg] if e == 0 else vals[-deg:]
        if any(window):
            raise InternalInconsistency("spiral tail carries a nonzero contribution")
    return out


def _terminal_slot(S: SurfaceModel, F, end: tuple):
    if end[0] != "b":
        return None
    return F.position[(("B", end[1]), 0)]


_FACE_CACHE: dict = {}


def _face_record(T: PartialTaggedTriangulation):

    got = _FACE_CACHE.get(T)
    if got is None:
        got = face_trace(T.surface, _ideal_walks(T))
        if len(_FACE_CACHE) > 4096:
            _FACE_CACHE.clear()
        _FACE_CACHE[T] = got
    return got


def shear_vector_via_completion(L: Laminate, R: PartialTaggedTriangulation, T: PartialTaggedTriangulation | None = None) -> ShearVector:
    """b_R(L) computed as the restriction of b_T(L) for a tagged triangulation T ⊇ R."""
    T = T if T is not None else good_completion(R)
    full = completion_vector(L, T)
    return ShearVector(R, tuple(full[T.index(a)] for a in R.arcs))


def completion_vector(L: Laminate, T: PartialTaggedTriangulation) -> tuple[int, ...]:
    """All entries of b_T(L) for a full tagged triangulation T, via face turns."""
    if len(T.arcs) != T.surface.n_arcs:
        raise InternalInconsistency("completion route needs a full tagged triangulation")
    LT = _retagged(L, T)
    frag = T.idealForm
    base = _face_contributions(LT, T)
    swapped: dict[int, dict] = {}
    out = []
    for k in range(len(T.arcs)):
        j = frag.arcMap[k]
        fp = frag.folded_partner(j)
        if fp is None:
            out.append(sum(base[j]))
            continue
        eps, p = fp
        if p not in swapped:
            swapped[p] = _face_contributions(LT.swap_spirals(p), T)
        out.append(sum(swapped[p][eps]))
    return tuple(out)
