"""Walks in the base triangulation and their lifts to the universal cover.

A walk starts at a corner of a triangle, crosses a sequence of sides and ends
at a corner of the last triangle. Reduced walks are in minimal position with
the base triangulation, so they are canonical representatives of homotopy
classes of arcs.

The universal cover is explored lazily from a root triangle. A frame is named
by the tuple of symbols leading to it; corner addresses are tuples compared
lexicographically, and this order agrees with the anticlockwise order of the
corresponding points on the circle at infinity.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import BoundaryParallel, InternalInconsistency, InvalidArc, NullHomotopic
from .surface_model import SurfaceModel

Path = tuple[int, ...]
Addr = tuple


@dataclass(frozen=True)
class Walk:
    """A curve between two corners crossing ``exits`` (absolute slot indices)."""

    tri: int
    corner: int
    exits: tuple[int, ...]
    end: int

    def key(self) -> tuple:
        return (len(self.exits), self.tri, self.corner, self.exits, self.end)

    def __len__(self) -> int:
        return len(self.exits)

    def __lt__(self, other: "Walk") -> bool:
        return self.key() < other.key()


def walk_triangles(S: SurfaceModel, w: Walk) -> tuple[list[int], list[int | None]]:
    """Triangles visited by ``w`` and the slot through which each was entered."""
    tris = [w.tri]
    entries: list[int | None] = [None]
    t = w.tri
    for s in w.exits:
        nxt = S.twin(t, s)
        if nxt is None:
            raise InvalidArc("walk crosses a boundary segment")
        t, j = nxt
        tris.append(t)
        entries.append(j)
    return tris, entries


def check_walk(S: SurfaceModel, w: Walk) -> None:
    if not w.exits:
        if w.end not in ((w.corner + 1) % 3, (w.corner + 2) % 3):
            raise InvalidArc("zero-length walk must follow a side")
        return
    if w.exits[0] != (w.corner + 1) % 3:
        raise InvalidArc("first crossing must be opposite the start corner")
    tris, entries = walk_triangles(S, w)
    for k in range(1, len(w.exits)):
        if w.exits[k] == entries[k]:
            raise InvalidArc("walk backtracks")
    if w.end != (entries[-1] + 2) % 3:  # type: ignore[operator]
        raise InvalidArc("walk must end opposite its last crossing")


def start_vertex(S: SurfaceModel, w: Walk) -> int:
    return S.vertex(w.tri, w.corner)


def end_triangle(S: SurfaceModel, w: Walk) -> int:
    t = w.tri
    for s in w.exits:
        t = S.twin(t, s)[0]  # type: ignore[index]
    return t


def end_vertex(S: SurfaceModel, w: Walk) -> int:
    return S.vertex(end_triangle(S, w), w.end)


def reverse_walk(S: SurfaceModel, w: Walk) -> Walk:
    if not w.exits:
        return Walk(w.tri, w.end, (), w.corner)
    tris, entries = walk_triangles(S, w)
    return Walk(tris[-1], w.end, tuple(entries[k] for k in range(len(tris) - 1, 0, -1)), w.corner)  # type: ignore[misc]


def _edge_reps(S: SurfaceModel, w: Walk) -> list[Walk]:
    """Both triangles' descriptions of a zero-length walk, same orientation."""
    c, e = w.corner, w.end
    s = c if e == (c + 1) % 3 else e
    reps = [w]
    other = S.twin(w.tri, s)
    if other is not None:
        t2, s2 = other
        if e == (c + 1) % 3:
            reps.append(Walk(t2, (s2 + 1) % 3, (), s2))
        else:
            reps.append(Walk(t2, s2, (), (s2 + 1) % 3))
    return reps


def oriented_key(S: SurfaceModel, w: Walk) -> tuple:
    if w.exits:
        return w.key()
    return min(r.key() for r in _edge_reps(S, w))


def oriented_canonical(S: SurfaceModel, w: Walk) -> Walk:
    if w.exits:
        return w
    return min(_edge_reps(S, w), key=lambda r: r.key())


def canonical(S: SurfaceModel, w: Walk) -> tuple[Walk, bool]:
    """Unoriented canonical form and whether it reverses ``w``."""
    a = oriented_canonical(S, w)
    b = oriented_canonical(S, reverse_walk(S, w))
    return (a, False) if a.key() <= b.key() else (b, True)


def edge_slot(w: Walk) -> tuple[int, int]:
    """Slot of the side followed by a zero-length walk."""
    c, e = w.corner, w.end
    return (w.tri, c if e == (c + 1) % 3 else e)


# ---------------------------------------------------------------------------
# Raw paths and reduction
# ---------------------------------------------------------------------------


def reduce_path(S: SurfaceModel, start: tuple[int, int], crossings: Sequence[int], end_corner: int) -> Walk:
    """Reduce a path from corner ``start`` through the given slot crossings.

    ``crossings[k]`` is a slot of the triangle reached after ``k`` crossings;
    the path ends at corner ``end_corner`` of the last triangle.
    """
    t0, c0 = start
    stack: list[tuple[int, int]] = []  # (triangle exited, slot)
    t = t0
    for s in crossings:
        s %= 3
        nxt = S.twin(t, s)
        if nxt is None:
            raise InvalidArc("path crosses a boundary segment")
        if stack:
            pt, ps = stack[-1]
            back = S.twin(pt, ps)
            if back == (t, s):
                stack.pop()
                t = pt
                continue
        stack.append((t, s))
        t = nxt[0]
    seq = list(stack)
    # normalize the start
    c = c0 % 3
    head = 0
    cur_t = t0
    while head < len(seq):
        tt, s = seq[head]
        if s == (c + 1) % 3:
            break
        t2, s2 = S.twin(tt, s)  # type: ignore[misc]
        c = (s2 + 1) % 3 if s == c else s2
        cur_t = t2
        head += 1
    seq = seq[head:]
    # normalize the end
    e = end_corner % 3
    end_t = t
    while seq:
        pt, ps = seq[-1]
        _, j = S.twin(pt, ps)  # type: ignore[misc]
        if e == (j + 2) % 3:
            break
        e = (ps + 1) % 3 if e == j else ps
        end_t = pt
        seq.pop()
    if not seq:
        if cur_t != end_t:
            raise InternalInconsistency("reduced path changed triangle")
        if c == e:
            raise NullHomotopic("curve is contractible")
        side = c if e == (c + 1) % 3 else e
        if S.is_boundary_slot(cur_t, side):
            raise BoundaryParallel("curve is homotopic to a boundary segment")
        return Walk(cur_t, c, (), e)
    return Walk(cur_t, c, tuple(s for _, s in seq), e)


def walk_crossings(S: SurfaceModel, w: Walk) -> list[int]:
    return list(w.exits)


def fan_steps(S: SurfaceModel, v: int, i_from: int, i_to: int, anticlockwise: bool) -> list[int]:
    """Slot crossings rotating around ``v`` from fan index ``i_from`` to ``i_to``."""
    fan = S.fans[v]
    n = len(fan)
    out: list[int] = []
    i = i_from
    while i != i_to:
        t, c = fan[i % n]
        if anticlockwise:
            out.append((c + 2) % 3)
            i = (i + 1) % n if S.is_puncture(v) else i + 1
        else:
            out.append(c)
            i = (i - 1) % n if S.is_puncture(v) else i - 1
        if not S.is_puncture(v) and not (0 <= i < n):
            raise InternalInconsistency("rotation left the fan of a marked point")
    return out


# ---------------------------------------------------------------------------
# Universal cover
# ---------------------------------------------------------------------------


class Cover:
    """Lazily explored universal cover rooted at a triangle."""

    def __init__(self, S: SurfaceModel, root: int) -> None:
        self.S = S
        self.root = root
        self._info: dict[Path, tuple[int, int | None]] = {(): (root, None)}

    def info(self, path: Path) -> tuple[int, int | None]:
        got = self._info.get(path)
        if got is None:
            parent = self.info(path[:-1])
            got = self._child_info(path[:-1], parent, path[-1])
            self._info[path] = got
        return got

    def _slot_of_symbol(self, entry: int | None, sym: int) -> int:
        if entry is None:
            return (sym - 1) // 2
        return (entry + 1) % 3 if sym == 0 else (entry + 2) % 3

    def _child_info(self, ppath: Path, pinfo: tuple[int, int | None], sym: int) -> tuple[int, int | None]:
        tri, entry = pinfo
        s = self._slot_of_symbol(entry, sym)
        nxt = self.S.twin(tri, s)
        if nxt is None:
            raise InvalidArc("no frame beyond a boundary segment")
        return (nxt[0], nxt[1])

    def tri(self, path: Path) -> int:
        return self.info(path)[0]

    def move(self, path: Path, slot: int) -> Path:
        """Frame across side ``slot`` of the frame at ``path``."""
        tri, entry = self.info(path)
        slot %= 3
        if entry is not None and slot == entry:
            return path[:-1]
        nxt = self.S.twin(tri, slot)
        if nxt is None:
            raise InvalidArc("cannot cross a boundary segment")
        if entry is None:
            sym = 2 * slot + 1
        else:
            sym = 0 if slot == (entry + 1) % 3 else 2
        child = path + (sym,)
        if child not in self._info:
            self._info[child] = (nxt[0], nxt[1])
        return child

    def slot_to(self, path: Path, child: Path) -> int:
        """Slot of ``path`` crossed to reach its child ``child``."""
        _, entry = self.info(path)
        return self._slot_of_symbol(entry, child[-1])

    def corner(self, path: Path, k: int) -> Addr:
        """Address of corner ``k`` of the frame at ``path``."""
        k %= 3
        while True:
            tri, entry = self.info(path)
            if entry is None:
                return path + (2 * k,)
            if k == (entry + 2) % 3:
                return path + (1,)
            ps = self.S.twin(tri, entry)[1]  # type: ignore[index]
            k = (ps + 1) % 3 if k == entry else ps
            path = path[:-1]

    def frames(self, w: Walk, path: Path, i: int) -> list[Path]:
        """Frames of the lift of ``w`` whose ``i``-th triangle sits at ``path``."""
        tris, entries = walk_triangles(self.S, w)
        if self.tri(path) != tris[i]:
            raise InternalInconsistency("frame triangle does not match walk")
        out: list[Path] = [path] * len(tris)
        p = path
        for k in range(i, 0, -1):
            p = self.move(p, entries[k])  # type: ignore[arg-type]
            out[k - 1] = p
        p = path
        for k in range(i, len(tris) - 1):
            p = self.move(p, w.exits[k])
            out[k + 1] = p
        return out

    def lift(self, w: Walk, path: Path, i: int) -> tuple[Addr, Addr, list[Path]]:
        fr = self.frames(w, path, i)
        return self.corner(fr[0], w.corner), self.corner(fr[-1], w.end), fr

    def lifts_through(self, w: Walk, path: Path) -> list[tuple[Addr, Addr, list[Path]]]:
        """All lifts of ``w`` passing through the frame at ``path``."""
        tris, _ = walk_triangles(self.S, w)
        t = self.tri(path)
        return [self.lift(w, path, i) for i, ti in enumerate(tris) if ti == t]

    def path_between(self, a: Path, b: Path) -> list[int]:
        """Slot crossings of the tree path from frame ``a`` to frame ``b``."""
        k = 0
        while k < len(a) and k < len(b) and a[k] == b[k]:
            k += 1
        out: list[int] = []
        p = a
        while len(p) > k:
            out.append(self.info(p)[1])  # type: ignore[arg-type]
            p = p[:-1]
        for m in range(k, len(b)):
            out.append(self.slot_to(p, b[: m + 1]))
            p = b[: m + 1]
        return out

    def chord_walk(self, a: Path, ca: int, b: Path, cb: int) -> Walk:
        """Reduced walk of the chord from corner ``ca`` of ``a`` to corner ``cb`` of ``b``."""
        return reduce_path(self.S, (self.tri(a), ca), self.path_between(a, b), cb)


def plus(addr: Addr) -> Addr:
    """Point just anticlockwise of ``addr`` on the circle at infinity."""
    return addr[:-1] + (addr[-1] + 1, -0.5)


def minus(addr: Addr) -> Addr:
    """Point just clockwise of ``addr`` on the circle at infinity."""
    return addr[:-1] + (addr[-1] - 1, 2.5)


def between(x: Addr, a: Addr, b: Addr) -> bool:
    """Strictly between ``a`` and ``b`` going anticlockwise from ``a``."""
    if a < b:
        return a < x < b
    return x > a or x < b


def interleave(a1: Addr, a2: Addr, b1: Addr, b2: Addr) -> bool:
    """Chords (a1, a2) and (b1, b2) cross in their interiors."""
    if len({a1, a2, b1, b2}) < 4:
        return False
    return between(b1, a1, a2) != between(b2, a1, a2)


def fan_frames(cover: Cover, path: Path, corner: int, steps: int) -> list[tuple[Path, int]]:
    """Rotate around a vertex lift: ``steps`` > 0 anticlockwise, < 0 clockwise."""
    out = [(path, corner)]
    p, c = path, corner
    for _ in range(abs(steps)):
        tri, _entry = cover.info(p)
        if steps > 0:
            s = (c + 2) % 3
            nxt = cover.S.twin(tri, s)
            if nxt is None:
                break
            p = cover.move(p, s)
            c = nxt[1]
        else:
            s = c
            nxt = cover.S.twin(tri, s)
            if nxt is None:
                break
            p = cover.move(p, s)
            c = (nxt[1] + 1) % 3
        out.append((p, c))
    return out


def closed_reduce(S: SurfaceModel, seq: Iterable[tuple[int, int]]) -> list[tuple[int, int]]:
    """Cyclically reduce a closed sequence of (triangle, exit slot) crossings."""
    stack: list[tuple[int, int]] = []
    for t, s in seq:
        if stack and S.twin(*stack[-1]) == (t, s):
            stack.pop()
        else:
            stack.append((t, s))
    while len(stack) >= 2 and S.twin(*stack[-1]) == stack[0]:
        stack.pop()
        stack.pop(0)
    return stack


def same_cycle(S: SurfaceModel, a: list[tuple[int, int]], b: list[tuple[int, int]]) -> bool:
    """Equal as cyclic sequences, allowing reversal of direction."""
    if len(a) != len(b) or not a:
        return False
    rev = [S.twin(*x) for x in reversed(b)]
    for cand in (b, rev):
        doubled = cand + cand
        for k in range(len(cand)):
            if doubled[k : k + len(a)] == a:
                return True
    return False
