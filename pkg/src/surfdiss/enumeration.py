"""Bounded enumeration of arcs by crossing words, used as an independent oracle."""

from __future__ import annotations

from typing import Iterable, Iterator, Sequence

import networkx as nx

from ._cover import Cover, Walk, canonical, end_vertex, interleave
from .errors import IllegalMonogonCutout, InvalidArc, LimitExceeded, SelfIntersecting
from .surface_model import SurfaceModel


def _chords_through(cover: Cover, path: tuple, walks: Sequence[Walk], cache: dict) -> list:
    got = cache.get(path)
    if got is None:
        got = []
        for w in walks:
            for a1, a2, _ in cover.lifts_through(w, path):
                got.append((a1, a2))
        cache[path] = got
    return got


def _separated(cover: Cover, path: tuple, entry: int, q_addr, chords: Iterable) -> bool:
    """Some chord separates the start from every possible continuation."""
    lo = cover.corner(path, entry + 1)
    hi = cover.corner(path, entry)
    x = cover.corner(path, entry + 2)

    def inside(y) -> bool:
        if lo < hi:
            return lo < y < hi
        return y > lo or y < hi

    for u, v in chords:
        if not inside(u) and not inside(v) and interleave(u, v, q_addr, x):
            return True
    return False


def walks_from(S: SurfaceModel, q: int, max_len: int, avoid: Sequence[Walk] = ()) -> Iterator[Walk]:
    """Reduced walks from ``q`` with at most ``max_len`` crossings.

    With ``avoid`` given, prefixes that must cross one of those arcs are pruned.
    """
    for t0, c0 in S.fans[q]:
        for side, end in ((c0, (c0 + 1) % 3), ((c0 + 2) % 3, (c0 + 2) % 3)):
            if not S.is_boundary_slot(t0, side):
                yield Walk(t0, c0, (), end)
        first = (c0 + 1) % 3
        if max_len < 1 or S.is_boundary_slot(t0, first):
            continue
        cover = Cover(S, t0)
        q_addr = cover.corner((), c0)
        cache: dict = {}
        seen_chords: list = list(_chords_through(cover, (), avoid, cache)) if avoid else []
        stack: list[tuple[tuple, tuple[int, ...], int]] = [((), (first,), len(seen_chords))]
        while stack:
            parent, exits, n_chords = stack.pop()
            del seen_chords[n_chords:]
            path = cover.move(parent, exits[-1])
            tri, entry = cover.info(path)
            if avoid:
                seen_chords.extend(_chords_through(cover, path, avoid, cache))
                if _separated(cover, path, entry, q_addr, seen_chords):  # type: ignore[arg-type]
                    continue
            yield Walk(t0, c0, exits, (entry + 2) % 3)  # type: ignore[operator]
            if len(exits) >= max_len:
                continue
            for s in ((entry + 2) % 3, (entry + 1) % 3):  # type: ignore[operator]
                if not S.is_boundary_slot(tri, s):
                    stack.append((path, exits + (s,), len(seen_chords)))


def walks_between(S: SurfaceModel, q: int, p: int, max_len: int) -> Iterator[Walk]:
    for w in walks_from(S, q, max_len):
        if end_vertex(S, w) == p:
            yield w


def ideal_arcs(S: SurfaceModel, max_len: int, avoid: Sequence[Walk] = ()) -> list:
    """Distinct valid ideal arcs with at most ``max_len`` crossings."""
    from .arc_engine import make_ideal

    seen: dict = {}
    for q in range(len(S.points)):
        for w in walks_from(S, q, max_len, avoid):
            cw, _ = canonical(S, w)
            k = cw.key()
            if k in seen:
                continue
            try:
                seen[k] = make_ideal(S, cw)
            except (SelfIntersecting, InvalidArc):
                seen[k] = None
    return sorted((x for x in seen.values() if x is not None), key=lambda x: x.key())


def tagged_arcs(S: SurfaceModel, max_len: int, avoid: Sequence[Walk] = ()) -> list:
    """All tagged arcs whose underlying arc has at most ``max_len`` crossings."""
    from .arc_engine import make_tagged

    out = []
    for x in ideal_arcs(S, max_len, avoid):
        if x.enclosed is not None:
            continue
        p0, p1 = (S.is_puncture(v) for v in x.ends)
        opts0 = (1, -1) if p0 else (0,)
        opts1 = (1, -1) if p1 else (0,)
        for t0 in opts0:
            for t1 in opts1:
                if x.ends[0] == x.ends[1] and t0 != t1:
                    continue
                try:
                    out.append(make_tagged(S, x.walk, t0, t1, checked=False))
                except IllegalMonogonCutout:
                    continue
    return sorted(out, key=lambda a: a.key())


def stable_tagged_arcs(
    S: SurfaceModel,
    accept=None,
    avoid: Sequence[Walk] = (),
    start: int = 1,
    margin: int = 2,
    max_bound: int = 30,
) -> tuple[list, int]:
    """Tagged arcs passing ``accept``, grown until the count is stable for ``margin`` more bounds.

    Returns the arcs and the bound at which they stabilized.
    """
    history: list[int] = []
    arcs: list = []
    verdict: dict = {}

    def ok(a) -> bool:
        k = a.key()
        if k not in verdict:
            verdict[k] = accept is None or accept(a)
        return verdict[k]

    for b in range(start, max_bound + 1):
        arcs = [a for a in tagged_arcs(S, b, avoid) if ok(a)]
        history.append(len(arcs))
        if len(history) > margin and len(set(history[-margin - 1 :])) == 1:
            return arcs, b - margin
    raise LimitExceeded(f"enumeration did not stabilize below bound {max_bound}")


def maximal_compatible_sets(arcs: Sequence, size: int | None = None) -> list[tuple]:
    """Maximal pairwise compatible subsets (optionally of a given size), as sorted tuples."""
    from .arc_engine import intersection_number

    g = nx.Graph()
    g.add_nodes_from(range(len(arcs)))
    for i in range(len(arcs)):
        for j in range(i + 1, len(arcs)):
            if intersection_number(arcs[i], arcs[j]) == 0:
                g.add_edge(i, j)
    out = []
    for clique in nx.find_cliques(g):
        if size is None or len(clique) == size:
            out.append(tuple(sorted((arcs[i] for i in clique), key=lambda a: a.key())))
    return sorted(out, key=lambda c: tuple(a.key() for a in c))
