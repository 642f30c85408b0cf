"""Tiling and skew-tiling presentations of admissible partial ideal triangulations."""

from __future__ import annotations

from dataclasses import dataclass

from .arc_engine import IdealArc, darts_at
from .errors import AxiomViolation, NotAdmissible
from .surface_model import IdealFragment, PartialTaggedTriangulation, SurfaceModel, is_admissible

TILING, SKEW_TILING = "tiling", "skew-tiling"


@dataclass(frozen=True)
class Arrow:
    """An arrow at the shared endpoint ``point``, leaving end ``sourceEnd`` of the source arc."""

    name: str
    source: int
    target: int
    point: int
    sourceEnd: int
    targetEnd: int

    @property
    def is_loop(self) -> bool:
        return self.source == self.target


@dataclass(frozen=True)
class QuiverPresentation:
    """Quiver with length-two relations; a relation (a, b) is the path a then b."""

    arcs: tuple[IdealArc, ...]
    arrows: tuple[Arrow, ...]
    specialLoops: tuple[str, ...]
    relations: tuple[tuple[str, str], ...]
    mode: str

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(range(len(self.arcs)))

    def arrow(self, name: str) -> Arrow:
        for a in self.arrows:
            if a.name == name:
                return a
        raise KeyError(name)

    def special_vertices(self) -> tuple[int, ...]:
        return tuple(sorted(self.arrow(n).source for n in self.specialLoops))

    def relation_text(self, rel: tuple[str, str]) -> str:
        a, b = rel
        if self.mode == SKEW_TILING and a == b and a in self.specialLoops:
            return f"{a}{a}-{a}"
        return f"{a}{b}"

    def to_text(self) -> str:
        verts = ", ".join(str(v) for v in self.vertices)
        arrows = ", ".join(f"{a.name}: {a.source} -> {a.target}" for a in self.arrows)
        special = ", ".join(str(v) for v in self.special_vertices()) if self.mode == SKEW_TILING else ""
        rels = ", ".join(self.relation_text(r) for r in self.relations)
        return f"vertices: {verts}; arrows: {arrows}; special: {{{special}}}; relations: [{rels}]"

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "vertices": list(self.vertices),
            "arrows": [
                {"name": a.name, "source": a.source, "target": a.target, "point": a.point} for a in self.arrows
            ],
            "specialLoops": list(self.specialLoops),
            "relations": [self.relation_text(r) for r in self.relations],
        }


def _fragment(R) -> tuple[SurfaceModel, IdealFragment]:
    if isinstance(R, PartialTaggedTriangulation):
        return R.surface, R.idealForm
    frag = R
    if not frag.arcs:
        raise NotAdmissible("an empty collection has no surface attached")
    return frag.arcs[0].surface, frag


def _presentation(R, mode: str) -> QuiverPresentation:
    S, frag = _fragment(R)
    if not is_admissible(S, frag):
        raise NotAdmissible("some puncture is not enclosed by a self-folded triangle")
    folded = {eps1 for _, eps1, _ in frag.selfFolded}
    loops_r1 = {eps for eps, _, _ in frag.selfFolded}
    keep = sorted((j for j in range(len(frag.arcs)) if j not in folded), key=lambda j: frag.arcs[j].key())
    vertex = {j: k for k, j in enumerate(keep)}
    labelled = [(j, frag.arcs[j].walk) for j in keep]
    arrows: list[Arrow] = []
    for m in S.marked_points:
        darts = darts_at(S, m, labelled, with_boundary=False)
        for d1, d2 in zip(darts, darts[1:]):
            arrows.append(Arrow("", vertex[d1.label], vertex[d2.label], m, d1.end, d2.end))
    arrows.sort(key=lambda a: (a.source, a.target, a.point, a.sourceEnd, a.targetEnd))
    arrows = [Arrow(f"a{k}", a.source, a.target, a.point, a.sourceEnd, a.targetEnd) for k, a in enumerate(arrows)]
    relations = []
    for a in arrows:
        for b in arrows:
            if a.target == b.source and a.targetEnd != b.sourceEnd:
                relations.append((a.name, b.name))
    special: tuple[str, ...] = ()
    if mode == SKEW_TILING:
        special = tuple(a.name for a in arrows if a.is_loop and keep[a.source] in loops_r1)
    return QuiverPresentation(tuple(frag.arcs[j] for j in keep), tuple(arrows), special, tuple(relations), mode)


def tiling_presentation(R) -> QuiverPresentation:
    """Quiver and relations of the tiling algebra of an admissible R."""
    return _presentation(R, TILING)


def skew_tiling_presentation(R) -> QuiverPresentation:
    """The tiling quiver with the loops at non-folded sides marked special."""
    return _presentation(R, SKEW_TILING)


@dataclass(frozen=True)
class SkewGentleTriple:
    """(Q, Sp, I): the quiver without special loops, the special vertices, the relations."""

    arrows: tuple[Arrow, ...]
    special: tuple[int, ...]
    relations: tuple[tuple[str, str], ...]


def _check_gentle(arrows: list[Arrow], relations: set[tuple[str, str]]) -> None:
    verts = {a.source for a in arrows} | {a.target for a in arrows}
    for v in sorted(verts):
        if sum(1 for a in arrows if a.source == v) > 2:
            raise AxiomViolation("out-degree", f"vertex {v} starts more than two arrows")
        if sum(1 for a in arrows if a.target == v) > 2:
            raise AxiomViolation("in-degree", f"vertex {v} ends more than two arrows")
    for a in arrows:
        after = [b for b in arrows if b.source == a.target]
        before = [b for b in arrows if b.target == a.source]
        if sum(1 for b in after if (a.name, b.name) in relations) > 1:
            raise AxiomViolation("relation-after", f"{a.name} has two zero-relation successors")
        if sum(1 for b in after if (a.name, b.name) not in relations) > 1:
            raise AxiomViolation("path-after", f"{a.name} has two non-relation successors")
        if sum(1 for b in before if (b.name, a.name) in relations) > 1:
            raise AxiomViolation("relation-before", f"{a.name} has two zero-relation predecessors")
        if sum(1 for b in before if (b.name, a.name) not in relations) > 1:
            raise AxiomViolation("path-before", f"{a.name} has two non-relation predecessors")


def validate_skew_gentle(p: QuiverPresentation) -> SkewGentleTriple:
    """Check the gentle conditions on the quiver augmented by the special loops."""
    names = {a.name for a in p.arrows}
    for a, b in p.relations:
        if a not in names or b not in names:
            raise AxiomViolation("relation-arrows", f"relation {a}{b} uses an unknown arrow")
        if p.arrow(a).target != p.arrow(b).source:
            raise AxiomViolation("relation-arrows", f"relation {a}{b} is not a path")
    special = set(p.specialLoops)
    for name in special:
        if not p.arrow(name).is_loop:
            raise AxiomViolation("special-loop", f"{name} is not a loop")
        if (name, name) not in p.relations:
            raise AxiomViolation("special-loop", f"{name} has no square relation")
    sp_vertices = [p.arrow(n).source for n in special]
    if len(set(sp_vertices)) != len(sp_vertices):
        raise AxiomViolation("special-loop", "two special loops at one vertex")
    _check_gentle(list(p.arrows), set(p.relations))
    triple = SkewGentleTriple(
        tuple(a for a in p.arrows if a.name not in special),
        tuple(sorted(sp_vertices)),
        tuple(r for r in p.relations if not (r[0] in special and r[1] in special)),
    )
    return triple
