"""Command-line driver: job configs in, deterministic artifacts and a summary out."""

from __future__ import annotations

import hashlib
import json
import os
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

import click

from .acceptance import run_all
from .algebra import skew_tiling_presentation, tiling_presentation, validate_skew_gentle
from .arc_engine import TaggedArc, arc_literal, base_arcs, normalize
from .dissections import (
    Dissection,
    Edge,
    ExchangeGraph,
    Limits,
    check_connected,
    connects_to_boundary,
    enumerate_dissections,
    exchange_graph,
    flip,
    flip_sign,
    is_costandard,
    is_standard,
    make_dissection,
    mutation_direction,
    tau_tilting_label,
)
from .errors import (
    AxiomViolation,
    BoundaryParallel,
    ConfigError,
    DegenerateSurface,
    FoldedClosureViolated,
    IllegalMonogonCutout,
    IncompatibleArc,
    InternalInconsistency,
    InvalidArc,
    LimitExceeded,
    NoBoundary,
    NotAdmissible,
    NotStandard,
    NullHomotopic,
    SelfIntersecting,
    SurfdissError,
)
from .shear import co_elementary_laminate, elementary_laminate, shear_vector, shears
from .surface_model import PartialTaggedTriangulation, SurfaceModel, SurfaceSpec, build_surface, is_admissible, partial_triangulation

COMMANDS = ("validate", "shear", "standard", "flip", "graph", "check-connected", "algebra", "enumerate", "selftest")
FORMATS = ("json", "dot", "text")
THREADS_ENV = "SURFDISS_THREADS"

EXIT_OK, EXIT_CONFIG, EXIT_LIMIT, EXIT_INVARIANT = 0, 2, 3, 4

# Errors caused by the job description rather than by the mathematics.
_INPUT_ERRORS = (
    ConfigError,
    InvalidArc,
    DegenerateSurface,
    NoBoundary,
    FoldedClosureViolated,
    NullHomotopic,
    BoundaryParallel,
    SelfIntersecting,
    IllegalMonogonCutout,
    IncompatibleArc,
    NotAdmissible,
    NotStandard,
)

_LIMIT_KEYS = ("maxVertices", "maxWordLength", "boundStabilizationMargin")
_TOP_KEYS = {"surface", "R", "command", "limits", "output", "arc", "dissection"}


# ---------------------------------------------------------------------------
# Job configuration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OutputSpec:
    directory: str | None = None
    format: str = "json"

    def to_json(self) -> dict:
        return {"directory": self.directory, "format": self.format}


@dataclass(frozen=True)
class JobConfig:
    """A parsed job. ``R`` is a tuple of arc literals or the string ``"base"``."""

    surface: SurfaceSpec
    R: tuple[Mapping, ...] | str
    command: str
    limits: Limits = field(default_factory=Limits)
    output: OutputSpec = field(default_factory=OutputSpec)
    arc: Mapping | None = None
    dissection: tuple[Mapping, ...] | None = None

    def to_json(self) -> dict:
        out: dict[str, Any] = {
            "surface": self.surface.to_json(),
            "R": self.R if isinstance(self.R, str) else [dict(a) for a in self.R],
            "command": self.command,
            "limits": {k: getattr(self.limits, k) for k in _LIMIT_KEYS},
            "output": self.output.to_json(),
        }
        if self.arc is not None:
            out["arc"] = dict(self.arc)
        if self.dissection is not None:
            out["dissection"] = [dict(a) for a in self.dissection]
        return out

    @classmethod
    def from_json(cls, data: Any) -> "JobConfig":
        if not isinstance(data, Mapping):
            raise ConfigError("a job config must be a JSON object")
        unknown = set(data) - _TOP_KEYS
        if unknown:
            raise ConfigError(f"unknown keys: {sorted(unknown)}")
        command = data.get("command", "validate")
        if command not in COMMANDS:
            raise ConfigError(f"unknown command {command!r}")
        if command == "selftest":
            surface = SurfaceSpec(0, (5,), 0)
        else:
            surface = _parse_surface(data.get("surface"))
        return cls(
            surface=surface,
            R=_parse_arc_list(data.get("R", []), "R"),
            command=command,
            limits=_parse_limits(data.get("limits", {})),
            output=_parse_output(data.get("output", {})),
            arc=_parse_literal(data["arc"], "arc") if data.get("arc") is not None else None,
            dissection=_parse_arc_list(data["dissection"], "dissection") if data.get("dissection") is not None else None,
        )

    def validate(self) -> None:
        if self.command in ("shear", "standard", "flip") and self.arc is None:
            raise ConfigError(f"command {self.command!r} needs an 'arc'")
        if self.command in ("graph", "check-connected", "enumerate", "flip", "algebra") and not self.R:
            raise ConfigError(f"command {self.command!r} needs a non-empty R")


def _parse_surface(raw: Any) -> SurfaceSpec:
    if not isinstance(raw, Mapping):
        raise ConfigError("'surface' must be an object with genus, boundary and punctures")
    try:
        spec = SurfaceSpec.from_json(raw)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"malformed surface: {exc}") from exc
    spec.validate()
    return spec


def _parse_literal(raw: Any, where: str) -> dict:
    if not isinstance(raw, Mapping) or "from" not in raw or "to" not in raw:
        raise ConfigError(f"malformed arc literal in {where}: {raw!r}")
    return dict(raw)


def _parse_arc_list(raw: Any, where: str) -> tuple[Mapping, ...] | str:
    if raw == "base":
        return "base"
    if not isinstance(raw, list):
        raise ConfigError(f"{where} must be a list of arc literals or \"base\"")
    return tuple(_parse_literal(a, where) for a in raw)


def _parse_limits(raw: Any) -> Limits:
    if not isinstance(raw, Mapping) or set(raw) - set(_LIMIT_KEYS):
        raise ConfigError(f"limits may only contain {list(_LIMIT_KEYS)}")
    values = {}
    for k, v in raw.items():
        if not isinstance(v, int) or isinstance(v, bool) or v <= 0:
            raise ConfigError(f"limit {k} must be a positive integer")
        values[k] = v
    return Limits(**values)


def _parse_output(raw: Any) -> OutputSpec:
    if not isinstance(raw, Mapping) or set(raw) - {"directory", "format"}:
        raise ConfigError("output may only contain 'directory' and 'format'")
    fmt = raw.get("format", "json")
    if fmt not in FORMATS:
        raise ConfigError(f"unknown format {fmt!r}")
    directory = raw.get("directory")
    if directory is not None and not isinstance(directory, str):
        raise ConfigError("output directory must be a string")
    return OutputSpec(directory, fmt)


def load_config(path: str | os.PathLike) -> JobConfig:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return JobConfig.from_json(data)


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def dissection_hash(U: Dissection) -> str:
    blob = json.dumps([arc_literal(a) for a in U.arcs], sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()[:12]


def _short(a: TaggedArc) -> str:
    lit = arc_literal(a)
    tags = "".join({1: "+", -1: "-", 0: ""}[t] for t in a.tags)
    word = ",".join(f"{e}.{s}" for e, s in lit["word"]) or f"e{lit.get('edge')}"
    return f"{lit['from']}-{lit['to']}[{word}]{tags}"


def graph_to_json(G: ExchangeGraph) -> dict:
    return {
        "surface": G.context.surface.to_json(),
        "context": [arc_literal(a) for a in G.context.arcs],
        "complete": G.complete,
        "vertices": [
            {
                "id": i,
                "hash": dissection_hash(U),
                "depth": G.depth[i],
                "arcs": [arc_literal(a) for a in U.arcs],
                "label": tau_tilting_label(U).to_json(),
            }
            for i, U in enumerate(G.vertices)
        ],
        "edges": [
            {
                "source": e.source,
                "target": e.target,
                "arc": arc_literal(e.arc),
                "newArc": arc_literal(e.newArc),
                "direction": mutation_direction(G.vertices[e.source], e.arc),
            }
            for e in G.edges
        ],
    }


def graph_from_json(data: Mapping) -> ExchangeGraph:
    """Rebuild an exchange graph from ``graph_to_json`` output."""
    S = SurfaceModel.from_json(data["surface"])
    R = partial_triangulation(S, [normalize(S, a) for a in data["context"]])
    vertices = tuple(Dissection(R, tuple(normalize(S, a) for a in v["arcs"])) for v in data["vertices"])
    edges = tuple(
        Edge(e["source"], e["target"], normalize(S, e["arc"]), normalize(S, e["newArc"])) for e in data["edges"]
    )
    return ExchangeGraph(R, vertices, edges, tuple(v["depth"] for v in data["vertices"]), bool(data["complete"]))


def graph_to_dot(G: ExchangeGraph) -> str:
    lines = ["graph exchange {", "  node [shape=box];"]
    for i, U in enumerate(G.vertices):
        lab = tau_tilting_label(U)
        text = f"{dissection_hash(U)}\\nM={len(lab.moduleArcs)} P[1]={len(lab.projectiveShiftArcs)}"
        lines.append(f'  v{i} [label="{text}"];')
    for e in G.edges:
        direction = mutation_direction(G.vertices[e.source], e.arc)
        lines.append(f'  v{e.source} -- v{e.target} [label="{_short(e.arc)} {direction}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def graph_to_text(G: ExchangeGraph) -> str:
    lines = []
    for i, U in enumerate(G.vertices):
        lines.append(f"v{i} depth={G.depth[i]} hash={dissection_hash(U)} arcs={' '.join(_short(a) for a in U.arcs)}")
    for e in G.edges:
        lines.append(f"v{e.source} -- v{e.target} flip {_short(e.arc)} -> {_short(e.newArc)}")
    return "\n".join(lines) + "\n"


def _vector_json(L, R: PartialTaggedTriangulation) -> dict:
    if not shears(L, R):
        return {"shears": False, "vector": None}
    return {"shears": True, "vector": shear_vector(L, R).to_json()}


# ---------------------------------------------------------------------------
# Running jobs
# ---------------------------------------------------------------------------


@dataclass
class RunResult:
    exit_code: int
    artifact: str = ""
    extension: str = "json"
    summary: dict = field(default_factory=dict)
    message: str = ""


def _context(config: JobConfig) -> tuple[SurfaceModel, PartialTaggedTriangulation]:
    S = build_surface(config.surface)
    if config.R == "base":
        arcs = base_arcs(S)
    else:
        arcs = [normalize(S, a) for a in config.R]
    return S, partial_triangulation(S, arcs)


def _render(config: JobConfig, fmt: str, payload: dict, text: str | None = None) -> tuple[str, str]:
    if fmt == "json":
        return dumps(payload), "json"
    if fmt == "text":
        if text is None:
            text = "".join(f"{k}: {json.dumps(v, sort_keys=True)}\n" for k, v in sorted(payload.items()))
        return text, "txt"
    raise ConfigError(f"format 'dot' is only available for graph commands, not {config.command!r}")


def _execute(config: JobConfig, fmt: str, threads: int) -> RunResult:
    command = config.command
    if command == "selftest":
        results = run_all()
        text = "\n".join(r.line() for r in results) + "\n"
        payload = {"checks": [{"number": r.number, "title": r.title, "passed": r.passed, "detail": r.detail} for r in results]}
        art, ext = _render(config, fmt, payload, text)
        failed = sum(not r.passed for r in results)
        summary = {"checks": len(results), "failed": failed}
        return RunResult(EXIT_INVARIANT if failed else EXIT_OK, art, ext, summary)

    S, R = _context(config)

    if command == "validate":
        payload = {
            "surface": config.surface.to_json(),
            "rank": S.n_arcs,
            "R": [arc_literal(a) for a in R.arcs],
            "size": len(R.arcs),
            "triangulation": len(R.arcs) == S.n_arcs,
            "admissible": is_admissible(S, R),
            "connectsToBoundary": connects_to_boundary(R),
        }
        art, ext = _render(config, fmt, payload)
        return RunResult(EXIT_OK, art, ext, {"size": len(R.arcs), "rank": S.n_arcs})

    if command in ("shear", "standard"):
        delta = normalize(S, config.arc)  # type: ignore[arg-type]
        if command == "shear":
            payload = {
                "arc": arc_literal(delta),
                "elementary": _vector_json(elementary_laminate(delta), R),
                "coElementary": _vector_json(co_elementary_laminate(delta), R),
            }
            summary = {"shears": payload["elementary"]["shears"]}
        else:
            std, costd = is_standard(delta, R), is_costandard(delta, R)
            payload = {
                "arc": arc_literal(delta),
                "standard": std,
                "costandard": costd,
                "index": _index(elementary_laminate(delta), R) if std else None,
                "shiftedIndex": _index(co_elementary_laminate(delta), R) if costd else None,
            }
            summary = {"standard": std, "costandard": costd}
        art, ext = _render(config, fmt, payload)
        return RunResult(EXIT_OK, art, ext, summary)

    if command == "flip":
        arcs = R.arcs if config.dissection is None else [normalize(S, a) for a in config.dissection]
        U = make_dissection(R, arcs)
        l = normalize(S, config.arc)  # type: ignore[arg-type]
        if l not in U.arcs:
            raise ConfigError("the arc to flip is not in the dissection")
        V, new = flip(U, l)
        payload = {
            "from": [arc_literal(a) for a in U.arcs],
            "arc": arc_literal(l),
            "sign": flip_sign(U, l),
            "direction": mutation_direction(U, l),
            "newArc": arc_literal(new),
            "to": [arc_literal(a) for a in V.arcs],
        }
        art, ext = _render(config, fmt, payload)
        return RunResult(EXIT_OK, art, ext, {"direction": payload["direction"]})

    if command in ("graph", "check-connected"):
        return _graph_job(config, fmt, threads, R)

    if command == "enumerate":
        found = enumerate_dissections(R, margin=config.limits.boundStabilizationMargin, max_bound=config.limits.maxWordLength)
        if len(found) > config.limits.maxVertices:
            raise LimitExceeded(f"more than {config.limits.maxVertices} dissections")
        payload = {"dissections": [[arc_literal(a) for a in U.arcs] for U in found]}
        text = "\n".join(" ".join(_short(a) for a in U.arcs) for U in found) + "\n"
        art, ext = _render(config, fmt, payload, text)
        return RunResult(EXIT_OK, art, ext, {"dissections": len(found)})

    if command == "algebra":
        p = skew_tiling_presentation(R)
        triple = validate_skew_gentle(p)
        validate_skew_gentle(tiling_presentation(R))
        payload = {"skewTiling": p.to_json(), "tiling": tiling_presentation(R).to_json()}
        art, ext = _render(config, fmt, payload, p.to_text() + "\n")
        return RunResult(EXIT_OK, art, ext, {"arrows": len(p.arrows), "special": len(triple.special)})

    raise ConfigError(f"unknown command {command!r}")


def _index(L, R: PartialTaggedTriangulation) -> dict:
    return (-shear_vector(L, R)).to_json()


def _graph_job(config: JobConfig, fmt: str, threads: int, R: PartialTaggedTriangulation) -> RunResult:
    G = exchange_graph(R, config.limits, threads=threads)
    oracle = None
    if config.command == "check-connected":
        oracle = len(enumerate_dissections(R, margin=config.limits.boundStabilizationMargin, max_bound=config.limits.maxWordLength))
    report = check_connected(G, oracle)
    summary = report.summary()
    summary.update({"edges": len(G.edges), "complete": G.complete, "connectsToBoundary": report.connectsToBoundary})
    if oracle is not None:
        summary.update({"oracle": oracle, "oracleMatch": report.oracleMatch})
    if report.defects:
        summary["defects"] = list(report.defects)
    art, ext = _graph_artifact(G, fmt)
    code = EXIT_INVARIANT if report.defects else EXIT_OK
    return RunResult(code, art, ext, summary, "; ".join(report.defects))


def _graph_artifact(G: ExchangeGraph, fmt: str) -> tuple[str, str]:
    if fmt == "dot":
        return graph_to_dot(G), "dot"
    if fmt == "text":
        return graph_to_text(G), "txt"
    return dumps(graph_to_json(G)), "json"


def run(config: JobConfig, threads: int = 1, fmt: str | None = None) -> RunResult:
    """Execute a job; errors are mapped onto the exit-code contract."""
    fmt = fmt or config.output.format
    start = time.perf_counter()
    try:
        config.validate()
        result = _execute(config, fmt, threads)
    except LimitExceeded as exc:
        result = RunResult(EXIT_LIMIT, message=str(exc), summary={"limitExceeded": str(exc)})
        if isinstance(exc.partial, ExchangeGraph):
            result.artifact, result.extension = _graph_artifact(exc.partial, fmt if fmt != "text" else "json")
            result.summary["partialVertices"] = len(exc.partial.vertices)
    except _INPUT_ERRORS as exc:
        result = RunResult(EXIT_CONFIG, message=f"{type(exc).__name__}: {exc}")
    except (InternalInconsistency, AxiomViolation, SurfdissError) as exc:
        result = RunResult(EXIT_INVARIANT, message=f"{type(exc).__name__}: {exc}")
    result.summary = {"command": config.command, "exitCode": result.exit_code, **result.summary}
    result.summary["seconds"] = round(time.perf_counter() - start, 3)
    return result


def write_outputs(config: JobConfig, result: RunResult, out: str | None) -> list[Path]:
    """Write the artifact and ``summary.json`` into ``out``; returns the written paths."""
    directory = Path(out)  # type: ignore[arg-type]
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    if result.artifact:
        path = directory / f"{config.command}.{result.extension}"
        path.write_text(result.artifact)
        written.append(path)
    path = directory / "summary.json"
    path.write_text(dumps(result.summary))
    written.append(path)
    return written


# ---------------------------------------------------------------------------
# Click entry point
# ---------------------------------------------------------------------------


def _default_threads() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _common(fn):
    fn = click.option("--out", type=click.Path(file_okay=False), default=None, help="Directory for artifacts.")(fn)
    fn = click.option("--format", "fmt", type=click.Choice(FORMATS), default=None, help="Artifact format.")(fn)
    fn = click.option(
        "--threads", type=click.IntRange(min=1), default=None, help=f"Worker threads (default ${THREADS_ENV} or 1)."
    )(fn)
    fn = click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None, help="Job config (JSON).")(fn)
    return fn


def _dispatch(command: str | None, config_path: str | None, threads: int | None, fmt: str | None, out: str | None) -> None:
    try:
        if config_path is None:
            if command != "selftest":
                raise ConfigError("--config is required")
            config = JobConfig(SurfaceSpec(0, (5,), 0), (), "selftest")
        else:
            config = load_config(config_path)
        if command is not None and command != config.command:
            config = JobConfig(**{**config.__dict__, "command": command})
    except (ConfigError, *_INPUT_ERRORS) as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(EXIT_CONFIG)
    result = run(config, threads or _default_threads(), fmt)
    target = out or config.output.directory
    if target:
        write_outputs(config, result, target)
    elif result.artifact:
        click.echo(result.artifact, nl=False)
    if result.message:
        click.echo(result.message, err=True)
    click.echo(json.dumps(result.summary, sort_keys=True), err=True)
    sys.exit(result.exit_code)


@click.group()
def main() -> None:
    """Dissections of punctured marked surfaces and their exchange graphs."""


@main.command("run")
@_common
def run_cmd(config_path, threads, fmt, out) -> None:
    """Run the command named in the config."""
    _dispatch(None, config_path, threads, fmt, out)


def _register(name: str, doc: str) -> None:
    @_common
    def cmd(config_path, threads, fmt, out) -> None:
        _dispatch(name, config_path, threads, fmt, out)

    cmd.__doc__ = doc
    main.command(name)(cmd)


for _name, _doc in (
    ("validate", "Parse the surface and R and report basic invariants."),
    ("shear", "Shear vectors of e(arc) and e^op(arc) against R."),
    ("standard", "Standardness of an arc and its index vectors."),
    ("flip", "Flip one arc of a dissection."),
    ("graph", "Exchange graph of R by breadth-first search."),
    ("check-connected", "Exchange graph checked against an independent enumeration."),
    ("algebra", "Skew-tiling presentation of an admissible R."),
    ("enumerate", "Dissections by bounded enumeration of standard arcs."),
    ("selftest", "Run the acceptance checks on built-in fixtures."),
):
    _register(_name, _doc)


if __name__ == "__main__":
    main()
