from __future__ import annotations

import json

import pytest
from click.testing import CliRunner

from surfdiss.cli import (
    EXIT_CONFIG,
    EXIT_INVARIANT,
    EXIT_LIMIT,
    EXIT_OK,
    JobConfig,
    graph_from_json,
    graph_to_json,
    main,
    run,
)
import surfdiss.cli as cli
from surfdiss import (
    ConfigError,
    DegenerateSurface,
    InternalInconsistency,
    SurfaceSpec,
    base_arcs,
    build_surface,
    exchange_graph,
    partial_triangulation,
)

HEXAGON = {"genus": 0, "boundary": [6], "punctures": 0}
SQUARE = {"genus": 0, "boundary": [4], "punctures": 1}
FOLDED_PAIR = [
    {"from": 1, "to": 4, "word": [], "tags": {"to": -1}, "edge": 2},
    {"from": 1, "to": 4, "word": [], "tags": {"to": 1}, "edge": 2},
]


def job(**kw):
    data = {"surface": HEXAGON, "R": "base", "command": "graph"}
    data.update(kw)
    return JobConfig.from_json(data)


def write(tmp_path, data, name="job.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


def test_hexagon_graph_dot_and_summary(tmp_path):
    cfg = write(tmp_path, {"surface": HEXAGON, "R": "base", "command": "graph"})
    res = CliRunner().invoke(main, ["graph", "--config", cfg, "--format", "dot", "--out", str(tmp_path / "o")])
    assert res.exit_code == EXIT_OK
    dot = (tmp_path / "o" / "graph.dot").read_text()
    assert dot.count("[label=") == 14 + 21
    summary = json.loads((tmp_path / "o" / "summary.json").read_text())
    assert {k: summary[k] for k in ("vertices", "regular", "connected")} == {"vertices": 14, "regular": 3, "connected": True}


def test_artifacts_identical_across_thread_counts(tmp_path, monkeypatch):
    cfg = write(tmp_path, {"surface": SQUARE, "R": "base", "command": "graph"})
    runner = CliRunner()
    outs = []
    for threads in ("1", "3"):
        out = tmp_path / f"t{threads}"
        res = runner.invoke(main, ["run", "--config", cfg, "--threads", threads, "--out", str(out)])
        assert res.exit_code == EXIT_OK
        outs.append((out / "graph.json").read_bytes())
    monkeypatch.setenv("SURFDISS_THREADS", "2")
    res = runner.invoke(main, ["run", "--config", cfg, "--out", str(tmp_path / "env")])
    outs.append((tmp_path / "env" / "graph.json").read_bytes())
    assert outs[0] == outs[1] == outs[2]


def test_malformed_literal_is_a_config_error(tmp_path):
    cfg = write(tmp_path, {"surface": HEXAGON, "R": [{"from": 0, "to": "x"}], "command": "graph"})
    res = CliRunner().invoke(main, ["run", "--config", cfg])
    assert res.exit_code == EXIT_CONFIG


@pytest.mark.parametrize(
    "data",
    [
        {"surface": HEXAGON, "R": "base", "command": "nope"},
        {"surface": HEXAGON, "R": "base", "command": "graph", "limits": {"maxVertices": 0}},
        {"surface": HEXAGON, "R": "base", "command": "graph", "limits": {"other": 1}},
        {"surface": HEXAGON, "R": "base", "command": "graph", "extra": 1},
        {"surface": HEXAGON, "R": 5, "command": "graph"},
        {"surface": HEXAGON, "R": "base", "command": "graph", "output": {"format": "svg"}},
    ],
)
def test_bad_configs(data):
    with pytest.raises(ConfigError):
        JobConfig.from_json(data)


def test_degenerate_surface_in_config(tmp_path):
    data = {"surface": {"genus": 0, "boundary": [3], "punctures": 0}, "R": [], "command": "validate"}
    with pytest.raises(DegenerateSurface):
        JobConfig.from_json(data)
    res = CliRunner().invoke(main, ["run", "--config", write(tmp_path, data)])
    assert res.exit_code == EXIT_CONFIG


def test_missing_config_file(tmp_path):
    res = CliRunner().invoke(main, ["graph", "--config", str(tmp_path / "missing.json")])
    assert res.exit_code == EXIT_CONFIG


def test_command_specific_fields():
    assert run(job(command="shear")).exit_code == EXIT_CONFIG
    assert run(job(command="graph", R=[])).exit_code == EXIT_CONFIG


def test_limit_exit_code_and_partial_artifact():
    res = run(job(surface=SQUARE, limits={"maxVertices": 10}))
    assert res.exit_code == EXIT_LIMIT
    assert len(json.loads(res.artifact)["vertices"]) == 10


def test_dot_only_for_graph_commands():
    assert run(job(command="validate"), fmt="dot").exit_code == EXIT_CONFIG


def test_algebra_text():
    res = run(JobConfig.from_json({"surface": SQUARE, "R": FOLDED_PAIR, "command": "algebra", "output": {"format": "text"}}))
    assert res.exit_code == EXIT_OK
    assert res.artifact == "vertices: 0; arrows: a0: 0 -> 0; special: {0}; relations: [a0a0-a0]\n"


def test_algebra_not_admissible():
    assert run(job(surface=SQUARE, command="algebra")).exit_code == EXIT_CONFIG


def test_check_connected():
    res = run(job(surface=SQUARE, command="check-connected"))
    assert res.exit_code == EXIT_OK
    assert res.summary["oracle"] == 50 and res.summary["oracleMatch"]


def test_flip_and_standard_and_shear():
    S = build_surface(SurfaceSpec.from_json(SQUARE))
    lit = json.loads(json.dumps(base_arcs(S)[0].to_json()))
    flipped = run(job(surface=SQUARE, command="flip", arc=lit))
    assert flipped.exit_code == EXIT_OK
    data = json.loads(flipped.artifact)
    assert data["sign"] in (1, -1)
    assert lit not in data["to"]
    standard = json.loads(run(job(surface=SQUARE, command="standard", arc=lit)).artifact)
    assert standard["standard"] and standard["costandard"]
    assert sorted(standard["index"]["entries"].values()) == [0, 0, 0, 1]
    shear = json.loads(run(job(surface=SQUARE, command="shear", arc=lit)).artifact)
    assert sorted(shear["elementary"]["vector"]["entries"].values()) == [-1, 0, 0, 0]


def test_enumerate_counts():
    res = run(job(surface=SQUARE, command="enumerate"))
    assert res.summary["dissections"] == 50


def test_validate_reports():
    data = json.loads(run(job(command="validate")).artifact)
    assert data["rank"] == 3 and data["triangulation"] and data["connectsToBoundary"]


def test_config_round_trip():
    cfg = job(surface=SQUARE, R=FOLDED_PAIR, command="algebra", limits={"maxVertices": 7}, arc=FOLDED_PAIR[0])
    assert JobConfig.from_json(json.loads(json.dumps(cfg.to_json()))) == cfg


def test_graph_json_round_trip():
    S = build_surface(SurfaceSpec.from_json(SQUARE))
    G = exchange_graph(partial_triangulation(S, base_arcs(S)[:3]))
    data = json.loads(json.dumps(graph_to_json(G)))
    assert graph_from_json(data) == G


def test_invariant_violation_exit_code(monkeypatch):
    def broken(*args, **kwargs):
        raise InternalInconsistency("forced")

    monkeypatch.setattr(cli, "exchange_graph", broken)
    assert run(job()).exit_code == EXIT_INVARIANT


def test_selftest_exit_code_reflects_failures(monkeypatch):
    from surfdiss.acceptance import CheckResult

    monkeypatch.setattr(cli, "run_all", lambda: [CheckResult(1, "x", True, "", 0.0), CheckResult(2, "y", False, "", 0.0)])
    res = run(JobConfig.from_json({"command": "selftest"}), fmt="text")
    assert res.exit_code == EXIT_INVARIANT
    assert res.artifact.splitlines()[1].startswith("[FAIL]")
