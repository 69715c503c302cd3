import json
from pathlib import Path

import pytest

from hgrec.cli import main
from hgrec.core import load_hypergraph
from hgrec.kgeval import prompt_key, render_prompt
from conftest import KG_RESPONSE, KG_TSV


def run(*argv) -> int:
    return main([str(a) for a in argv])


def quickstart(workdir: Path) -> dict[str, Path]:
    """The documented gen -> sample -> mm-sample -> train -> recover -> report chain."""
    workdir.mkdir(parents=True, exist_ok=True)
    paths = {name: workdir / name for name in (
        "g.hg", "d.ds", "d.mm", "o.json", "rec.hg", "report.json",
    )}
    assert run("gen", "--structure", "star", "--n", 6, "--w-min", 1, "--w-max", 10,
               "--seed", 1, "-o", paths["g.hg"]) == 0
    assert run("sample", "--hypergraph", paths["g.hg"], "-n", 500, "--seed", 2,
               "-o", paths["d.ds"]) == 0
    assert run("mm-sample", "--hypergraph", paths["g.hg"], "-n", 2000, "-k", 1,
               "--seed", 3, "-o", paths["d.mm"]) == 0
    assert run("train", "--mm-data", paths["d.mm"], "-o", paths["o.json"]) == 0
    assert run("recover", "--oracle", paths["o.json"], "--candidates", "pairs",
               "--mask", "uniform1", "-o", paths["rec.hg"]) == 0
    assert run("report", "--truth", paths["g.hg"], "--rec", paths["rec.hg"],
               "-o", paths["report.json"]) == 0
    return paths


def test_full_pipeline_and_formats(tmp_path):
    paths = quickstart(tmp_path)
    report = json.loads(paths["report.json"].read_text())
    assert report["sketch_missing"] == [] and report["sketch_spurious"] == []
    assert 0.0 <= report["d"] < 0.5
    rec = load_hypergraph(paths["rec.hg"])
    assert rec.normalized and rec.m == 5


def test_pipeline_is_byte_deterministic(tmp_path):
    a = quickstart(tmp_path / "a")
    b = quickstart(tmp_path / "b")
    for name in a:
        assert a[name].read_bytes() == b[name].read_bytes(), name


def test_exact_oracle_recover(tmp_path):
    g = tmp_path / "g.hg"
    rec = tmp_path / "rec.hg"
    assert run("gen", "--structure", "chain", "--n", 4, "--w-min", 1, "--w-max", 10,
               "--seed", 5, "-o", g) == 0
    assert run("recover", "--exact-from", g, "--candidates", "pairs", "-o", rec) == 0
    truth = load_hypergraph(g)
    from hgrec import dissimilarity

    assert dissimilarity(load_hypergraph(rec), truth) <= 1e-9


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        run("no-such-command")
    assert exc.value.code == 2


def test_domain_error_exit_code(tmp_path, capsys):
    code = run("gen", "--structure", "star", "--n", 1, "-o", tmp_path / "x.hg")
    assert code == 1
    assert "InvalidSize" in capsys.readouterr().err


def test_align_methods(tmp_path):
    h1 = tmp_path / "a.hg"
    h2 = tmp_path / "b.hg"
    out = tmp_path / "al.txt"
    assert run("gen", "--structure", "frucht", "--seed", 7, "-o", h1) == 0
    assert run("gen", "--structure", "frucht", "--seed", 7, "-o", h2) == 0
    assert run("align", "--h1", h1, "--h2", h2, "--method", "wl-ir", "-o", out) == 0
    lines = out.read_text().strip().splitlines()
    assert lines[-1].startswith("#cost ")
    assert len(lines) == 13  # 12 node pairs + cost


def test_align_non_isomorphic_exits_1(tmp_path, capsys):
    h1 = tmp_path / "a.hg"
    h2 = tmp_path / "b.hg"
    assert run("gen", "--structure", "star", "--n", 6, "--seed", 1, "-o", h1) == 0
    assert run("gen", "--structure", "chain", "--n", 6, "--seed", 1, "-o", h2) == 0
    code = run("align", "--h1", h1, "--h2", h2, "--method", "wl-ir", "-o", tmp_path / "x")
    assert code == 1
    assert "NoIsomorphism" in capsys.readouterr().err


def test_fuse_accepts_alignment_output(tmp_path):
    h = tmp_path / "g.hg"
    d1 = tmp_path / "d1.ds"
    d2 = tmp_path / "d2.ds"
    mapping = tmp_path / "map.txt"
    fused = tmp_path / "fused.ds"
    assert run("gen", "--structure", "star", "--n", 5, "--seed", 1, "-o", h) == 0
    assert run("sample", "--hypergraph", h, "-n", 50, "--seed", 2, "-o", d1) == 0
    assert run("sample", "--hypergraph", h, "-n", 70, "--seed", 3, "-o", d2) == 0
    assert run("align", "--h1", h, "--h2", h, "--method", "exact", "-o", mapping) == 0
    assert run("fuse", "--d1", d1, "--d2", d2, "--mapping", mapping, "-o", fused) == 0
    assert len(fused.read_text().strip().splitlines()) == 120


def test_bounds_json(tmp_path, capsys):
    assert run("bounds", "--m", 10, "--kappa", 3, "-L", 2, "--c-pi", 0.5, "--C-pi", 2,
               "--epsilon", 0.1, "--delta", 0.1, "--n-samples", 10000,
               "--m0", 2, "--kappa0", 3) == 0
    import math

    doc = json.loads(capsys.readouterr().out)
    assert doc["N_min"] == 51176
    assert doc["minimax_lower_bound"] == pytest.approx(math.sqrt(10 / 10000) / 16, abs=1e-15)
    assert doc["weight_min_floor"] == pytest.approx(1 / 6)


def test_sweep_and_fit(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({
        "instances": [{"structure": "star", "n": 6, "w_min": 1.0, "w_max": 10.0}],
        "n_grid": [100, 400, 1600],
        "k_grid": [1],
        "num_seeds": 2,
    }), encoding="utf-8")
    out = tmp_path / "rows.csv"
    assert run("sweep", "--config", cfg, "-o", out) == 0
    assert run("fit", "--csv", out, "--x-field", "N", "--y-field", "d_plugin") == 0
    doc = json.loads(capsys.readouterr().out)
    assert -1.0 < doc["slope"] < 0.0


def test_kg_pipeline(tmp_path, capsys):
    kg = tmp_path / "kg.tsv"
    kg.write_text(KG_TSV, encoding="utf-8")
    canonical = tmp_path / "canon.tsv"
    sub = tmp_path / "sub.json"
    prompt = tmp_path / "prompt.txt"
    parsed = tmp_path / "parsed.json"

    assert run("kg-ingest", "--tsv", kg, "-o", canonical) == 0
    assert "table\t" in canonical.read_text() or "\ttable" in canonical.read_text()

    assert run("kg-extract", "--kg", kg, "--source", "table", "-k", 2, "-d", 2, "-o", sub) == 0
    doc = json.loads(sub.read_text())
    assert doc["entities"] == ["table", "furniture", "house", "room"]
    assert len(doc["edges"]) == 4

    assert run("kg-prompt", "--subgraph", sub, "-o", prompt) == 0
    assert prompt.read_text().startswith("Consider the following concepts: table, furniture, house, room.")

    responses = tmp_path / "responses"
    responses.mkdir()
    (responses / f"{prompt_key(prompt.read_text())}.txt").write_text(KG_RESPONSE, encoding="utf-8")

    resp = tmp_path / "resp.txt"
    assert run("kg-chat", "--prompt-file", prompt, "--responses-dir", responses, "-o", resp) == 0
    assert resp.read_text() == KG_RESPONSE

    assert run("kg-parse", "--response", resp, "--subgraph", sub, "-o", parsed) == 0
    parsed_doc = json.loads(parsed.read_text())
    assert len(parsed_doc["pairs"]) == 5
    assert len(parsed_doc["unparsed"]) == 2


def test_kg_eval_offline_byte_stable(tmp_path):
    kg = tmp_path / "kg.tsv"
    kg.write_text(KG_TSV, encoding="utf-8")
    entities = ["table", "furniture", "house", "room"]
    prompt = render_prompt(entities, 2)
    responses = tmp_path / "responses"
    responses.mkdir()
    (responses / f"{prompt_key(prompt)}.txt").write_text(KG_RESPONSE, encoding="utf-8")

    outputs = []
    for tag in ("one", "two"):
        report = tmp_path / f"report-{tag}.json"
        csv_row = tmp_path / f"row-{tag}.csv"
        assert run("kg-eval", "--kg", kg, "--source", "table", "-k", 2, "-d", 2,
                   "--responses-dir", responses, "--model", "fake", "-o", report,
                   "--csv", csv_row) == 0
        outputs.append((report.read_bytes(), csv_row.read_bytes()))
    assert outputs[0] == outputs[1]
    doc = json.loads(outputs[0][0])
    assert doc["score"] == 0.75
    assert outputs[0][1].decode().splitlines()[1] == "table,2,2,fake,0.75,1,2"
