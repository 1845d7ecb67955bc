import json
from pathlib import Path

import numpy as np
import pytest

from goldens import TRIBO_M1_GEOM, TRIBO_M2_STAR
from rauzygeom.cli import main

SUBS = Path(__file__).resolve().parent.parent / "substitutions"
HOKKAIDO = str(SUBS / "hokkaido.sub")
TRIBO = str(SUBS / "tribonacci.sub")
NONPROJ = str(SUBS / "nonprojecting_t2.sub")


def parse_csv_matrices(text):
    blocks = {}
    name = None
    for line in text.strip().split("\n"):
        if "," not in line:
            name = line
            blocks[name] = []
        else:
            blocks[name].append([int(v) for v in line.split(",")])
    return {k: np.array(v) for k, v in blocks.items() if v}


def test_matrices_tribonacci(capsys):
    assert main(["matrices", "--sub", TRIBO, "--exponent", "2"]) == 0
    blocks = parse_csv_matrices(capsys.readouterr().out)
    assert np.array_equal(blocks["M_2_star"], TRIBO_M2_STAR)
    assert np.array_equal(blocks["M_2_geometric"], TRIBO_M1_GEOM)
    assert np.array_equal(blocks["B_2"], TRIBO_M2_STAR.T)


def test_matrices_report_file(tmp_path, capsys):
    out = tmp_path / "m.csv"
    assert main(["matrices", "--sub", TRIBO, "--report", str(out)]) == 0
    capsys.readouterr()
    assert "B_2" in out.read_text()


def test_classify_failure_exit_code(capsys):
    assert main(["classify", "--sub", NONPROJ]) == 2
    report = json.loads(capsys.readouterr().out)
    assert not report["nice"]
    assert not report["hypotheses"]["S1"]["passed"]
    assert report["pisot_factor"] == "x^3 - 2x^2 + x - 1"


def test_classify_output_deterministic(capsys):
    main(["classify", "--sub", NONPROJ])
    first = capsys.readouterr().out
    main(["classify", "--sub", NONPROJ])
    assert capsys.readouterr().out == first


def test_scc_table(capsys):
    assert main(["scc", "--sub", HOKKAIDO]) == 0
    lines = capsys.readouterr().out.strip().split("\n")
    assert lines[0] == "pair_a,pair_b,k"
    assert len(lines) == 31
    assert "1^2^3,1^2^4,7" in lines


def test_coding_golden_prefix(capsys):
    assert main(["coding", "--sub", HOKKAIDO, "--n", "30", "--level", "10"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["expected"] == "342343234342342334234342343234"
    assert report["mismatches"] == []


def test_render_smoke(tmp_path, capsys):
    svg = tmp_path / "patch.svg"
    report_path = tmp_path / "render.json"
    code = main(
        [
            "render",
            "--sub",
            HOKKAIDO,
            "--iters",
            "1",
            "--svg",
            str(svg),
            "--report",
            str(report_path),
        ]
    )
    assert code == 0
    report = json.loads(report_path.read_text())
    assert report["projects_well"]
    assert report["faces"] > 5
    assert svg.read_text().startswith('<?xml version="1.0"')


def test_render_fractal_level(tmp_path, capsys):
    svg = tmp_path / "fractal.svg"
    code = main(
        ["render", "--sub", HOKKAIDO, "--iters", "1", "--level", "6", "--svg", str(svg)]
    )
    capsys.readouterr()
    assert code == 0
    assert svg.read_text().count("<polygon") > 20


def test_orbit(capsys):
    assert main(["orbit", "--sub", HOKKAIDO, "--iters", "50", "--level", "10"]) == 0
    out = capsys.readouterr().out.strip().split("\n")[0]
    assert len(out) == 50
    assert set(out) <= set("234")


def test_usage_errors(capsys):
    assert main(["no-such-command"]) == 1
    assert main(["classify"]) == 1  # missing --sub
    assert main(["classify", "--sub", "/does/not/exist.sub"]) == 1
    capsys.readouterr()
