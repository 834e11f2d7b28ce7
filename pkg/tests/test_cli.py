import json
import re

import pytest

from cylsimplex.cli import main

CORNER = '{"dim":3,"label":"corner","vertices":[[0,0,0],[1,0,0],[0,1,0],[0,0,1]]}'
COPLANAR = '{\n "dim": 3,\n "vertices": [[0,0,0],[1,0,0],[0,1,0],[1,1,0]]\n}'


@pytest.fixture
def corner(tmp_path):
    p = tmp_path / "corner.json"
    p.write_text(CORNER)
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_regular_dim4(capsys):
    code, out, _ = run(capsys, "regular", "--dim", "4")
    assert code == 0
    assert "0.7826237921" in out
    assert "7√5/20" in out
    assert "total: 150" in out


def test_regular_census_json(capsys):
    code, out, _ = run(capsys, "regular", "--dim", "4", "--census", "--format", "json")
    data = json.loads(out)
    assert data["census"]["total"] == 150
    assert len(data["census"]["entries"]) == 6
    assert data["stirling_check"]["status"] == "equal"
    assert abs(data["min_radius"]["value"] - 0.7826237921249264) < 1e-12


def test_weissbach_dim3(capsys):
    code, out, _ = run(capsys, "weissbach", "--dim", "3")
    assert code == 0
    assert out.splitlines()[0] == "26 solutions (18 + 8)"


def test_degenerate_input_exit_1(tmp_path, capsys):
    p = tmp_path / "degenerate.json"
    p.write_text(COPLANAR)
    code, out, err = run(capsys, "circumscribe", str(p))
    assert code == 1
    assert "affine independence" in err
    assert "line 3" in err


def test_bad_usage_exit_1(capsys):
    assert run(capsys, "regular")[0] == 1
    assert run(capsys, "nope")[0] == 1
    assert run(capsys, "regular", "--dim", "12")[0] == 1
    assert run(capsys, "circumscribe", "/nonexistent/file.json")[0] == 1
    assert run(capsys, "circumscribe", "--restarts", "0", "/nonexistent/file.json")[0] == 1


def test_malformed_json_exit_1(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text('{"dim": 3,\n "vertices": [[0,0,0],[1,0]')
    code, _, err = run(capsys, "circumscribe", str(p))
    assert code == 1
    assert "line 2" in err


def test_circumscribe_report(corner, capsys):
    code, out, _ = run(capsys, "circumscribe", corner, "--restarts", "500", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["input"]["label"] == "corner"
    assert data["classification"]["tag"] == "generic"
    assert data["config"]["rng_seed"] == 42 and data["config"]["restarts"] == 500
    rows = data["critical_points"]
    assert rows and {"v", "r", "kind", "residual", "basin_count"} <= set(rows[0])
    assert data["global_min"]["radius"]["value"] == min(r["r"] for r in rows)
    assert data["bounds"]["e3_system"] == 36


def test_deterministic_modulo_timings(corner, capsys):
    outs = []
    for _ in range(2):
        _, out, _ = run(capsys, "circumscribe", corner, "--restarts", "300", "--seed", "7", "--format", "json")
        data = json.loads(out)
        data.pop("timings")
        outs.append(data)
    assert outs[0] == outs[1]


def test_text_and_json_carry_same_numbers(corner, capsys):
    _, js, _ = run(capsys, "circumscribe", corner, "--restarts", "300", "--format", "json")
    _, txt, _ = run(capsys, "circumscribe", corner, "--restarts", "300")
    data = json.loads(js)
    for row in data["critical_points"]:
        assert repr(row["r"]) in txt
    assert txt.splitlines()[0] == data["summary"]


def test_enclose_and_oracle(corner, capsys):
    code, out, _ = run(capsys, "enclose", corner, "--samples", "20000", "--format", "json")
    assert code == 0
    data = json.loads(out)
    r = data["enclosing"]["radius"]["value"]
    assert data["enclosing"]["witness"] in ("circumscribing_4pts", "pair_cylinder_a", "pair_cone_b", "pair_bisector_c")
    assert abs(data["oracle"]["radius"] - r) < 1e-4
    code, out, _ = run(capsys, "oracle", corner, "--samples", "20000", "--format", "json")
    assert code == 0
    assert abs(json.loads(out)["oracle"]["radius"]["value"] - r) < 1e-4


def test_enclose_requires_3d(tmp_path, capsys):
    p = tmp_path / "tri.json"
    p.write_text('{"dim":2,"vertices":[[0,0],[1,0],[0,1]]}')
    assert run(capsys, "enclose", str(p))[0] == 1


def test_stdin_and_output_file(tmp_path, monkeypatch, capsys):
    import io
    import sys

    class Stdin:
        buffer = io.BytesIO(CORNER.encode())

    monkeypatch.setattr(sys, "stdin", Stdin)
    out = tmp_path / "report.txt"
    code, printed, _ = run(capsys, "circumscribe", "-", "--restarts", "200", "--output", str(out))
    assert code == 0 and printed == ""
    assert re.match(r"\d+ critical directions", out.read_text())


def test_help_exit_0(capsys):
    assert run(capsys, "--help")[0] == 0
