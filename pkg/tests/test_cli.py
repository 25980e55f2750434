import subprocess
import sys
from pathlib import Path

import pytest

from postulatum.cli import main

ROOT = Path(__file__).parent.parent
SCENES = ROOT / "scenes"
GOLDEN = Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("graph, code", [
    ("elements_book1.kg", 0),
    ("bolyai.kg", 1),
    ("elements_misplaced.kg", 1),
])
def test_analyze_exit_codes(capsys, graph, code):
    got, out, _ = run(capsys, "analyze", "--graph", graph)
    assert got == code
    assert out == (GOLDEN / f"analyze_{graph[:-3]}.txt").read_text()


def test_analyze_file_path(capsys, tmp_path):
    path = tmp_path / "g.kg"
    path.write_text("node A kind=proposition\nnode B kind=proposition\nuses A B\n")
    code, out, _ = run(capsys, "analyze", "--graph", str(path))
    assert code == 1 and "[K2-order] A" in out


def test_analyze_parse_error(capsys, tmp_path):
    path = tmp_path / "bad.kg"
    path.write_text("node A kind=proposition\nuses A Z\n")
    code, _, err = run(capsys, "analyze", "--graph", str(path))
    assert code == 2 and "line 2" in err and len(err.strip().splitlines()) == 1


def test_analyze_missing_file(capsys):
    assert run(capsys, "analyze", "--graph", "/nonexistent/x.kg")[0] == 2


def test_analyze_strict(capsys, tmp_path):
    path = tmp_path / "g.kg"
    path.write_text("property lonely finite\n")
    assert run(capsys, "analyze", "--graph", str(path))[0] == 0
    code, out, _ = run(capsys, "analyze", "--graph", str(path), "--strict")
    assert code == 1 and "unused-properties: lonely" in out
    assert run(capsys, "analyze", "--graph", "elements_book1.kg", "--strict")[0] == 0


def test_verify_prop_4_1(capsys):
    code, out, _ = run(capsys, "verify", "--prop", "4.1", "--trials", "1000", "--seed", "42")
    assert code == 0 and "failures: 0\n" in out
    assert out == run(capsys, "verify", "--prop", "4.1", "--trials", "1000", "--seed", "42")[1]


def test_verify_unknown_proposition(capsys):
    code, _, err = run(capsys, "verify", "--prop", "nope")
    assert code == 2 and "nope" in err


def test_verify_seed_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("POSTULATUM_SEED", "42")
    env_out = run(capsys, "verify", "--prop", "fp", "--trials", "20")[1]
    monkeypatch.delenv("POSTULATUM_SEED")
    assert env_out == run(capsys, "verify", "--prop", "fp", "--trials", "20", "--seed", "42")[1]
    assert "seed: 0\n" in run(capsys, "verify", "--prop", "fp", "--trials", "2")[1]


def test_verify_bad_seed_environment(capsys, monkeypatch):
    monkeypatch.setenv("POSTULATUM_SEED", "banana")
    assert run(capsys, "verify", "--prop", "fp", "--trials", "2")[0] == 2


def test_verify_failures_exit_one(capsys):
    code, out, _ = run(capsys, "verify", "--prop", "4.1", "--trials", "3", "--tol", "10")
    assert code == 1 and "failures: 3\n" in out


def test_verify_figure(capsys, tmp_path):
    first, second = tmp_path / "a.png", tmp_path / "b.png"
    assert run(capsys, "verify", "--prop", "4.2", "--trials", "50", "--figure", str(first))[0] == 0
    run(capsys, "verify", "--prop", "4.2", "--trials", "50", "--figure", str(second))
    assert first.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
    assert first.read_bytes() == second.read_bytes()


def test_construct_bolyai(capsys, tmp_path):
    svg, trace = tmp_path / "b.svg", tmp_path / "b.txt"
    code, out, _ = run(capsys, "construct", "--program", "bolyai", "--scene", str(SCENES / "bolyai_diameter.scene"),
                       "--svg", str(svg), "--trace", str(trace))
    assert code == 0 and out == ""
    assert svg.read_text() == (GOLDEN / "bolyai_diameter.svg").read_text()
    assert trace.read_text().endswith("status ok\n")


def test_construct_trace_to_stdout(capsys):
    code, out, _ = run(capsys, "construct", "--program", "parallel_i31", "--scene", str(SCENES / "parallel_i31.scene"))
    assert code == 0 and out.startswith("program parallel_i31\n")


def test_construct_copy_angle(capsys):
    assert run(capsys, "construct", "--program", "copy_angle", "--scene", str(SCENES / "copy_angle.scene"))[0] == 0


def test_construct_point_on_line(capsys):
    code, out, err = run(capsys, "construct", "--program", "parallel_i31",
                         "--scene", str(SCENES / "parallel_i31_on_line.scene"))
    assert code == 1 and "PointOnLine" in err and "status failed" in out


def test_construct_missing_scene(capsys):
    code, _, err = run(capsys, "construct", "--program", "bolyai", "--scene", "/nonexistent.scene")
    assert code == 2 and len(err.strip().splitlines()) == 1


def test_construct_bad_scene(capsys, tmp_path):
    path = tmp_path / "bad.scene"
    path.write_text("model klein\npoint P 0 zero\n")
    code, _, err = run(capsys, "construct", "--program", "bolyai", "--scene", str(path))
    assert code == 2 and "line 2" in err


def test_construct_wrong_model(capsys):
    code, _, _ = run(capsys, "construct", "--program", "bolyai", "--scene", str(SCENES / "parallel_i31.scene"))
    assert code == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "postulatum", "analyze", "--graph", "bolyai.kg"],
                          capture_output=True, text=True)
    assert proc.returncode == 1 and proc.stdout.startswith("violations: 2\n")
