import json
import shutil
import subprocess

import pytest

from groundedtruth.cli import main


@pytest.fixture(scope="module")
def built(tmp_path_factory):
    d = tmp_path_factory.mktemp("cli")
    frag, state = d / "frag.json", d / "state.json"
    assert main(["build", "--model", "two", "--depth", "2", "--reflect", "1", "--with-liar",
                 "--with-truthteller", "--out", str(frag)]) == 0
    assert main(["fixpoint", str(frag), "--out", str(state)]) == 0
    return d, frag, state


def test_build_reports_counts(tmp_path, capsys):
    out = tmp_path / "f.json"
    assert main(["build", "--model", "two", "--depth", "2", "--reflect", "1", "--out", str(out)]) == 0
    text = capsys.readouterr().out
    assert "universe" in text and "Z1 4" in text and "Z2 8" in text
    assert json.loads(out.read_text())["format"]


def test_fixpoint_summary(built, capsys):
    d, frag, _ = built
    assert main(["fixpoint", str(frag), "--out", str(d / "again.json")]) == 0
    text = capsys.readouterr().out
    assert "fixpoint reached at k=" in text
    assert "liar: Ungrounded" in text and "truthteller: Ungrounded" in text


def test_reruns_are_byte_identical(built, tmp_path):
    _, frag, state = built
    frag2, state2 = tmp_path / "frag.json", tmp_path / "state.json"
    main(["build", "--model", "two", "--depth", "2", "--reflect", "1", "--with-liar",
          "--with-truthteller", "--out", str(frag2)])
    main(["fixpoint", str(frag2), "--out", str(state2)])
    assert frag.read_bytes() == frag2.read_bytes()
    assert state.read_bytes() == state2.read_bytes()


def test_query_examples(built, capsys):
    _, frag, state = built
    code = next(e["code"] for e in json.loads(frag.read_text())["sentences"] if e["text"] == "P(a)")
    capsys.readouterr()
    assert main(["query", f"T(#{code})", "--fragment", str(frag), "--state", str(state)]) == 0
    line = capsys.readouterr().out
    assert line.startswith("GroundedTrue") and "stage" in line
    liar = json.loads(frag.read_text())["designated"]["liar"]["text"]
    assert main(["query", liar, "--fragment", str(frag), "--state", str(state)]) == 0
    assert capsys.readouterr().out.startswith("Ungrounded")


def test_query_outside_fragment(built, capsys):
    _, frag, state = built
    deep = " & ".join(["P(a)"] * 6)
    assert main(["query", deep, "--fragment", str(frag), "--state", str(state)]) == 5
    assert "not in the fragment" in capsys.readouterr().out


def test_query_parse_error(built):
    _, frag, state = built
    assert main(["query", "P(a", "--fragment", str(frag), "--state", str(state)]) == 2


def test_verify_passes(built, tmp_path):
    _, frag, state = built
    out = tmp_path / "report.json"
    assert main(["verify", "--fragment", str(frag), "--state", str(state), "--format", "json",
                 "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["passed"] and len(data["reports"]) == 5


def test_verify_surrogate_lists_discrepancies(tmp_path):
    frag, state, out = tmp_path / "f.json", tmp_path / "s.json", tmp_path / "r.json"
    assert main(["build", "--surrogate-bound", "4", "--depth", "1", "--reflect", "1", "--out", str(frag)]) == 0
    assert main(["fixpoint", str(frag), "--out", str(state)]) == 0
    assert main(["verify", "--fragment", str(frag), "--state", str(state), "--suite", "quantifier-table",
                 "--format", "json", "--out", str(out)]) == 0
    report = json.loads(out.read_text())["reports"][0]
    assert report["discrepancies"]


def test_corrupted_state(built, tmp_path):
    _, frag, state = built
    bad = tmp_path / "bad.json"
    data = json.loads(state.read_text())
    data["fixpoint"] = data["fixpoint"][:-5]
    data["iterates"][-1] = data["fixpoint"]
    bad.write_text(json.dumps(data))
    assert main(["verify", "--fragment", str(frag), "--state", str(bad)]) == 2
    bad.write_text("garbage")
    assert main(["verify", "--fragment", str(frag), "--state", str(bad)]) == 2


@pytest.mark.parametrize("args", [
    ["build", "--model", "/no/such/model.json", "--out", "x.json"],
    ["build", "--model", "two", "--depth", "0", "--out", "x.json"],
    ["build", "--model", "two", "--reflect", "0", "--out", "x.json"],
    ["build", "--surrogate-bound", "1", "--out", "x.json"],
    ["build", "--model", "two", "--surrogate-bound", "4", "--out", "x.json"],
    ["frobnicate"],
])
def test_input_errors(args, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert main(args) == 2


def test_unknown_suite(built):
    _, frag, state = built
    assert main(["verify", "--fragment", str(frag), "--state", str(state), "--suite", "nope"]) == 2


def test_cap_exceeded(tmp_path, capsys):
    assert main(["build", "--model", "two", "--depth", "3", "--reflect", "2", "--cap", "100",
                 "--out", str(tmp_path / "f.json")]) == 3
    assert "while adding" in capsys.readouterr().err


@pytest.mark.skipif(shutil.which("gt") is None, reason="console script not installed")
def test_console_script(tmp_path):
    out = subprocess.run(["gt", "build", "--model", "one", "--depth", "1", "--reflect", "1",
                          "--out", str(tmp_path / "f.json")], capture_output=True, text=True)
    assert out.returncode == 0 and "universe" in out.stdout
