import json

import pytest

from schoberkit.cli import TIMING_KEY, main
from schoberkit.lbcx import LBComplex
from schoberkit.lbcx.derived import koszul_complex
from schoberkit.schober import interval_diagram, unit_push_diagram


def run(capsys, *argv):
    code = main([*argv, "--json"])
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip().startswith("{") else out


@pytest.fixture
def files(tmp_path):
    def write(name, data):
        p = tmp_path / name
        p.write_text(json.dumps(data))
        return str(p)
    return write


def test_cohp_table(capsys):
    code, rep = run(capsys, "cohp", "table", "--m", "2", "--dmin", "-4", "--dmax", "1")
    assert code == 0 and rep["passed"]
    assert rep["command"] == "cohp table"


def test_lbcx_commands(capsys, files):
    line = files("o2.json", LBComplex.line(2, 2).to_json())
    code, rep = run(capsys, "lbcx", "rgamma", "--file", line)
    assert code == 0 and rep["data"]["dims"] == {"0": 6}
    code, rep = run(capsys, "lbcx", "rgamma", "--file", line, "--twist", "-5")
    assert code == 0 and rep["data"]["dims"] == {"2": 1}

    kz = files("k.json", koszul_complex(2).to_json())
    assert run(capsys, "lbcx", "is-zero", "--file", kz)[0] == 0
    assert run(capsys, "lbcx", "is-zero", "--file", line)[0] == 1
    assert run(capsys, "lbcx", "is-zero", "--file", line, "--expect", "false")[0] == 0

    # Ext(O(3), O) = H(O(-3)), dual to H^0(O) on P^2
    o = files("o.json", LBComplex.line(2, 0).to_json())
    o3 = files("o3.json", LBComplex.line(2, 3).to_json())
    code, rep = run(capsys, "lbcx", "ext-table", "--left", o3, "--right", o)
    assert code == 0 and rep["data"]["ext"] == {"2": 1}
    assert run(capsys, "lbcx", "ext-table", "--left", line, "--right", o)[1]["data"]["ext"] == {}


def test_malformed_input_exits_2(capsys, files, tmp_path):
    assert main(["lbcx", "rgamma", "--file", str(tmp_path / "missing.json")]) == 2
    bad = files("bad.json", {"m": 2, "terms": {"0": [0]}})
    assert main(["lbcx", "rgamma", "--file", bad]) == 2
    assert main(["skeleton", "classify", "--point", '{"radii": [1], "angles_turns": ["x"]}']) == 2
    assert main(["hyper", "monad", "--n", "1"]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["cohp", "table"])
    assert exc.value.code == 2


def test_schober_check_exit_codes(capsys, files):
    ok = files("ok.json", {"dim_phi": 1, "dim_psi": 1, "p": [["0"]], "q": [["0"]]})
    bad = files("bad.json", {"dim_phi": 1, "dim_psi": 1, "p": [["1"]], "q": [["1"]]})
    assert run(capsys, "schober", "check", "--file", ok)[0] == 0
    assert run(capsys, "schober", "check", "--file", bad)[0] == 1
    garbled = files("garbled.json", {"dim_phi": 1, "dim_psi": 2, "p": [["1"]], "q": [["1"]]})
    assert main(["schober", "check", "--file", garbled]) == 2


def test_schober_ledger_and_diagrams(capsys, files):
    code, rep = run(capsys, "schober", "ledger", "--taus", "1/2,1/2,-1")
    assert code == 0
    a = files("a.json", unit_push_diagram(2).to_json())
    code, rep = run(capsys, "schober", "diagram-hom", "--left", a, "--right", a)
    assert code == 0 and rep["data"]["ext"] == {"0": 1, "1": 1}
    b = files("b.json", interval_diagram(3, 1, 1).to_json())
    assert main(["schober", "diagram-hom", "--left", a, "--right", b]) == 2


def test_fan_and_skeleton(capsys):
    code, rep = run(capsys, "fan", "--n", "3")
    assert code == 0
    code, rep = run(capsys, "skeleton", "classify", "--point", '{"radii": [0, 0, 3], "angles_turns": [0, 0, 0]}')
    assert code == 0
    code, rep = run(capsys, "skeleton", "verify-section", "--n", "2", "--tau=-1/2", "--samples", "50")
    assert code == 0 and rep["passed"]


def test_cellccc_commands(capsys):
    assert run(capsys, "cellccc", "compare")[0] == 0
    code, rep = run(capsys, "cellccc", "convolve", "--left", "twist", "--right", "loc:2")
    assert code == 0
    assert run(capsys, "cellccc", "loc", "--lambda", "2", "--others", "3,5")[0] == 0
    assert main(["cellccc", "convolve", "--left", "nope", "--right", "unit"]) == 2


def test_json_is_deterministic(capsys):
    argv = ("hyper", "spherical-check", "--n", "2")
    code1, r1 = run(capsys, *argv)
    code2, r2 = run(capsys, *argv)
    assert code1 == code2 == 0
    r1.pop(TIMING_KEY)
    r2.pop(TIMING_KEY)
    assert r1 == r2


def test_out_directory(capsys, tmp_path):
    out = tmp_path / "rep"
    assert main(["suite", "--n", "2", "--out", str(out)]) == 0
    capsys.readouterr()
    rep = json.loads((out / "report.json").read_text())
    assert rep["passed"] and rep["command"] == "suite"
    assert (out / "report.md").read_text().startswith("# suite")


def test_suite_full_flag(capsys):
    assert main(["--suite", "full", "--n", "2"]) == 0
    assert "| check | verdict |" in capsys.readouterr().out
