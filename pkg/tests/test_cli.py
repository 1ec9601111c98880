import json
import subprocess
import sys

import pytest

from localhecke.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_witt_laws_json(capsys, tmp_path):
    desc = tmp_path / "q2.toml"
    desc.write_text('p = 2\nkind = "mixed"\neisenstein = [-2, 1]\n')
    code, out, _ = run(capsys, "witt", "laws", "--field", str(desc), "--n", "2", "--precision", "4", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["formulas"]["sum"][1] == "X1 + Y1 - X0*Y0"
    assert data["ghost_consistent"] and data["classical_match"]


def test_missing_descriptor_exit_2(capsys):
    code, _, err = run(capsys, "field", "info", "--field", "no/such/file.toml")
    assert code == 2 and "no such field descriptor" in err


def test_bad_flags_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["hecke", "convolve", "--field", "Q2"])
    assert exc.value.code == 2


def test_bad_coset_json_exit_2(capsys):
    code, _, err = run(capsys, "hecke", "convolve", "--field", "Q2", "--a", "{nu", "--b", '{"nu": [0, 0]}')
    assert code == 2


def test_budget_exit_3(capsys):
    code, _, err = run(capsys, "--budget", "5", "close-verify", "--field-a", "Q2_sqrt2", "--field-b", "F2t", "--level", "1")
    assert code == 3 and "budget" in err


def test_close_verify_spherical(capsys):
    code, out, _ = run(capsys, "close-verify", "--field-a", "Q2", "--field-b", "F2t", "--level", "0", "--json")
    assert code == 0
    rep = json.loads(out)
    assert rep["summary"]["all_equal"] and rep["summary"]["discrepancies"] == 0
    assert set(rep["instances"][0]) == {"product", "lhs_terms", "rhs_terms", "equal"}


def test_hecke_convolve_round_trip(capsys):
    code, out, _ = run(capsys, "hecke", "convolve", "--field", "Q2", "--level", "1",
                       "--a", '{"nu": [1, 0]}', "--b", '{"nu": [0, -1]}', "--json")
    assert code == 0
    terms = json.loads(out)["terms"]
    assert len(terms) == 1 and terms[0]["coeff"] == 1
    coset = json.dumps(terms[0]["coset"])
    code, out2, _ = run(capsys, "hecke", "convolve", "--field", "Q2", "--level", "1", "--a", coset, "--b", '{"nu": [0, 0]}', "--json")
    assert code == 0 and json.loads(out2)["terms"][0]["coset"] == terms[0]["coset"]


def test_lt_commands(capsys):
    assert run(capsys, "lt", "check", "--field", "Q2", "--degree", "8")[0] == 0
    code, out, _ = run(capsys, "lt", "tower", "--field", "Q3", "--json")
    assert code == 0 and json.loads(out)["ok"]
    code, out, _ = run(capsys, "lt", "torsion", "--field", "Q2", "--json")
    assert json.loads(out)["degrees"] == [1, 2]
    code, out, _ = run(capsys, "lt", "mult", "--field", "Q2", "--scalar", "x")
    assert code == 2


def test_field_iso(capsys):
    assert run(capsys, "field", "iso", "--field", "Q2_root4_2", "--level", "4")[0] == 0
    assert run(capsys, "field", "iso", "--field", "Q2", "--level", "2")[0] == 2


def test_family_hecke(capsys):
    code, out, _ = run(capsys, "family-hecke", "--fields", "Q2_sqrt2", "--tail", "F2t", "--level", "1", "--json")
    assert code == 0
    assert json.loads(out)["exceptions"] == []


def test_console_script_is_deterministic():
    cmd = [sys.executable, "-m", "localhecke.cli", "close-verify", "--field-a", "Q2_sqrt2",
           "--field-b", "F2t", "--level", "1", "--json"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and len(a) > 1000
